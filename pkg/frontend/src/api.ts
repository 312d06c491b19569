/** Typed client for the cohortlab HTTP API.
 *
 * Every payload interface mirrors the server's JSON verbatim; the client
 * performs no computation on cohort membership, statistics, or geometry.
 */

export interface FieldDescriptor {
  name: string;
  table: "clinical" | "bp" | "events";
  dtype: "numeric" | "categorical";
  unit?: string;
  coding?: Record<string, string>;
  description?: string;
}

export interface Codebook {
  datasetName: string;
  version: string;
  fields: FieldDescriptor[];
}

export interface CohortNode {
  id: string;
  name: string;
  parentId: string | null;
  queryText: string;
  effectiveQuery: string;
  memberCount: number;
  createdAt: string;
  hasTrace: boolean;
}

export interface CohortTreePayload {
  nodes: CohortNode[];
}

export interface NormalizationEntry {
  rawTerm: string;
  normalizedTerm: string;
  candidateField: string | null;
}

export interface RepairRecord {
  error: string;
  revisedDsl: string | null;
}

export interface WranglerTrace {
  requestText: string;
  normalizations: NormalizationEntry[];
  roi: { table: string; field: string }[];
  inferenceText: string;
  dslText: string;
  repairs: RepairRecord[];
  involvedFields: string[];
  status: "success" | "failed";
}

export interface LegendEntry {
  upperBound: number | null; // null encodes +infinity (the last band)
  name: string;
  colorToken: string;
}

export interface FoldConfigPayload {
  cycleHours: number;
  bpType: string;
  legend: LegendEntry[];
  opacityFloor: number;
  opacityRefCount: number;
}

export interface MatrixRow {
  uid: string;
  outcomeBand: "good" | "moderate" | "poor" | "unknown";
  sortValue: number | null;
}

export interface MatrixCell {
  row: number;
  window: number;
  meanValue: number;
  count: number;
  categoryName: string;
  alpha: number;
}

export interface MatrixModel {
  rows: MatrixRow[];
  nWindows: number;
  cells: MatrixCell[];
  config: FoldConfigPayload;
}

export interface CycleDistribution {
  cycleHours: number;
  bins: { binStart: number; count: number }[];
}

export interface SmallMultiple {
  field: string;
  kind: "histogram" | "bar";
  title: string;
  binEdges: number[] | null;
  categories: string[] | null;
  preCounts: number[];
  postCounts: number[];
  preMissing: number;
  postMissing: number;
}

export interface Inspection {
  cohort: CohortNode;
  trace: WranglerTrace | null;
  smallMultiples: SmallMultiple[];
}

export interface WrapKnot {
  tInCycle: number;
  value: number;
  theta: number;
  radius: number;
  x: number;
  y: number;
}

export interface WrapSegment {
  segmentIdx: number;
  samples: [number, number][];
  knotFlags: boolean[];
  aboveBaseline: boolean[];
  strokeAlpha: number;
  knots: WrapKnot[];
}

export interface WrapGeometry {
  segments: WrapSegment[];
  baselineRadius: number;
  config: {
    cycleHours: number;
    bpType: string;
    baseline: number;
    rMin: number;
    rMax: number;
    bpLo: number;
    bpHi: number;
    samplesPerSpan: number;
  };
}

export type BarFlag = "above" | "below" | "inRange" | "outRange";

export interface BarModel {
  bars: { t: number; value: number; flag: BarFlag }[];
  baselineLow: number;
  baselineHigh: number | null;
  eventMarks: { kind: string; tStart: number; tEnd: number | null }[];
  bpType: string;
}

export interface GroupSummary {
  memberCount: number;
  perBpType: Record<string, {
    stats: Record<string, number>;
    histogram: { binStart: number; binWidth: number; counts: number[] };
  }>;
  attributeTables: Record<string, { counts: Record<string, number>; missing: number }>;
}

/** Server error body; `kind` is stable, extras depend on the kind. */
export interface ApiErrorBody {
  kind: string;
  message: string;
  trace?: WranglerTrace | null;
  concept?: string | null;
  offset?: number;
  expectedTokens?: string[];
  found?: string;
  field?: string;
  suggestions?: string[];
  [key: string]: unknown;
}

export class ApiError extends Error {
  constructor(public status: number, public body: ApiErrorBody) {
    super(body.message);
  }
}

export interface MatrixParams {
  bpType?: string;
  cycleHours?: number;
  sortKey?: string;
  outcomeKey?: string;
  direction?: "asc" | "desc";
  cycleLo?: number;
  cycleHi?: number;
  legendBounds?: string;
}

function qs(params: Record<string, string | number | undefined>): string {
  const parts: string[] = [];
  for (const [k, v] of Object.entries(params)) {
    if (v !== undefined) parts.push(`${encodeURIComponent(k)}=${encodeURIComponent(String(v))}`);
  }
  return parts.length ? `?${parts.join("&")}` : "";
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await fetch(this.baseUrl + path, init);
    const payload = await resp.json();
    if (!resp.ok) throw new ApiError(resp.status, payload as ApiErrorBody);
    return payload as T;
  }

  getCodebook(): Promise<Codebook> {
    return this.request("GET", "/api/codebook");
  }

  getCohorts(): Promise<CohortTreePayload> {
    return this.request("GET", "/api/cohorts");
  }

  createCohortNl(text: string, parentId?: string | null) {
    return this.request<{ cohort: CohortNode; trace: WranglerTrace; warnings: string[] }>(
      "POST", "/api/cohorts/nl", { text, parentId: parentId ?? null });
  }

  createCohortDsl(queryText: string, parentId?: string | null) {
    return this.request<{ cohort: CohortNode; warnings: string[] }>(
      "POST", "/api/cohorts/dsl", { queryText, parentId: parentId ?? null });
  }

  deleteCohort(id: string): Promise<{ removed: string[] }> {
    return this.request("DELETE", `/api/cohorts/${encodeURIComponent(id)}`);
  }

  getSummary(id: string): Promise<GroupSummary> {
    return this.request("GET", `/api/cohorts/${encodeURIComponent(id)}/summary`);
  }

  getMatrix(id: string, params: MatrixParams = {}): Promise<MatrixModel> {
    return this.request("GET", `/api/cohorts/${encodeURIComponent(id)}/matrix${qs({ ...params })}`);
  }

  getCycleDistribution(id: string, cycleHours?: number, bins?: number): Promise<CycleDistribution> {
    return this.request(
      "GET", `/api/cohorts/${encodeURIComponent(id)}/cycle-distribution${qs({ cycleHours, bins })}`);
  }

  getInspection(id: string): Promise<Inspection> {
    return this.request("GET", `/api/cohorts/${encodeURIComponent(id)}/inspection`);
  }

  getWrap(uid: string, params: { bpType?: string; cycleHours?: number; baseline?: number } = {}):
      Promise<WrapGeometry> {
    return this.request("GET", `/api/patients/${encodeURIComponent(uid)}/wrap${qs(params)}`);
  }

  getBars(uid: string, params: { bpType?: string; baselineLow?: number; baselineHigh?: number } = {}):
      Promise<BarModel> {
    return this.request("GET", `/api/patients/${encodeURIComponent(uid)}/bars${qs(params)}`);
  }

  saveSession(path?: string): Promise<{ path: string; records: number }> {
    return this.request("POST", "/api/session/save", { path: path ?? null });
  }

  loadSession(path?: string): Promise<CohortTreePayload> {
    return this.request("POST", "/api/session/load", { path: path ?? null });
  }
}
