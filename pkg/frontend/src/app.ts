/** Application wiring: one state store, four views, refreshes routed by
 * which state fields changed. All data flows through the HTTP API.
 */

import { ApiClient, Codebook } from "./api.js";
import { el } from "./dom.js";
import { initialState, Store, ViewState } from "./state.js";
import { InspectionView } from "./views/inspection.js";
import { MatrixView } from "./views/matrix.js";
import { PatientView } from "./views/patient.js";
import { TreeView } from "./views/tree.js";

export interface App {
  api: ApiClient;
  store: Store<ViewState>;
  tree: TreeView;
  matrix: MatrixView;
  inspection: InspectionView;
  patient: PatientView;
  codebook: Codebook;
}

const MATRIX_FIELDS: (keyof ViewState)[] = [
  "selectedCohortId", "bpType", "cycleHours", "legendBounds",
  "sortKey", "outcomeKey", "direction", "cycleLo", "cycleHi",
];
const INSPECTION_FIELDS: (keyof ViewState)[] = ["selectedCohortId", "inspectionExpanded"];
const PATIENT_FIELDS: (keyof ViewState)[] = [
  "selectedUid", "bpType", "cycleHours", "baselineLow", "baselineHigh",
];

export async function createApp(container: HTMLElement, baseUrl = ""): Promise<App> {
  const api = new ApiClient(baseUrl);
  const store = new Store<ViewState>(initialState());

  const matrix = new MatrixView(api, store);
  const patient = new PatientView(api, store);
  const inspection = new InspectionView(api, store, () => void tree.refresh());
  const tree: TreeView = new TreeView(api, store, () => void matrix.refresh());

  const codebook = await api.getCodebook();
  matrix.buildControls(codebook);

  const toolbar = el("div", { class: "toolbar" });
  toolbar.append(el("span", { class: "dataset-name" },
    `${codebook.datasetName} v${codebook.version}`));
  const inspectBtn = el("button", { class: "inspect-toggle" }, "Inspect cohort");
  inspectBtn.addEventListener("click", () => {
    store.update({ inspectionExpanded: !store.get().inspectionExpanded });
  });
  toolbar.append(inspectBtn);

  const left = el("div", { class: "pane pane-left" });
  left.append(toolbar, tree.root, inspection.root);
  const right = el("div", { class: "pane pane-right" });
  right.append(matrix.root, patient.root);
  const shell = el("div", { class: "app-shell" });
  shell.append(left, right);
  container.append(shell);

  let prev = store.get();
  const changed = (next: ViewState, fields: (keyof ViewState)[]) =>
    fields.some((f) => next[f] !== prev[f]);
  store.subscribe((next) => {
    const refreshMatrix = changed(next, MATRIX_FIELDS);
    const refreshInspection = changed(next, INSPECTION_FIELDS);
    const refreshPatient = changed(next, PATIENT_FIELDS);
    prev = next;
    if (refreshMatrix) void matrix.refresh();
    if (refreshInspection) void inspection.refresh();
    if (refreshPatient) void patient.refresh();
  });

  await tree.refresh();
  return { api, store, tree, matrix, inspection, patient, codebook };
}
