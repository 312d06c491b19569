/** Central view state plus a minimal subscription store.
 *
 * The state holds only selections and control values; all cohort data,
 * statistics, and geometry live in API payloads fetched on demand.
 */

export interface ViewState {
  selectedCohortId: string | null;
  selectedUid: string | null;
  bpType: string;
  cycleHours: number;
  /** comma-separated legend upper bounds, or null for the server default */
  legendBounds: string | null;
  baselineLow: number;
  baselineHigh: number | null; // non-null means dual-range mode
  sortKey: string | null;
  outcomeKey: string | null;
  direction: "asc" | "desc";
  cycleLo: number | null; // brush over the in-cycle distribution
  cycleHi: number | null;
  inspectionExpanded: boolean;
}

export function initialState(): ViewState {
  return {
    selectedCohortId: null,
    selectedUid: null,
    bpType: "sbp",
    cycleHours: 24,
    legendBounds: null,
    baselineLow: 120,
    baselineHigh: null,
    sortKey: null,
    outcomeKey: null,
    direction: "asc",
    cycleLo: null,
    cycleHi: null,
    inspectionExpanded: false, // drawer hidden by default
  };
}

export type Listener<T> = (state: T) => void;

export class Store<T> {
  private listeners: Listener<T>[] = [];

  constructor(private state: T) {}

  get(): T {
    return this.state;
  }

  /** Merge a partial update and notify; no-op when nothing changed. */
  update(patch: Partial<T>): void {
    let changed = false;
    for (const key of Object.keys(patch) as (keyof T)[]) {
      if (this.state[key] !== patch[key]) { changed = true; break; }
    }
    if (!changed) return;
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners.slice()) fn(this.state);
  }

  subscribe(fn: Listener<T>): () => void {
    this.listeners.push(fn);
    return () => {
      const i = this.listeners.indexOf(fn);
      if (i >= 0) this.listeners.splice(i, 1);
    };
  }
}

/** Trailing-edge debounce; the last call within the window wins. */
export function debounce<A extends unknown[]>(fn: (...args: A) => void, ms: number):
    (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      fn(...args);
    }, ms);
  };
}
