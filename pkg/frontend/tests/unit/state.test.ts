import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce, initialState, Store } from "../../src/state.js";

describe("Store", () => {
  it("notifies subscribers on change", () => {
    const store = new Store(initialState());
    const seen: (string | null)[] = [];
    store.subscribe((s) => seen.push(s.selectedCohortId));
    store.update({ selectedCohortId: "c1" });
    store.update({ selectedCohortId: "c2" });
    expect(seen).toEqual(["c1", "c2"]);
    expect(store.get().selectedCohortId).toBe("c2");
  });

  it("skips notification when nothing changed", () => {
    const store = new Store(initialState());
    let calls = 0;
    store.subscribe(() => calls++);
    store.update({ bpType: "sbp" }); // already sbp
    expect(calls).toBe(0);
    store.update({ bpType: "map" });
    expect(calls).toBe(1);
  });

  it("unsubscribe stops notifications", () => {
    const store = new Store(initialState());
    let calls = 0;
    const off = store.subscribe(() => calls++);
    store.update({ cycleHours: 12 });
    off();
    store.update({ cycleHours: 6 });
    expect(calls).toBe(1);
  });

  it("keeps unrelated fields on partial update", () => {
    const store = new Store(initialState());
    store.update({ baselineLow: 150 });
    expect(store.get().bpType).toBe("sbp");
    expect(store.get().baselineLow).toBe(150);
  });
});

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("collapses a burst into the last call", () => {
    const seen: number[] = [];
    const fn = debounce((v: number) => seen.push(v), 150);
    fn(1);
    vi.advanceTimersByTime(100);
    fn(2);
    vi.advanceTimersByTime(100);
    fn(3);
    expect(seen).toEqual([]);
    vi.advanceTimersByTime(150);
    expect(seen).toEqual([3]);
  });

  it("fires again after the window", () => {
    const seen: number[] = [];
    const fn = debounce((v: number) => seen.push(v), 150);
    fn(1);
    vi.advanceTimersByTime(150);
    fn(2);
    vi.advanceTimersByTime(150);
    expect(seen).toEqual([1, 2]);
  });
});
