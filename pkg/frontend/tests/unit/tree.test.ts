import { describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, CohortNode } from "../../src/api.js";
import { initialState, Store } from "../../src/state.js";
import { layoutTree, TreeView } from "../../src/views/tree.js";

function node(id: string, parentId: string | null, extra: Partial<CohortNode> = {}): CohortNode {
  return {
    id, parentId,
    name: id.toUpperCase(),
    queryText: "age >= 65",
    effectiveQuery: "age >= 65",
    memberCount: 10,
    createdAt: "2026-01-01T00:00:00+00:00",
    hasTrace: false,
    ...extra,
  };
}

function makeView() {
  const store = new Store(initialState());
  const view = new TreeView(new ApiClient(""), store, () => {});
  return { store, view };
}

describe("layoutTree", () => {
  it("assigns one row per node in preorder and depth per level", () => {
    const laid = layoutTree([
      node("c1", null), node("c2", "c1"), node("c3", "c1"), node("c4", "c2"),
    ]);
    const byId = Object.fromEntries(laid.map((l) => [l.node.id, l]));
    expect(byId.c1).toMatchObject({ depth: 0, row: 0 });
    expect(byId.c2).toMatchObject({ depth: 1, row: 1 });
    expect(byId.c4).toMatchObject({ depth: 2, row: 2 }); // preorder: under c2
    expect(byId.c3).toMatchObject({ depth: 1, row: 3 });
  });

  it("handles multiple roots", () => {
    const laid = layoutTree([node("c1", null), node("c2", null)]);
    expect(laid.map((l) => l.row)).toEqual([0, 1]);
    expect(laid.map((l) => l.depth)).toEqual([0, 0]);
  });
});

describe("TreeView.render", () => {
  it("draws one node group per cohort and links for children", () => {
    const { view } = makeView();
    view.render({ nodes: [node("c1", null), node("c2", "c1"), node("c3", "c1")] });
    expect(view.root.querySelectorAll(".tree-node").length).toBe(3);
    expect(view.root.querySelectorAll(".tree-link").length).toBe(2);
    const names = [...view.root.querySelectorAll(".tree-node-name")].map((t) => t.textContent);
    expect(names).toContain("C1 (10)");
  });

  it("clicking a node selects it and highlights it", () => {
    const { store, view } = makeView();
    view.render({ nodes: [node("c1", null), node("c2", "c1")] });
    const target = view.root.querySelector('[data-cohort-id="c2"]') as SVGGElement;
    target.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(store.get().selectedCohortId).toBe("c2");
    const again = view.root.querySelector('[data-cohort-id="c2"]')!;
    expect(again.classList.contains("selected")).toBe(true);
  });

  it("shows the effective query as a tooltip", () => {
    const { view } = makeView();
    view.render({
      nodes: [node("c2", null, { effectiveQuery: "male == 1 and age >= 65" })],
    });
    expect(view.root.querySelector(".tree-node title")!.textContent)
      .toBe("male == 1 and age >= 65");
  });
});

describe("TreeView.showError", () => {
  it("renders parse errors with offset detail", () => {
    const { view } = makeView();
    view.showError(new ApiError(400, {
      kind: "parse_error", message: "bad token",
      offset: 4, expectedTokens: ["==", ">="], found: ">>",
    }));
    const box = view.root.querySelector(".error-box")!;
    expect(box.hasAttribute("hidden")).toBe(false);
    expect(box.querySelector(".error-kind")!.textContent).toBe("parse_error");
    expect(box.textContent).toContain("expected ==, >=");
  });

  it("renders wrangler failures including the trace and repairs", () => {
    const { view } = makeView();
    view.showError(new ApiError(400, {
      kind: "missing_field",
      message: "the dataset lacks a field",
      concept: "antiplatelet therapy administration",
      trace: {
        requestText: "patients who received an antiplatelet agent",
        normalizations: [], roi: [],
        inferenceText: "needs a medication timing record",
        dslText: 'REQUIRES_FIELD("antiplatelet therapy administration")',
        repairs: [{ error: "ParseError: x", revisedDsl: "age >= 65" }],
        involvedFields: [], status: "failed",
      },
    }));
    const box = view.root.querySelector(".error-box")!;
    expect(box.textContent).toContain("missing_field");
    expect(box.textContent).toContain("antiplatelet agent");
    expect(box.textContent).toContain("needs a medication timing record");
    expect(box.querySelectorAll(".error-repair").length).toBe(1);
    expect(box.textContent).toContain("age >= 65");
  });

  it("clears on null", () => {
    const { view } = makeView();
    view.showError(new Error("x"));
    view.showError(null);
    expect(view.root.querySelector(".error-box")!.hasAttribute("hidden")).toBe(true);
  });
});

describe("TreeView.submit", () => {
  it("creates a child of the selected cohort and selects the result", async () => {
    const store = new Store(initialState());
    store.update({ selectedCohortId: "c1" });
    const api = new ApiClient("");
    const created = node("c2", "c1");
    const nlSpy = vi.spyOn(api, "createCohortNl").mockResolvedValue({
      cohort: created, trace: {} as never, warnings: [],
    });
    vi.spyOn(api, "getCohorts").mockResolvedValue({ nodes: [node("c1", null), created] });
    let mutated = 0;
    const view = new TreeView(api, store, () => mutated++);
    (view.root.querySelector(".nl-input") as HTMLTextAreaElement).value = "refine it";
    await view.submit();
    expect(nlSpy).toHaveBeenCalledWith("refine it", "c1");
    expect(store.get().selectedCohortId).toBe("c2");
    expect(mutated).toBe(1);
    expect(view.root.querySelectorAll(".tree-node").length).toBe(2);
  });

  it("surfaces empty-cohort warnings inline", async () => {
    const store = new Store(initialState());
    const api = new ApiClient("");
    vi.spyOn(api, "createCohortNl").mockResolvedValue({
      cohort: node("c1", null), trace: {} as never,
      warnings: ["cohort c1 has no members"],
    });
    vi.spyOn(api, "getCohorts").mockResolvedValue({ nodes: [node("c1", null)] });
    const view = new TreeView(api, store, () => {});
    (view.root.querySelector(".nl-input") as HTMLTextAreaElement).value = "nobody";
    await view.submit();
    const warnings = view.root.querySelector(".warnings-box")!;
    expect(warnings.hasAttribute("hidden")).toBe(false);
    expect(warnings.textContent).toContain("no members");
  });
});
