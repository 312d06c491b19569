/** Cohort transition view: natural-language query box plus a node-link
 * rendering of the cohort tree. Selecting a node makes it the parent of
 * the next submission (conjunctive refinement); clicking the background
 * clears the selection so the next cohort becomes a root.
 */

import { ApiClient, ApiError, CohortNode, CohortTreePayload, WranglerTrace } from "../api.js";
import { clear, el, svg } from "../dom.js";
import { Store, ViewState } from "../state.js";

const NODE_W = 150;
const NODE_H = 44;
const GAP_X = 40;
const GAP_Y = 14;

interface Laid {
  node: CohortNode;
  depth: number;
  row: number;
}

/** Preorder layout: one row per node, one column per depth level. */
export function layoutTree(nodes: CohortNode[]): Laid[] {
  const children = new Map<string | null, CohortNode[]>();
  for (const n of nodes) {
    const list = children.get(n.parentId) ?? [];
    list.push(n);
    children.set(n.parentId, list);
  }
  const out: Laid[] = [];
  let row = 0;
  const walk = (parentId: string | null, depth: number) => {
    for (const n of children.get(parentId) ?? []) {
      out.push({ node: n, depth, row: row++ });
      walk(n.id, depth + 1);
    }
  };
  walk(null, 0);
  return out;
}

export class TreeView {
  readonly root: HTMLElement;
  private input: HTMLTextAreaElement;
  private submitBtn: HTMLButtonElement;
  private errorBox: HTMLElement;
  private warningsBox: HTMLElement;
  private svgHost: HTMLElement;
  private nodes: CohortNode[] = [];

  constructor(private api: ApiClient, private store: Store<ViewState>,
              private onMutated: () => void) {
    this.root = el("div", { class: "tree-view" });
    const form = el("div", { class: "nl-form" });
    this.input = el("textarea", {
      class: "nl-input",
      rows: "2",
      placeholder: "Describe a cohort, e.g. elderly male patients with large-artery stroke",
    });
    this.submitBtn = el("button", { class: "nl-submit" }, "Create cohort");
    this.submitBtn.addEventListener("click", () => void this.submit());
    this.errorBox = el("div", { class: "error-box", hidden: "" });
    this.warningsBox = el("div", { class: "warnings-box", hidden: "" });
    form.append(this.input, this.submitBtn, this.errorBox, this.warningsBox);
    this.svgHost = el("div", { class: "tree-host" });
    this.svgHost.addEventListener("click", (ev) => {
      if (ev.target === this.svgHost || (ev.target as Element).tagName === "svg") {
        this.store.update({ selectedCohortId: null });
        this.render({ nodes: this.nodes });
      }
    });
    this.root.append(form, this.svgHost);
  }

  async refresh(): Promise<void> {
    this.render(await this.api.getCohorts());
  }

  async submit(): Promise<void> {
    const text = this.input.value.trim();
    if (!text) return;
    this.submitBtn.disabled = true;
    try {
      const parent = this.store.get().selectedCohortId;
      const out = await this.api.createCohortNl(text, parent);
      this.showError(null);
      this.showWarnings(out.warnings);
      this.input.value = "";
      this.store.update({ selectedCohortId: out.cohort.id });
      await this.refresh();
      this.onMutated();
    } catch (err) {
      this.showError(err);
    } finally {
      this.submitBtn.disabled = false;
    }
  }

  async remove(id: string): Promise<void> {
    try {
      await this.api.deleteCohort(id);
      const st = this.store.get();
      if (st.selectedCohortId === id) {
        this.store.update({ selectedCohortId: null, selectedUid: null });
      }
      await this.refresh();
      this.onMutated();
    } catch (err) {
      this.showError(err);
    }
  }

  showWarnings(warnings: string[]): void {
    clear(this.warningsBox);
    if (!warnings.length) {
      this.warningsBox.setAttribute("hidden", "");
      return;
    }
    this.warningsBox.removeAttribute("hidden");
    for (const w of warnings) this.warningsBox.append(el("div", { class: "warning" }, w));
  }

  /** Render an API failure inline; wrangler failures include the trace. */
  showError(err: unknown): void {
    clear(this.errorBox);
    if (err == null) {
      this.errorBox.setAttribute("hidden", "");
      return;
    }
    this.errorBox.removeAttribute("hidden");
    if (!(err instanceof ApiError)) {
      this.errorBox.append(el("div", { class: "error-message" }, String(err)));
      return;
    }
    this.errorBox.append(
      el("div", { class: "error-kind" }, err.body.kind),
      el("div", { class: "error-message" }, err.body.message));
    if (err.body.kind === "parse_error" && err.body.expectedTokens) {
      this.errorBox.append(el("div", { class: "error-detail" },
        `at offset ${err.body.offset}: expected ${err.body.expectedTokens.join(", ")}, ` +
        `found ${err.body.found}`));
    }
    if (err.body.suggestions?.length) {
      this.errorBox.append(el("div", { class: "error-detail" },
        `did you mean: ${err.body.suggestions.join(", ")}?`));
    }
    const trace = err.body.trace as WranglerTrace | null | undefined;
    if (trace) {
      const tr = el("div", { class: "error-trace" });
      tr.append(el("div", {}, `request: ${trace.requestText}`));
      if (trace.inferenceText) tr.append(el("div", {}, `inference: ${trace.inferenceText}`));
      if (trace.dslText) tr.append(el("div", {}, `dsl: ${trace.dslText}`));
      for (const r of trace.repairs) {
        tr.append(el("div", { class: "error-repair" },
          `repair: ${r.error}${r.revisedDsl ? ` -> ${r.revisedDsl}` : ""}`));
      }
      this.errorBox.append(tr);
    }
  }

  render(payload: CohortTreePayload): void {
    this.nodes = payload.nodes;
    const laid = layoutTree(payload.nodes);
    clear(this.svgHost);
    const maxDepth = laid.reduce((m, l) => Math.max(m, l.depth), 0);
    const width = (maxDepth + 1) * (NODE_W + GAP_X) + 20;
    const height = Math.max(1, laid.length) * (NODE_H + GAP_Y) + 20;
    const root = svg("svg", {
      width: String(width), height: String(height),
      viewBox: `0 0 ${width} ${height}`, class: "tree-svg",
    });
    const pos = new Map<string, { x: number; y: number }>();
    for (const l of laid) {
      pos.set(l.node.id, {
        x: 10 + l.depth * (NODE_W + GAP_X),
        y: 10 + l.row * (NODE_H + GAP_Y),
      });
    }
    for (const l of laid) {
      if (l.node.parentId === null) continue;
      const p = pos.get(l.node.parentId)!;
      const c = pos.get(l.node.id)!;
      root.append(svg("path", {
        class: "tree-link",
        d: `M ${p.x + NODE_W} ${p.y + NODE_H / 2} C ${c.x - GAP_X / 2} ${p.y + NODE_H / 2}, ` +
           `${c.x - GAP_X / 2} ${c.y + NODE_H / 2}, ${c.x} ${c.y + NODE_H / 2}`,
        fill: "none", stroke: "#999",
      }));
    }
    const selected = this.store.get().selectedCohortId;
    for (const l of laid) {
      const { x, y } = pos.get(l.node.id)!;
      const g = svg("g", {
        class: `tree-node${l.node.id === selected ? " selected" : ""}`,
        "data-cohort-id": l.node.id,
        transform: `translate(${x},${y})`,
      });
      g.append(svg("rect", {
        width: String(NODE_W), height: String(NODE_H), rx: "6",
        fill: l.node.id === selected ? "#deebf7" : "#f7f7f7",
        stroke: l.node.id === selected ? "#3182bd" : "#bbb",
      }));
      const name = svg("text", { x: "8", y: "18", class: "tree-node-name" });
      name.textContent = `${l.node.name} (${l.node.memberCount})`;
      const query = svg("text", { x: "8", y: "34", class: "tree-node-query" });
      const q = l.node.queryText;
      query.textContent = q.length > 22 ? q.slice(0, 21) + "…" : q;
      const title = svg("title");
      title.textContent = l.node.effectiveQuery;
      g.append(name, query, title);
      g.addEventListener("click", (ev) => {
        ev.stopPropagation();
        this.store.update({ selectedCohortId: l.node.id });
        this.render({ nodes: this.nodes });
      });
      root.append(g);
    }
    this.svgHost.append(root);
  }
}
