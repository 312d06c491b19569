/** Inspection drawer for one cohort: the original request, the
 * wrangler's normalization/inference explanation, the derived DSL
 * (editable and re-submittable), repair history, and one small multiple
 * per involved field contrasting the parent population (outline) with
 * the refined cohort (filled). Hidden until a cohort is selected and
 * expanded.
 */

import { ApiClient, ApiError, Inspection, SmallMultiple } from "../api.js";
import { clear, el, svg } from "../dom.js";
import { Store, ViewState } from "../state.js";

const SM_W = 180;
const SM_H = 80;

/** Render one pre/post distribution thumbnail. */
export function renderSmallMultiple(spec: SmallMultiple): HTMLElement {
  const host = el("div", { class: "small-multiple", "data-field": spec.field });
  host.append(el("div", { class: "sm-title" }, spec.title));
  const n = spec.preCounts.length;
  const peak = Math.max(1, ...spec.preCounts, ...spec.postCounts);
  const plot = svg("svg", {
    width: String(SM_W), height: String(SM_H),
    viewBox: `0 0 ${SM_W} ${SM_H}`, class: "sm-plot",
  });
  const bw = SM_W / Math.max(1, n);
  for (let i = 0; i < n; i++) {
    const preH = (spec.preCounts[i] / peak) * (SM_H - 4);
    const postH = (spec.postCounts[i] / peak) * (SM_H - 4);
    plot.append(svg("rect", {
      class: "sm-pre", x: String(i * bw + 1), y: String(SM_H - preH),
      width: String(Math.max(1, bw - 2)), height: String(preH),
      fill: "none", stroke: "#9ecae1",
    }));
    plot.append(svg("rect", {
      class: "sm-post", x: String(i * bw + 1), y: String(SM_H - postH),
      width: String(Math.max(1, bw - 2)), height: String(postH),
      fill: "#3182bd",
    }));
  }
  host.append(plot);
  if (spec.kind === "bar" && spec.categories) {
    const labels = el("div", { class: "sm-labels" });
    for (const c of spec.categories) labels.append(el("span", { class: "sm-label" }, c));
    host.append(labels);
  }
  if (spec.preMissing || spec.postMissing) {
    host.append(el("div", { class: "sm-missing" },
      `missing: ${spec.postMissing} of ${spec.preMissing}`));
  }
  return host;
}

export class InspectionView {
  readonly root: HTMLElement;
  private body: HTMLElement;
  private errorBox: HTMLElement;

  constructor(private api: ApiClient, private store: Store<ViewState>,
              private onMutated: () => void) {
    this.root = el("div", { class: "inspection-view", hidden: "" });
    const header = el("div", { class: "inspection-header" });
    header.append(el("span", {}, "Inspection"));
    const close = el("button", { class: "inspection-close" }, "×");
    close.addEventListener("click", () => this.store.update({ inspectionExpanded: false }));
    header.append(close);
    this.errorBox = el("div", { class: "error-box", hidden: "" });
    this.body = el("div", { class: "inspection-body" });
    this.root.append(header, this.errorBox, this.body);
  }

  /** Sync drawer visibility and contents with the current selection. */
  async refresh(): Promise<void> {
    const st = this.store.get();
    if (!st.inspectionExpanded || st.selectedCohortId === null) {
      this.root.setAttribute("hidden", "");
      return;
    }
    this.root.removeAttribute("hidden");
    try {
      this.render(await this.api.getInspection(st.selectedCohortId));
      this.showError(null);
    } catch (err) {
      this.showError(err);
    }
  }

  private showError(err: unknown): void {
    clear(this.errorBox);
    if (err == null) {
      this.errorBox.setAttribute("hidden", "");
      return;
    }
    this.errorBox.removeAttribute("hidden");
    const msg = err instanceof ApiError ? `${err.body.kind}: ${err.body.message}` : String(err);
    this.errorBox.append(el("div", { class: "error-message" }, msg));
  }

  render(data: Inspection): void {
    clear(this.body);
    const c = data.cohort;
    this.body.append(
      el("div", { class: "inspection-cohort" },
        `${c.name} — ${c.memberCount} patients`),
      el("div", { class: "inspection-effective" }, c.effectiveQuery));

    if (data.trace) {
      const t = data.trace;
      this.body.append(el("div", { class: "inspection-request" }, t.requestText));
      if (t.normalizations.length) {
        const list = el("ul", { class: "inspection-normalizations" });
        for (const nz of t.normalizations) {
          list.append(el("li", {},
            `"${nz.rawTerm}" → ${nz.normalizedTerm}` +
            (nz.candidateField ? ` (${nz.candidateField})` : "")));
        }
        this.body.append(list);
      }
      this.body.append(el("div", { class: "inspection-inference" }, t.inferenceText));
      if (t.repairs.length) {
        const list = el("ul", { class: "inspection-repairs" });
        for (const r of t.repairs) {
          list.append(el("li", {},
            `${r.error}${r.revisedDsl ? ` → ${r.revisedDsl}` : ""}`));
        }
        this.body.append(list);
      }
    }

    // derived query, hand-editable; resubmitting creates a sibling cohort
    const dslRow = el("div", { class: "inspection-dsl" });
    const dslInput = el("input", { class: "dsl-input", type: "text" });
    dslInput.value = c.queryText;
    const resubmit = el("button", { class: "dsl-resubmit" }, "Run edited query");
    resubmit.addEventListener("click", () => void this.resubmit(dslInput.value, c.parentId));
    dslRow.append(dslInput, resubmit);
    this.body.append(dslRow);

    const sm = el("div", { class: "small-multiples" });
    for (const spec of data.smallMultiples) sm.append(renderSmallMultiple(spec));
    this.body.append(sm);
  }

  private async resubmit(queryText: string, parentId: string | null): Promise<void> {
    try {
      const out = await this.api.createCohortDsl(queryText, parentId);
      this.store.update({ selectedCohortId: out.cohort.id });
      this.showError(null);
      this.onMutated();
      await this.refresh();
    } catch (err) {
      this.showError(err);
    }
  }
}
