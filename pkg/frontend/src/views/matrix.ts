/** Folded abstraction matrix for the selected cohort.
 *
 * One row per patient, one column per cycle window. Cell fill comes from
 * the server's category name resolved through the legend tokens; cell
 * opacity is the server's density alpha. Each row carries an outcome
 * circle on the left and a sort-value bar on the right. Below the grid,
 * an in-cycle measurement-time area chart supports a brush that
 * restricts which measurements the server aggregates.
 */

import {
  ApiClient,
  ApiError,
  Codebook,
  CycleDistribution,
  MatrixModel,
} from "../api.js";
import { legendColor, outcomeColor } from "../colors.js";
import { clear, el, scaleLinear, svg } from "../dom.js";
import { Store, ViewState } from "../state.js";

const CELL_W = 26;
const CELL_H = 14;
const OUTCOME_W = 18;
const SORTBAR_W = 70;
const LABEL_W = 72;
const DIST_H = 70;

export class MatrixView {
  readonly root: HTMLElement;
  private controls: HTMLElement;
  private gridHost: HTMLElement;
  private legendHost: HTMLElement;
  private distHost: HTMLElement;
  private errorBox: HTMLElement;
  private model: MatrixModel | null = null;

  constructor(private api: ApiClient, private store: Store<ViewState>) {
    this.root = el("div", { class: "matrix-view" });
    this.controls = el("div", { class: "matrix-controls" });
    this.errorBox = el("div", { class: "error-box", hidden: "" });
    this.legendHost = el("div", { class: "matrix-legend" });
    this.gridHost = el("div", { class: "matrix-grid" });
    this.distHost = el("div", { class: "matrix-cycle-dist" });
    this.root.append(this.controls, this.errorBox, this.legendHost, this.gridHost, this.distHost);
  }

  buildControls(codebook: Codebook): void {
    clear(this.controls);
    const st = this.store.get();

    const sortSel = el("select", { class: "sort-key" });
    for (const f of codebook.fields) {
      if (f.table !== "clinical") continue;
      const opt = el("option", { value: `clinical:${f.name}` }, `sort: ${f.name}`);
      sortSel.append(opt);
    }
    for (const bp of ["sbp", "dbp", "map"]) {
      sortSel.append(el("option", { value: `window_mean:${bp}:0` }, `sort: day-0 mean ${bp}`));
    }
    if (st.sortKey) sortSel.value = st.sortKey;
    sortSel.addEventListener("change", () => this.store.update({ sortKey: sortSel.value }));

    const dirBtn = el("button", { class: "sort-direction" }, st.direction);
    dirBtn.addEventListener("click", () => {
      const next = this.store.get().direction === "asc" ? "desc" : "asc";
      dirBtn.textContent = next;
      this.store.update({ direction: next });
    });

    const bpSel = el("select", { class: "bp-type" });
    for (const bp of ["sbp", "dbp", "map"]) bpSel.append(el("option", { value: bp }, bp));
    bpSel.value = st.bpType;
    bpSel.addEventListener("change", () => this.store.update({ bpType: bpSel.value }));

    const cycleInput = el("input", {
      class: "cycle-hours", type: "number", min: "1", step: "1", value: String(st.cycleHours),
    });
    cycleInput.addEventListener("change", () => {
      const v = Number(cycleInput.value);
      if (v > 0) this.store.update({ cycleHours: v, cycleLo: null, cycleHi: null });
    });

    // legend cutoffs as a plain numeric list; empty restores the default
    const legendInput = el("input", {
      class: "legend-bounds", type: "text", placeholder: "legend e.g. 120,130,140,180",
    });
    if (st.legendBounds) legendInput.value = st.legendBounds;
    legendInput.addEventListener("change", () => {
      this.store.update({ legendBounds: legendInput.value.trim() || null });
    });

    this.controls.append(sortSel, dirBtn, bpSel, cycleInput, legendInput);
  }

  async refresh(): Promise<void> {
    const st = this.store.get();
    if (st.selectedCohortId === null) {
      clear(this.gridHost);
      clear(this.legendHost);
      clear(this.distHost);
      return;
    }
    try {
      const model = await this.api.getMatrix(st.selectedCohortId, {
        bpType: st.bpType,
        cycleHours: st.cycleHours,
        sortKey: st.sortKey ?? undefined,
        outcomeKey: st.outcomeKey ?? undefined,
        direction: st.direction,
        cycleLo: st.cycleLo ?? undefined,
        cycleHi: st.cycleHi ?? undefined,
        legendBounds: st.legendBounds ?? undefined,
      });
      const dist = await this.api.getCycleDistribution(st.selectedCohortId, st.cycleHours);
      this.showError(null);
      this.render(model);
      this.renderDistribution(dist);
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

  render(model: MatrixModel): void {
    this.model = model;
    clear(this.legendHost);
    const tokenByName = new Map(model.config.legend.map((e) => [e.name, e.colorToken]));
    for (const entry of model.config.legend) {
      const chip = el("span", { class: "legend-chip" });
      const box = el("span", { class: "legend-swatch" });
      box.style.backgroundColor = legendColor(entry.colorToken);
      chip.append(box, el("span", {}, entry.name +
        (entry.upperBound === null ? "" : ` <${entry.upperBound}`)));
      this.legendHost.append(chip);
    }

    clear(this.gridHost);
    const width = LABEL_W + OUTCOME_W + model.nWindows * CELL_W + SORTBAR_W + 8;
    const height = model.rows.length * CELL_H + 4;
    const plot = svg("svg", {
      width: String(width), height: String(height),
      viewBox: `0 0 ${width} ${height}`, class: "matrix-svg",
    });

    const sortValues = model.rows
      .map((r) => r.sortValue)
      .filter((v): v is number => v !== null);
    const lo = sortValues.length ? Math.min(...sortValues) : 0;
    const hi = sortValues.length ? Math.max(...sortValues) : 1;
    const sortScale = scaleLinear(lo, hi === lo ? lo + 1 : hi, 2, SORTBAR_W - 2);

    model.rows.forEach((row, i) => {
      const y = 2 + i * CELL_H;
      const g = svg("g", { class: "matrix-row", "data-uid": row.uid });
      const label = svg("text", {
        x: String(LABEL_W - 4), y: String(y + CELL_H - 4),
        "text-anchor": "end", class: "matrix-uid",
      });
      label.textContent = row.uid;
      g.append(label);
      g.append(svg("circle", {
        class: "outcome-circle",
        cx: String(LABEL_W + OUTCOME_W / 2), cy: String(y + CELL_H / 2),
        r: "5", fill: outcomeColor(row.outcomeBand),
      }));
      if (row.sortValue !== null) {
        g.append(svg("rect", {
          class: "sort-bar",
          x: String(LABEL_W + OUTCOME_W + this.model!.nWindows * CELL_W + 4),
          y: String(y + 2),
          width: String(Math.max(1, sortScale(row.sortValue))),
          height: String(CELL_H - 4),
          fill: "#9e9e9e",
        }));
      }
      g.addEventListener("click", () => this.store.update({ selectedUid: row.uid }));
      plot.append(g);
    });

    for (const cell of model.cells) {
      const token = tokenByName.get(cell.categoryName) ?? "band-1";
      const rect = svg("rect", {
        class: "matrix-cell",
        "data-category": cell.categoryName,
        x: String(LABEL_W + OUTCOME_W + cell.window * CELL_W),
        y: String(2 + cell.row * CELL_H),
        width: String(CELL_W - 1),
        height: String(CELL_H - 1),
        fill: legendColor(token),
        "fill-opacity": String(cell.alpha),
      });
      const title = svg("title");
      title.textContent =
        `${model.rows[cell.row].uid} window ${cell.window}: ` +
        `mean ${cell.meanValue.toFixed(1)} over ${cell.count} readings`;
      rect.append(title);
      rect.addEventListener("click", () =>
        this.store.update({ selectedUid: model.rows[cell.row].uid }));
      plot.append(rect);
    }
    this.gridHost.append(plot);
  }

  renderDistribution(dist: CycleDistribution): void {
    clear(this.distHost);
    const st = this.store.get();
    const width = LABEL_W + OUTCOME_W + (this.model?.nWindows ?? 10) * CELL_W;
    const plotW = Math.max(width, 200);
    const peak = Math.max(1, ...dist.bins.map((b) => b.count));
    const x = scaleLinear(0, dist.cycleHours, 0, plotW);
    const y = scaleLinear(0, peak, DIST_H - 2, 2);

    const plot = svg("svg", {
      width: String(plotW), height: String(DIST_H),
      viewBox: `0 0 ${plotW} ${DIST_H}`, class: "cycle-dist-svg",
    });
    const binW = dist.cycleHours / dist.bins.length;
    let d = `M 0 ${DIST_H - 2}`;
    for (const b of dist.bins) {
      d += ` L ${x(b.binStart)} ${y(b.count)} L ${x(b.binStart + binW)} ${y(b.count)}`;
    }
    d += ` L ${plotW} ${DIST_H - 2} Z`;
    plot.append(svg("path", { d, class: "cycle-area", fill: "#c6dbef", stroke: "#6baed6" }));

    if (st.cycleLo !== null && st.cycleHi !== null) {
      plot.append(svg("rect", {
        class: "cycle-brush",
        x: String(x(st.cycleLo)), y: "0",
        width: String(Math.max(1, x(st.cycleHi) - x(st.cycleLo))),
        height: String(DIST_H),
        fill: "#fdae6b", "fill-opacity": "0.3", stroke: "#e6550d",
      }));
    }

    // drag to brush a sub-range of the cycle; double-click clears it
    let dragStartX: number | null = null;
    const toHours = (clientX: number) => {
      const rect = plot.getBoundingClientRect();
      const frac = rect.width > 0 ? (clientX - rect.left) / rect.width : 0;
      return Math.min(Math.max(frac, 0), 1) * dist.cycleHours;
    };
    plot.addEventListener("mousedown", (ev) => { dragStartX = ev.clientX; });
    plot.addEventListener("mouseup", (ev) => {
      if (dragStartX === null) return;
      const a = toHours(dragStartX);
      const b = toHours(ev.clientX);
      dragStartX = null;
      const lo = Math.min(a, b);
      const hi = Math.max(a, b);
      if (hi - lo > 1e-6) this.store.update({ cycleLo: lo, cycleHi: hi });
    });
    plot.addEventListener("dblclick", () => this.store.update({ cycleLo: null, cycleHi: null }));
    this.distHost.append(plot);
  }
}
