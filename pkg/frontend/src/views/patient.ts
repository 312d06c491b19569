/** Patient detail: a linear bar chart of one BP series against one or
 * two baselines, juxtaposed with the slice-and-wrap polar rendering.
 *
 * The baseline in the bar chart is draggable; position updates render
 * immediately but the re-fetch that recolors the bars is debounced by
 * 150 ms so dragging stays fluid. Right-clicking the chart toggles
 * dual-range mode (a second baseline bounding an acceptable corridor).
 * The wrap view draws each cycle segment as an independent ring built
 * from the server's sample polyline, knots as dots, the baseline as a
 * dashed circle, and event markers at the rim with tooltips.
 */

import { ApiClient, ApiError, BarModel, WrapGeometry } from "../api.js";
import { barColor } from "../colors.js";
import { clear, el, scaleLinear, svg } from "../dom.js";
import { debounce, Store, ViewState } from "../state.js";

const BARS_W = 420;
const BARS_H = 220;
const PAD = 24;
const WRAP_SIZE = 260;

export class BarsView {
  readonly root: HTMLElement;
  private valueToY: ((v: number) => number) | null = null;
  private yToValue: ((y: number) => number) | null = null;
  private commitLow: (v: number) => void;

  constructor(private store: Store<ViewState>) {
    this.root = el("div", { class: "bars-view" });
    this.commitLow = debounce((v: number) => store.update({ baselineLow: v }), 150);
    this.root.addEventListener("contextmenu", (ev) => {
      ev.preventDefault();
      const st = store.get();
      store.update(st.baselineHigh === null
        ? { baselineHigh: st.baselineLow + 20 }
        : { baselineHigh: null });
    });
  }

  render(model: BarModel): void {
    clear(this.root);
    const values = model.bars.map((b) => b.value);
    const baselines = [model.baselineLow, ...(model.baselineHigh !== null ? [model.baselineHigh] : [])];
    const vLo = Math.min(60, ...values, ...baselines) - 10;
    const vHi = Math.max(180, ...values, ...baselines) + 10;
    const tMax = Math.max(1, ...model.bars.map((b) => b.t),
      ...model.eventMarks.map((m) => m.tEnd ?? m.tStart));
    const x = scaleLinear(0, tMax, PAD, BARS_W - 4);
    const y = scaleLinear(vLo, vHi, BARS_H - PAD, 4);
    this.valueToY = y;
    this.yToValue = scaleLinear(BARS_H - PAD, 4, vLo, vHi);

    const plot = svg("svg", {
      width: String(BARS_W), height: String(BARS_H),
      viewBox: `0 0 ${BARS_W} ${BARS_H}`, class: "bars-svg",
    });

    for (const bar of model.bars) {
      const rect = svg("rect", {
        class: "bp-bar",
        "data-flag": bar.flag,
        x: String(x(bar.t) - 1.5),
        y: String(y(bar.value)),
        width: "3",
        height: String(Math.max(1, BARS_H - PAD - y(bar.value))),
        fill: barColor(bar.flag),
      });
      const title = svg("title");
      title.textContent = `t=${bar.t.toFixed(1)}h ${model.bpType}=${bar.value.toFixed(0)}`;
      rect.append(title);
      plot.append(rect);
    }

    for (const mark of model.eventMarks) {
      const x0 = x(mark.tStart);
      const x1 = x(mark.tEnd ?? mark.tStart);
      const band = svg("rect", {
        class: "event-mark",
        x: String(x0 - 2), y: String(BARS_H - PAD + 2),
        width: String(Math.max(4, x1 - x0)), height: "8",
        fill: "#756bb1",
      });
      const title = svg("title");
      title.textContent = mark.tEnd === null
        ? `${mark.kind} at ${mark.tStart.toFixed(1)}h`
        : `${mark.kind} ${mark.tStart.toFixed(1)}–${mark.tEnd.toFixed(1)}h`;
      band.append(title);
      plot.append(band);
    }

    this.drawBaseline(plot, "low", model.baselineLow);
    if (model.baselineHigh !== null) this.drawBaseline(plot, "high", model.baselineHigh);
    this.root.append(plot);
  }

  /** A dashed draggable baseline with a wide invisible grab handle. */
  private drawBaseline(plot: SVGSVGElement, which: "low" | "high", value: number): void {
    const yPos = this.valueToY!(value);
    const line = svg("line", {
      class: `baseline baseline-${which}`,
      x1: String(PAD), x2: String(BARS_W - 4),
      y1: String(yPos), y2: String(yPos),
      stroke: "#333", "stroke-dasharray": "6 3",
    });
    const handle = svg("rect", {
      class: `baseline-handle baseline-handle-${which}`,
      x: String(PAD), y: String(yPos - 6),
      width: String(BARS_W - 4 - PAD), height: "12",
      fill: "transparent", cursor: "ns-resize",
    });
    const label = svg("text", {
      class: `baseline-label baseline-label-${which}`,
      x: String(PAD + 2), y: String(yPos - 4),
    });
    label.textContent = value.toFixed(0);

    const move = (ev: MouseEvent) => {
      const rect = plot.getBoundingClientRect();
      const localY = rect.height > 0
        ? ((ev.clientY - rect.top) / rect.height) * BARS_H
        : BARS_H - PAD;
      const v = this.yToValue!(localY);
      const snapped = Math.round(v);
      line.setAttribute("y1", String(this.valueToY!(snapped)));
      line.setAttribute("y2", String(this.valueToY!(snapped)));
      handle.setAttribute("y", String(this.valueToY!(snapped) - 6));
      label.setAttribute("y", String(this.valueToY!(snapped) - 4));
      label.textContent = snapped.toFixed(0);
      if (which === "low") {
        this.commitLow(snapped);
      } else {
        this.store.update({ baselineHigh: snapped });
      }
    };
    const up = () => {
      window.removeEventListener("mousemove", move);
      window.removeEventListener("mouseup", up);
    };
    handle.addEventListener("mousedown", (ev) => {
      ev.preventDefault();
      window.addEventListener("mousemove", move);
      window.addEventListener("mouseup", up);
    });
    plot.append(line, handle, label);
  }
}

export class WrapView {
  readonly root: HTMLElement;

  constructor() {
    this.root = el("div", { class: "wrap-view" });
  }

  render(geom: WrapGeometry, events: BarModel["eventMarks"] = []): void {
    clear(this.root);
    // server coordinates are y-up with the center at the origin
    const plot = svg("svg", {
      width: String(WRAP_SIZE), height: String(WRAP_SIZE),
      viewBox: "-1.15 -1.15 2.3 2.3", class: "wrap-svg",
    });
    const flip = svg("g", { transform: "scale(1,-1)" });

    for (const r of [geom.config.rMin, geom.config.rMax]) {
      flip.append(svg("circle", {
        class: "wrap-axis", cx: "0", cy: "0", r: String(r),
        fill: "none", stroke: "#eee",
      }));
    }
    flip.append(svg("circle", {
      class: "wrap-baseline", cx: "0", cy: "0", r: String(geom.baselineRadius),
      fill: "none", stroke: "#333", "stroke-dasharray": "0.05 0.03", "stroke-width": "0.008",
    }));

    for (const seg of geom.segments) {
      const g = svg("g", { class: "wrap-segment", "data-segment": String(seg.segmentIdx) });
      if (seg.samples.length > 1) {
        const points = seg.samples.map(([px, py]) => `${px},${py}`).join(" ");
        g.append(svg("polyline", {
          class: "wrap-ring", points,
          fill: "none", stroke: "#3182bd", "stroke-width": "0.012",
          "stroke-opacity": String(seg.strokeAlpha),
        }));
      }
      for (const knot of seg.knots) {
        const dot = svg("circle", {
          class: "wrap-knot",
          cx: String(knot.x), cy: String(knot.y), r: "0.018",
          fill: "#3182bd", "fill-opacity": String(seg.strokeAlpha),
        });
        const title = svg("title");
        title.textContent =
          `t+${knot.tInCycle.toFixed(1)}h ${geom.config.bpType}=${knot.value.toFixed(0)}`;
        dot.append(title);
        g.append(dot);
      }
      flip.append(g);
    }

    const c = geom.config.cycleHours;
    for (const mark of events) {
      const tic = mark.tStart - Math.floor(mark.tStart / c) * c;
      const theta = (2 * Math.PI * tic) / c;
      const marker = svg("circle", {
        class: "wrap-event",
        cx: String(1.08 * Math.sin(theta)), cy: String(1.08 * Math.cos(theta)),
        r: "0.03", fill: "#756bb1",
      });
      const title = svg("title");
      title.textContent = `${mark.kind} at ${mark.tStart.toFixed(1)}h`;
      marker.append(title);
      flip.append(marker);
    }

    plot.append(flip);
    this.root.append(plot);
  }
}

export class PatientView {
  readonly root: HTMLElement;
  private header: HTMLElement;
  private errorBox: HTMLElement;
  readonly bars: BarsView;
  readonly wrap: WrapView;

  constructor(private api: ApiClient, private store: Store<ViewState>) {
    this.root = el("div", { class: "patient-view", hidden: "" });
    this.header = el("div", { class: "patient-header" });
    this.errorBox = el("div", { class: "error-box", hidden: "" });
    this.bars = new BarsView(store);
    this.wrap = new WrapView();
    const panes = el("div", { class: "patient-panes" });
    panes.append(this.bars.root, this.wrap.root);
    this.root.append(this.header, this.errorBox, panes);
  }

  async refresh(): Promise<void> {
    const st = this.store.get();
    if (st.selectedUid === null) {
      this.root.setAttribute("hidden", "");
      return;
    }
    this.root.removeAttribute("hidden");
    clear(this.header);
    this.header.append(el("span", { class: "patient-uid" }, st.selectedUid));
    const close = el("button", { class: "patient-close" }, "×");
    close.addEventListener("click", () => this.store.update({ selectedUid: null }));
    this.header.append(close);
    try {
      const [bars, wrap] = await Promise.all([
        this.api.getBars(st.selectedUid, {
          bpType: st.bpType,
          baselineLow: st.baselineLow,
          baselineHigh: st.baselineHigh ?? undefined,
        }),
        this.api.getWrap(st.selectedUid, {
          bpType: st.bpType,
          cycleHours: st.cycleHours,
          baseline: st.baselineLow,
        }),
      ]);
      this.showError(null);
      this.bars.render(bars);
      this.wrap.render(wrap, bars.eventMarks);
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
}
