/** End-to-end walkthrough against a real cohortlab service in mock LLM
 * mode: natural-language cohort creation, the inspection drawer, patient
 * drill-down, and the draggable baseline, all inside one page.
 */

import { ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App, createApp } from "../src/app.js";
import { scaleLinear } from "../src/dom.js";

const NL_TEXT = "Elderly male patients who suffered a stroke due to the LAA.";

const sleep = (ms: number) => new Promise((res) => setTimeout(res, ms));

async function until<T>(fn: () => T | null | undefined | false,
                        what: string, timeout = 15_000): Promise<T> {
  const t0 = Date.now();
  for (;;) {
    const v = fn();
    if (v) return v as T;
    if (Date.now() - t0 > timeout) throw new Error(`timed out waiting for ${what}`);
    await sleep(50);
  }
}

let tmp: string;
let server: ChildProcess | null = null;
let base: string;
let app: App;
let probe: ApiClient;

beforeAll(async () => {
  tmp = mkdtempSync(join(tmpdir(), "explorer-smoke-"));
  const dataDir = join(tmp, "data");
  const synth = spawnSync("python3",
    ["-m", "cohortlab.cli", "synth", "--patients", "150", "--seed", "5", "--out", dataDir],
    { encoding: "utf-8" });
  if (synth.status !== 0) throw new Error(`synth failed: ${synth.stderr}`);

  const port = 8700 + Math.floor(Math.random() * 1000);
  base = `http://127.0.0.1:${port}`;
  const cfgPath = join(tmp, "config.json");
  writeFileSync(cfgPath, JSON.stringify({
    dataDir,
    listenAddress: `127.0.0.1:${port}`,
    llm: { mode: "mock" },
    sessionDir: join(tmp, "sessions"),
  }));

  let bootLog = "";
  server = spawn("python3", ["-m", "cohortlab.cli", "serve", "--config", cfgPath],
    { stdio: ["ignore", "pipe", "pipe"] });
  server.stdout!.on("data", (d) => { bootLog += d; });
  server.stderr!.on("data", (d) => { bootLog += d; });

  let up = false;
  for (let i = 0; i < 150 && !up; i++) {
    if (server.exitCode !== null) throw new Error(`server exited early:\n${bootLog}`);
    try {
      up = (await fetch(`${base}/api/codebook`)).ok;
    } catch {
      await sleep(200);
    }
  }
  if (!up) throw new Error(`server never became ready:\n${bootLog}`);

  probe = new ApiClient(base);
  const container = document.createElement("div");
  document.body.append(container);
  (window as unknown as Record<string, unknown>).__smokeSentinel = "alive";
  app = await createApp(container, base);
});

afterAll(() => {
  server?.kill();
  if (tmp) rmSync(tmp, { recursive: true, force: true });
});

describe("explorer walkthrough", () => {
  it("submitting the natural-language request renders a cohort node in the tree", async () => {
    const input = app.tree.root.querySelector(".nl-input") as HTMLTextAreaElement;
    input.value = NL_TEXT;
    (app.tree.root.querySelector(".nl-submit") as HTMLButtonElement).click();

    const node = await until(
      () => app.tree.root.querySelector(".tree-node"), "a cohort node in the tree");
    expect(node.querySelector(".tree-node-name")!.textContent).toMatch(/\(\d+\)/);
    // the translated filter is exposed on the node, not recomputed client-side
    expect(node.querySelector("title")!.textContent).toContain("age >= 65");
    expect(app.store.get().selectedCohortId).not.toBeNull();
  });

  it("opening the inspection drawer shows one small multiple per involved field", async () => {
    expect(app.inspection.root.hasAttribute("hidden")).toBe(true);
    (document.querySelector(".inspect-toggle") as HTMLButtonElement).click();
    await until(() =>
      !app.inspection.root.hasAttribute("hidden")
      && app.inspection.root.querySelectorAll(".small-multiple").length === 3
      && null !== app.inspection.root.querySelector(".dsl-input"),
      "three small multiples in the drawer");
    expect(app.inspection.root.textContent).toContain(NL_TEXT);
  });

  it("opening a patient shows the wrap view with at least one segment", async () => {
    const rows = await until(() => {
      const els = [...app.matrix.root.querySelectorAll(".matrix-row")];
      return els.length ? els : null;
    }, "matrix rows");
    expect(app.matrix.root.querySelectorAll(".matrix-cell").length).toBeGreaterThan(0);

    // pick a member whose series crosses between the two baselines we
    // are about to use, so the later drag must recolor something
    let targetUid: string | null = null;
    for (const row of rows) {
      const uid = row.getAttribute("data-uid")!;
      const bars = await probe.getBars(uid, { bpType: "sbp", baselineLow: 120 });
      if (bars.bars.some((b) => b.value > 121 && b.value < 149)) {
        targetUid = uid;
        break;
      }
    }
    expect(targetUid).not.toBeNull();

    (app.matrix.root.querySelector(`[data-uid="${targetUid}"]`) as SVGGElement)
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await until(() =>
      !app.patient.root.hasAttribute("hidden")
      && app.patient.root.querySelectorAll(".wrap-segment").length >= 1
      && app.patient.root.querySelectorAll(".bp-bar").length >= 1,
      "patient panes with wrap segments and bars");
    expect(app.patient.root.querySelector(".patient-uid")!.textContent).toBe(targetUid);
    expect(app.patient.root.querySelector(".wrap-baseline")).not.toBeNull();
  });

  it("dragging the baseline from 120 to 150 recolors the bars", async () => {
    const uid = app.store.get().selectedUid!;
    const fillsBefore = [...app.patient.root.querySelectorAll(".bp-bar")]
      .map((r) => r.getAttribute("fill"));

    // recompute the view's value->pixel mapping from the same payload it drew
    const payload = await probe.getBars(uid, { bpType: "sbp", baselineLow: 120 });
    const values = payload.bars.map((b) => b.value);
    const vLo = Math.min(60, ...values, 120) - 10;
    const vHi = Math.max(180, ...values, 120) + 10;
    const y = scaleLinear(vLo, vHi, 196, 4);

    const plot = app.patient.root.querySelector(".bars-svg") as SVGSVGElement;
    plot.getBoundingClientRect = () =>
      ({ left: 0, top: 0, right: 420, bottom: 220, width: 420, height: 220, x: 0, y: 0,
         toJSON: () => ({}) } as DOMRect);
    const handle = app.patient.root.querySelector(".baseline-handle-low") as SVGRectElement;
    handle.dispatchEvent(new MouseEvent("mousedown", { bubbles: true, cancelable: true }));
    window.dispatchEvent(new MouseEvent("mousemove", { clientY: y(150) }));
    window.dispatchEvent(new MouseEvent("mouseup"));

    // label moves with the pointer before the debounced commit lands
    expect(app.patient.root.querySelector(".baseline-label-low")!.textContent).toBe("150");
    await until(() => app.store.get().baselineLow === 150, "debounced baseline commit");
    await until(() => {
      const fills = [...app.patient.root.querySelectorAll(".bp-bar")]
        .map((r) => r.getAttribute("fill"));
      return fills.length === fillsBefore.length
        && fills.some((f, i) => f !== fillsBefore[i]);
    }, "bars recolored against the new baseline");

    // the whole walkthrough ran inside one page
    expect((window as unknown as Record<string, unknown>).__smokeSentinel).toBe("alive");
  });
});
