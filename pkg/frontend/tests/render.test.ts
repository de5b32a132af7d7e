import { describe, expect, it } from "vitest";

import { formatValue, renderError, renderExplanation, renderHistory } from "../src/render";
import type { ExplainResponse, HistoryResponse, Snapshot } from "../src/types";
import { fixture } from "./helpers";

const historyT1 = fixture<HistoryResponse>("history_t1.json");
const historyT2 = fixture<HistoryResponse>("history_t2.json");
const previewD1 = fixture<Snapshot>("preview_d1.json");
const explainDefault = fixture<ExplainResponse>("explain_b1_default.json");
const explainModerated = fixture<ExplainResponse>("explain_b1_rho_low.json");
const explainCompound = fixture<ExplainResponse>("explain_b1_compound.json");

function committedGroups(html: string): number {
  return (html.match(/<section class="timestep"/g) ?? []).length;
}

describe("history timeline", () => {
  it("renders one group per timestep with the recorded belief values", () => {
    const html = renderHistory(historyT2);
    expect(committedGroups(html)).toBe(3);
    for (const snapshot of historyT2.snapshots) {
      for (const value of snapshot.nodes["B"].bel) {
        expect(html).toContain(formatValue(value));
      }
    }
    // The focal hypothesis trajectory the explainer narrates.
    expect(html).toContain("0.3000");
    expect(html).toContain("0.4522");
    expect(html).toContain("0.4297");
  });

  it("pins grounded states", () => {
    const html = renderHistory(historyT2);
    expect(html).toContain("state-row pinned");
  });

  it("renders a preview as a distinct ghost group", () => {
    const html = renderHistory(historyT1, previewD1);
    expect(committedGroups(html)).toBe(historyT1.snapshots.length);
    expect(html).toContain('class="timestep ghost"');
    expect(html).toContain("not committed");
    expect(html).toContain(formatValue(previewD1.nodes["B"].bel[0]));
  });

  it("shows only API-provided numbers", () => {
    const html = renderHistory(historyT1);
    const shown = [...html.matchAll(/class="bar-value">([\d.]+)</g)].map((m) =>
      m[1]
    );
    const allowed = new Set<string>();
    for (const snapshot of historyT1.snapshots) {
      for (const node of Object.values(snapshot.nodes)) {
        for (const series of [node.pi, node.lambda, node.bel]) {
          for (const value of series) {
            allowed.add(formatValue(value));
          }
        }
      }
    }
    expect(shown.length).toBeGreaterThan(0);
    for (const value of shown) {
      expect(allowed.has(value)).toBe(true);
    }
  });
});

describe("explanation panel", () => {
  it("shows the API text verbatim", () => {
    const html = renderExplanation(explainDefault);
    for (const paragraph of explainDefault.paragraphs) {
      expect(html).toContain(paragraph);
    }
    expect(html).toContain("10%");
    expect(html).toContain("overwhelming evidence against b_3");
  });

  it("shows the case tag and the In/Out chips", () => {
    const html = renderExplanation(explainDefault);
    expect(html).toContain("reduce_to_binary");
    expect(html).toContain("Out: b_3");
    expect(html).toContain("In: b_2");
    expect(html).toContain("violated");
  });

  it("renders signed per-competitor interaction bars", () => {
    const html = renderExplanation(explainDefault);
    expect(html).toContain("term-bars");
    expect(html).toContain('data-state="b_2"');
    expect(html).toContain('data-state="b_3"');
    expect(html).toContain("term-down");
    expect(html).toContain("term-up");
  });

  it("switches narration when the rho knob reclassifies the case", () => {
    expect(explainModerated.plan).toHaveProperty("case", "eliminate_and_reinstate");
    const html = renderExplanation(explainModerated);
    expect(html).toContain("eliminate_and_reinstate");
    expect(html).toContain("rules out b_3");
    expect(html).not.toContain("reduce_to_binary");
  });

  it("renders both steps of a compound plan", () => {
    const html = renderExplanation(explainCompound);
    expect(html).toContain("step 1: causal");
    expect(html).toContain("step 2: evidential");
    for (const paragraph of explainCompound.paragraphs) {
      expect(html).toContain(paragraph);
    }
  });

  it("escapes markup in error messages", () => {
    const html = renderError("boom", "<script>alert(1)</script>");
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });
});

describe("UI parity with the engine outputs", () => {
  it("displays the recorded trajectory and explanation for the bundled network", () => {
    // Grounding c_1 then d_1: belief bars for b_1 must show the recorded
    // 0.30 -> 0.4522 -> 0.4297 trajectory, and the panel must carry the
    // engine's text byte-for-byte.
    const timeline = renderHistory(historyT2);
    const belB1 = historyT2.snapshots.map((s) => s.nodes["B"].bel[0]);
    expect(belB1.map(formatValue)).toEqual(["0.3000", "0.4522", "0.4297"]);
    for (const value of belB1) {
      expect(timeline).toContain(formatValue(value));
    }
    const panel = renderExplanation(explainDefault);
    expect(panel).toContain(explainDefault.text);

    // A preview never changes the number of committed timestep groups.
    const withPreview = renderHistory(historyT1, previewD1);
    expect(committedGroups(withPreview)).toBe(historyT1.snapshots.length);
  });
});
