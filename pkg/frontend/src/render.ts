/** Pure HTML renderers. Every number displayed is formatted straight from an
 * API response; no probability or explanation logic lives here. */

import type {
  AnyPlan,
  ExplainResponse,
  HistoryResponse,
  NodeSnapshot,
  Plan,
  Snapshot,
} from "./types.js";
import { isCompound } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function formatValue(value: number): string {
  return value.toFixed(4);
}

function bar(kind: "pi" | "lambda" | "bel", value: number): string {
  const width = Math.max(0, Math.min(100, value * 100));
  return (
    `<div class="bar bar-${kind}" title="${kind}=${formatValue(value)}">` +
    `<span class="bar-fill" style="width:${width.toFixed(2)}%"></span>` +
    `<span class="bar-value">${formatValue(value)}</span>` +
    `</div>`
  );
}

function stateRow(
  label: string,
  node: NodeSnapshot,
  index: number,
  pinned: boolean
): string {
  const classes = pinned ? "state-row pinned" : "state-row";
  return (
    `<div class="${classes}">` +
    `<span class="state-label">${escapeHtml(label)}${pinned ? " &#128204;" : ""}</span>` +
    bar("pi", node.pi[index]) +
    bar("lambda", node.lambda[index]) +
    bar("bel", node.bel[index]) +
    `</div>`
  );
}

function snapshotGroup(snapshot: Snapshot, ghost: boolean): string {
  const grounded = snapshot.grounded
    .map((g) => `${escapeHtml(g.node)}=${escapeHtml(g.state)}`)
    .join(", ");
  const pinnedStates = new Map(snapshot.grounded.map((g) => [g.node, g.state]));
  const nodes = Object.entries(snapshot.nodes)
    .map(([nodeId, node]) => {
      const rows = node.states
        .map((label, index) =>
          stateRow(label, node, index, pinnedStates.get(nodeId) === label)
        )
        .join("");
      return (
        `<div class="node-block" data-node="${escapeHtml(nodeId)}">` +
        `<h4>${escapeHtml(nodeId)}</h4>${rows}</div>`
      );
    })
    .join("");
  const classes = ghost ? "timestep ghost" : "timestep";
  const title = ghost
    ? `preview (t=${snapshot.t}, not committed)`
    : `t=${snapshot.t}`;
  return (
    `<section class="${classes}" data-t="${snapshot.t}">` +
    `<h3>${title}</h3>` +
    `<p class="grounded">grounded: ${grounded || "(none)"}</p>` +
    nodes +
    `</section>`
  );
}

/** Grouped pi/lambda/bel bars per timestep; an optional preview renders as a
 * visually distinct ghost group without touching the committed groups. */
export function renderHistory(
  history: HistoryResponse,
  preview: Snapshot | null = null
): string {
  const groups = history.snapshots.map((s) => snapshotGroup(s, false));
  if (preview !== null) {
    groups.push(snapshotGroup(preview, true));
  }
  return `<div class="timeline">${groups.join("")}</div>`;
}

function chip(kind: string, label: string): string {
  return `<span class="chip chip-${kind}">${escapeHtml(label)}</span>`;
}

function termBars(plan: Plan): string {
  const scale = Math.max(...plan.competitors.map((c) => Math.abs(c.term)), 1e-12);
  const rows = plan.competitors
    .map((c) => {
      const width = (Math.abs(c.term) / scale) * 50;
      const side = c.term >= 0 ? "term-up" : "term-down";
      return (
        `<div class="term-row" data-state="${escapeHtml(c.state)}">` +
        `<span class="state-label">${escapeHtml(c.state)}</span>` +
        `<div class="term-axis">` +
        `<span class="term-fill ${side}" style="width:${width.toFixed(2)}%"></span>` +
        `</div>` +
        `<span class="term-value">${c.term.toExponential(3)}</span>` +
        `<span class="term-weight">support ${formatValue(c.weight)}</span>` +
        `</div>`
      );
    })
    .join("");
  return `<div class="term-bars"><h4>per-competitor interaction</h4>${rows}</div>`;
}

function planBreakdown(plan: Plan): string {
  const pieces = [
    chip("case", plan.case),
    chip("expected", `expected: ${plan.expectation.direction}`),
    chip("realized", `realized: ${plan.outcome.realized}`),
    chip(plan.outcome.met ? "met" : "violated", plan.outcome.met ? "met" : "violated"),
  ];
  if (plan.basic_kind) {
    pieces.push(chip("basic", plan.basic_kind));
  }
  if (plan.partition) {
    for (const label of plan.partition.in) {
      pieces.push(chip("in", `In: ${label}`));
    }
    for (const label of plan.partition.out) {
      pieces.push(chip("out", `Out: ${label}`));
    }
  }
  if (plan.elimination_threshold) {
    pieces.push(
      chip(
        "et",
        `threshold ${plan.elimination_threshold.value.toFixed(4)} ` +
          `(${plan.elimination_threshold.regime})`
      )
    );
  }
  return `<div class="chips">${pieces.join("")}</div>` + termBars(plan);
}

function breakdown(plan: AnyPlan): string {
  if (isCompound(plan)) {
    return plan.parts
      .map(
        (part, k) =>
          `<div class="compound-part"><h4>step ${k + 1}: ${escapeHtml(
            part.support
          )}</h4>${planBreakdown(part)}</div>`
      )
      .join("");
  }
  return planBreakdown(plan);
}

/** The explanation text is shown verbatim (paragraph per block), followed by
 * the structured breakdown. */
export function renderExplanation(explain: ExplainResponse): string {
  const paragraphs = explain.paragraphs
    .map((p) => `<p class="explanation-paragraph">${escapeHtml(p)}</p>`)
    .join("");
  return (
    `<div class="explanation">` +
    `<div class="explanation-text">${paragraphs}</div>` +
    breakdown(explain.plan) +
    `</div>`
  );
}

export function renderError(code: string, message: string): string {
  return (
    `<div class="api-error"><strong>${escapeHtml(code)}</strong>: ` +
    `${escapeHtml(message)}</div>`
  );
}
