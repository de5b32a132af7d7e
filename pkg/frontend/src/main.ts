/** DOM wiring: session lifecycle, grounding, previews, explanations, knobs. */

import { ApiClient, ApiError } from "./api.js";
import {
  MutationQueue,
  ViewState,
  clampWindow,
  initialViewState,
  windowIsValid,
} from "./state.js";
import { renderError, renderExplanation, renderHistory } from "./render.js";
import type { HistoryResponse, SupportChoice } from "./types.js";

const api = new ApiClient(
  (window as unknown as { BELEX_API_BASE?: string }).BELEX_API_BASE ?? ""
);
const queue = new MutationQueue();

let view: ViewState = initialViewState();
let history: HistoryResponse | null = null;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

function setStatus(html: string): void {
  el<HTMLDivElement>("status").innerHTML = html;
}

function showError(error: unknown): void {
  if (error instanceof ApiError) {
    setStatus(renderError(error.code, error.message));
  } else {
    setStatus(renderError("client_error", String(error)));
  }
}

function nodeStates(): Map<string, string[]> {
  const out = new Map<string, string[]>();
  if (history) {
    const first = history.snapshots[0];
    for (const [nodeId, node] of Object.entries(first.nodes)) {
      out.set(nodeId, node.states);
    }
  }
  return out;
}

function refreshSelectors(): void {
  const states = nodeStates();
  const nodeSelect = el<HTMLSelectElement>("node-select");
  const previous = nodeSelect.value;
  nodeSelect.innerHTML = [...states.keys()]
    .map((n) => `<option value="${n}">${n}</option>`)
    .join("");
  if (states.has(previous)) {
    nodeSelect.value = previous;
  }
  refreshStateSelector();
  const snapshotCount = history ? history.snapshots.length : 0;
  const fromInput = el<HTMLInputElement>("from-input");
  const toInput = el<HTMLInputElement>("to-input");
  fromInput.max = String(Math.max(snapshotCount - 2, 0));
  toInput.max = String(Math.max(snapshotCount - 1, 0));
  fromInput.value = String(view.fromT);
  toInput.value = String(view.toT);
}

function refreshStateSelector(): void {
  const states = nodeStates();
  const nodeSelect = el<HTMLSelectElement>("node-select");
  const stateSelect = el<HTMLSelectElement>("state-select");
  const options = states.get(nodeSelect.value) ?? [];
  stateSelect.innerHTML = options
    .map((s) => `<option value="${s}">${s}</option>`)
    .join("");
}

function redrawHistory(): void {
  if (history) {
    el<HTMLDivElement>("history").innerHTML = renderHistory(
      history,
      view.pendingPreview
    );
  }
}

async function reloadHistory(): Promise<void> {
  if (!view.sessionId) {
    return;
  }
  history = await api.history(view.sessionId);
  view = clampWindow(view, history.snapshots.length);
  refreshSelectors();
  redrawHistory();
}

async function loadNetwork(): Promise<void> {
  try {
    const doc = JSON.parse(el<HTMLTextAreaElement>("network-input").value);
    const created = await api.createSession(doc);
    view = { ...initialViewState(), sessionId: created.session_id };
    setStatus(`<p>session <code>${created.session_id}</code> created</p>`);
    el<HTMLDivElement>("explanation").innerHTML = "";
    await reloadHistory();
  } catch (error) {
    showError(error);
  }
}

function groundSelected(commit: boolean): void {
  const node = el<HTMLSelectElement>("node-select").value;
  const state = el<HTMLSelectElement>("state-select").value;
  if (!view.sessionId || !node || !state) {
    return;
  }
  const sessionId = view.sessionId;
  queue
    .enqueue(async () => {
      if (commit) {
        await api.ground(sessionId, node, state);
        view = { ...view, pendingPreview: null };
        await reloadHistory();
      } else {
        const snapshot = await api.preview(sessionId, node, state);
        view = { ...view, pendingPreview: snapshot };
        redrawHistory();
      }
    })
    .catch(showError);
}

async function requestExplanation(): Promise<void> {
  if (!view.sessionId || !history) {
    return;
  }
  const sessionId = view.sessionId;
  const node = el<HTMLSelectElement>("node-select").value;
  const state = el<HTMLSelectElement>("state-select").value;
  view = {
    ...view,
    focalNode: node,
    focalState: state,
    fromT: Number(el<HTMLInputElement>("from-input").value),
    toT: Number(el<HTMLInputElement>("to-input").value),
    support: el<HTMLSelectElement>("support-select").value as SupportChoice,
    rho: Number(el<HTMLInputElement>("rho-input").value),
    epsBel: Number(el<HTMLInputElement>("eps-input").value),
  };
  if (!windowIsValid(view, history.snapshots.length)) {
    setStatus(renderError("invalid_window", "window must satisfy 0 <= from < to"));
    return;
  }
  try {
    const explain = await api.explain(sessionId, {
      node,
      state,
      from: view.fromT,
      to: view.toT,
      support: view.support,
      rho: view.rho,
      epsBel: view.epsBel,
    });
    el<HTMLDivElement>("explanation").innerHTML = renderExplanation(explain);
    setStatus("");
  } catch (error) {
    showError(error);
  }
}

export function start(): void {
  el<HTMLButtonElement>("load-button").addEventListener("click", loadNetwork);
  el<HTMLButtonElement>("ground-button").addEventListener("click", () =>
    groundSelected(true)
  );
  el<HTMLButtonElement>("preview-button").addEventListener("click", () =>
    groundSelected(false)
  );
  el<HTMLButtonElement>("clear-preview-button").addEventListener("click", () => {
    view = { ...view, pendingPreview: null };
    redrawHistory();
  });
  el<HTMLButtonElement>("explain-button").addEventListener("click", () =>
    requestExplanation()
  );
  el<HTMLSelectElement>("node-select").addEventListener("change", () =>
    refreshStateSelector()
  );
  for (const id of ["rho-input", "eps-input"]) {
    el<HTMLInputElement>(id).addEventListener("change", () => {
      if (el<HTMLDivElement>("explanation").innerHTML !== "") {
        void requestExplanation();
      }
    });
  }
}

if (typeof document !== "undefined" && document.getElementById("load-button")) {
  start();
}
