/** View state and its invariants, plus serialization of mutating requests. */

import type { HistoryResponse, Snapshot, SupportChoice } from "./types.js";

export interface ViewState {
  sessionId: string | null;
  focalNode: string | null;
  focalState: string | null;
  fromT: number;
  toT: number;
  support: SupportChoice;
  rho: number;
  epsBel: number;
  pendingPreview: Snapshot | null;
}

export function initialViewState(): ViewState {
  return {
    sessionId: null,
    focalNode: null,
    focalState: null,
    fromT: 0,
    toT: 1,
    support: "auto",
    rho: 0.1,
    epsBel: 0.005,
    pendingPreview: null,
  };
}

export function windowIsValid(state: ViewState, snapshotCount: number): boolean {
  return (
    Number.isInteger(state.fromT) &&
    Number.isInteger(state.toT) &&
    state.fromT >= 0 &&
    state.fromT < state.toT &&
    state.toT < snapshotCount
  );
}

export function focalIsValid(state: ViewState, history: HistoryResponse): boolean {
  if (state.focalNode === null || state.focalState === null) {
    return false;
  }
  const first = history.snapshots[0];
  if (!first || !(state.focalNode in first.nodes)) {
    return false;
  }
  return first.nodes[state.focalNode].states.includes(state.focalState);
}

/** Clamp the view window after the history grew or shrank. */
export function clampWindow(state: ViewState, snapshotCount: number): ViewState {
  if (snapshotCount < 2) {
    return { ...state, fromT: 0, toT: 1 };
  }
  const toT = Math.min(Math.max(state.toT, 1), snapshotCount - 1);
  const fromT = Math.min(Math.max(state.fromT, 0), toT - 1);
  return { ...state, fromT, toT };
}

/** Runs mutating requests strictly one at a time, in submission order. */
export class MutationQueue {
  private tail: Promise<unknown> = Promise.resolve();
  private pending = 0;

  get inFlight(): number {
    return this.pending;
  }

  enqueue<T>(operation: () => Promise<T>): Promise<T> {
    this.pending += 1;
    const run = this.tail.then(operation);
    this.tail = run.catch(() => undefined).then(() => {
      this.pending -= 1;
    });
    return run;
  }
}
