/** Wire types mirroring the HTTP API's JSON bodies. */

export interface GroundedEntry {
  node: string;
  state: string;
}

export interface NodeSnapshot {
  states: string[];
  pi: number[];
  lambda: number[];
  bel: number[];
  alpha: number;
}

export interface Snapshot {
  t: number;
  grounded: GroundedEntry[];
  nodes: Record<string, NodeSnapshot>;
}

export interface HistoryResponse {
  network_id: string;
  snapshots: Snapshot[];
}

export interface CreateSessionResponse {
  session_id: string;
  network_id: string;
  snapshot: Snapshot;
}

export interface PercentInfo {
  old: number;
  new: number;
  percent: number | null;
  infinite: boolean;
}

export interface CompetitorInfo {
  state: string;
  index: number;
  weight: number;
  term: number;
  condition: string;
  percent: PercentInfo;
}

export interface PlanPartition {
  in: string[];
  out: string[];
  residual: string[];
}

export interface Plan {
  node: string;
  focal: { state: string; index: number };
  window: { from: number; to: number };
  support: string;
  case: string;
  basic_kind: string | null;
  expectation: { direction: string; basis: string; focal_delta: number };
  outcome: {
    realized: string;
    met: boolean;
    delta_bel: number;
    bel_old: number;
    bel_new: number;
  };
  elimination_threshold: { value: number; regime: string } | null;
  partition: PlanPartition | null;
  competitors: CompetitorInfo[];
  focal_percent: PercentInfo;
  residual_effect: number;
  shift_value: number;
  settings: { rho: number; eps_bel: number };
}

export interface CompoundPlan {
  compound: true;
  node: string;
  focal: { state: string; index: number };
  window: { from: number; to: number };
  parts: Plan[];
  settings: { rho: number; eps_bel: number };
}

export type AnyPlan = Plan | CompoundPlan;

export function isCompound(plan: AnyPlan): plan is CompoundPlan {
  return (plan as CompoundPlan).compound === true;
}

export interface ExplainResponse {
  plan: AnyPlan;
  text: string;
  paragraphs: string[];
  slots: Record<string, string>;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: unknown;
}

export type SupportChoice = "causal" | "evidential" | "auto";
