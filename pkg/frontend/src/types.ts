// Payload shapes served by the /v1 API. The console renders these verbatim;
// it never recomputes model quantities from raw parameters.

export interface PhasorBlock {
  core: number;
  modulation: number;
  phase_rate: number;
}

export interface PerformanceBlock {
  id: string;
  kind: "units" | "money";
  value_per_unit: number;
  cost_per_unit: number;
}

export interface AlternateOfferBlock {
  alternate_value: number;
  expected_damages: number;
  damages_delay: number;
  litigation_risk: number;
  alternate_failure_risk: number;
  termination_cost: number;
}

export interface ScenarioDocument {
  schema_version: number;
  performances: PerformanceBlock[];
  installments: Array<{ delay: number }>;
  discount: { rate: number };
  contract: { unit_value: number; unit_cost: number };
  constraints: {
    buyer_demand: PhasorBlock;
    supplier_solvency: PhasorBlock;
    supplier_capacity: PhasorBlock;
  };
  unit_caps: Array<number | null>;
  dynamics: { concession_delay: number; concession_rate: number };
  simulation?: { t_max: number; steps: number; settlement_rule: string | null } | null;
  alternate_offer?: AlternateOfferBlock | null;
}

export interface SolveReport {
  time: number;
  regime: string;
  status: string;
  allocation: { z: number[][]; objective: number };
  binding_constraints: string[];
  demand_gap: number;
  near_insolvent: boolean;
}

export interface TracePointPayload {
  t: number;
  offers: number[][];
  demand: number;
  solvency: number;
  capacity: number;
  buyer_value: number;
  gompertz: number;
}

export interface SettlementPayload {
  t_star: number;
  units_settled: number;
  money_settled: number;
  buyer_value: number;
  rule_used: string;
}

export interface DecompositionPayload {
  terms: Array<{ performance: string; installment: number; value: number }>;
  total: number;
}

export interface TracePayload {
  regime: string;
  rule: string;
  t_max: number;
  steps: number;
  points: TracePointPayload[];
  settlement: SettlementPayload | null;
  decomposition_at_settlement: DecompositionPayload | null;
}

export interface ComparePayload {
  decision: string;
  margin: number;
  threshold: number;
  at_time: number;
  flip_time: number | null;
  settlement: SettlementPayload | null;
}
