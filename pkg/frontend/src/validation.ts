// Client-side mirror of the server's document invariants. Same invariant
// names as the API's 422 responses, so inline errors and server errors read
// identically. This validates form input only; all model math stays server-side.

import type { ScenarioDocument } from "./types.js";

export interface FieldError {
  field: string;
  invariant: string;
  message: string;
}

function err(field: string, invariant: string, message: string): FieldError {
  return { field, invariant, message };
}

export function validateDocument(doc: ScenarioDocument): FieldError[] {
  const errors: FieldError[] = [];

  if (!doc.performances.length) {
    errors.push(err("performances", "performances_nonempty", "at least one performance required"));
  }
  let seenMoney = false;
  doc.performances.forEach((perf, i) => {
    const field = `performances[${i}]`;
    if (perf.kind === "money") {
      seenMoney = true;
      if (!(perf.value_per_unit >= 0 && perf.value_per_unit < 1)) {
        errors.push(
          err(
            `${field}.value_per_unit`,
            "money_value_in_unit_interval",
            "reimbursement value must be a fraction in [0, 1)",
          ),
        );
      }
    } else {
      if (seenMoney) {
        errors.push(
          err(field, "performances_order", "unit performances must precede money performances"),
        );
      }
      if (!(perf.value_per_unit > 0)) {
        errors.push(err(`${field}.value_per_unit`, "unit_value_positive", "must be > 0"));
      }
      if (!(perf.cost_per_unit > 0)) {
        errors.push(err(`${field}.cost_per_unit`, "unit_cost_positive", "must be > 0"));
      }
    }
  });

  if (!doc.installments.length) {
    errors.push(err("installments", "installments_nonempty", "at least one installment required"));
  }
  doc.installments.forEach((inst, i) => {
    if (!(inst.delay >= 0)) {
      errors.push(err(`installments[${i}].delay`, "delay_nonnegative", "must be >= 0"));
    }
    if (i > 0 && inst.delay < doc.installments[i - 1].delay) {
      errors.push(
        err(
          `installments[${i}].delay`,
          "installment_delays_nondecreasing",
          "delays must not decrease",
        ),
      );
    }
  });

  if (!(doc.discount.rate >= 0)) {
    errors.push(err("discount.rate", "discount_rate_nonnegative", "must be >= 0"));
  }
  if (!(doc.contract.unit_value > 0) || !(doc.contract.unit_cost > 0)) {
    errors.push(err("contract", "contract_values_positive", "contract values must be > 0"));
  }

  for (const [name, block] of Object.entries(doc.constraints)) {
    if (!(block.phase_rate > 0)) {
      errors.push(err(`constraints.${name}.phase_rate`, "phase_rate_positive", "must be > 0"));
    }
  }

  if (doc.unit_caps.length !== doc.installments.length) {
    errors.push(err("unit_caps", "unit_caps_length", "one cap per installment (null = uncapped)"));
  }
  doc.unit_caps.forEach((cap, i) => {
    if (cap !== null && !(cap >= 0)) {
      errors.push(err(`unit_caps[${i}]`, "unit_caps_nonnegative", "must be >= 0 or empty"));
    }
  });

  if (!(doc.dynamics.concession_delay > 0) || !(doc.dynamics.concession_rate > 0)) {
    errors.push(
      err("dynamics", "concession_params_positive", "concession parameters must be > 0"),
    );
  }

  const offer = doc.alternate_offer;
  if (offer) {
    for (const key of ["litigation_risk", "alternate_failure_risk"] as const) {
      if (!(offer[key] >= 0 && offer[key] <= 1)) {
        errors.push(
          err(`alternate_offer.${key}`, `${key === "litigation_risk" ? "litigation" : "failure"}_risk_range`, "must be in [0, 1]"),
        );
      }
    }
    if (!(offer.expected_damages >= 0)) {
      errors.push(err("alternate_offer.expected_damages", "damages_nonnegative", "must be >= 0"));
    }
    if (!(offer.termination_cost >= 0)) {
      errors.push(
        err("alternate_offer.termination_cost", "termination_cost_nonnegative", "must be >= 0"),
      );
    }
  }
  return errors;
}
