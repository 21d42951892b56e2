// DOM wiring for the mediator console. Two panels mirror the confidential
// caucus structure (buyer constraints on the left, supplier constraints on
// the right); what-if runs call the API and render the annotated charts.

import { ApiClient, ApiError } from "./api.js";
import { barChart, lineChart } from "./charts.js";
import {
  crossingMarker,
  peakMarker,
  runWhatIf,
  type WhatIfViewModel,
} from "./controller.js";
import {
  ConsoleState,
  RequestSequencer,
  debounce,
  editDraft,
  initialState,
  loadDraft,
  markComputed,
  markSaved,
  revisionLabel,
} from "./state.js";
import type { AlternateOfferBlock, ScenarioDocument } from "./types.js";
import { validateDocument } from "./validation.js";

interface FieldSpec {
  label: string;
  get: (doc: ScenarioDocument) => number | null;
  set: (doc: ScenarioDocument, value: number | null) => void;
  optional?: boolean;
  errorKey: string;
}

const BUYER_FIELDS: FieldSpec[] = [
  {
    label: "minimum demand core (units)",
    get: (d) => d.constraints.buyer_demand.core,
    set: (d, v) => (d.constraints.buyer_demand.core = v ?? 0),
    errorKey: "constraints.buyer_demand.core",
  },
  {
    label: "demand modulation (units)",
    get: (d) => d.constraints.buyer_demand.modulation,
    set: (d, v) => (d.constraints.buyer_demand.modulation = v ?? 0),
    optional: true,
    errorKey: "constraints.buyer_demand.modulation",
  },
  {
    label: "demand reassessment rate",
    get: (d) => d.constraints.buyer_demand.phase_rate,
    set: (d, v) => (d.constraints.buyer_demand.phase_rate = v ?? 0),
    errorKey: "constraints.buyer_demand.phase_rate",
  },
  {
    label: "discount rate",
    get: (d) => d.discount.rate,
    set: (d, v) => (d.discount.rate = v ?? 0),
    errorKey: "discount.rate",
  },
  {
    label: "contracted unit value",
    get: (d) => d.contract.unit_value,
    set: (d, v) => (d.contract.unit_value = v ?? 0),
    errorKey: "contract",
  },
  {
    label: "replacement unit value",
    get: (d) => d.performances[0].value_per_unit,
    set: (d, v) => (d.performances[0].value_per_unit = v ?? 0),
    errorKey: "performances[0].value_per_unit",
  },
  {
    label: "reimbursement value fraction",
    get: (d) => d.performances[1].value_per_unit,
    set: (d, v) => (d.performances[1].value_per_unit = v ?? 0),
    errorKey: "performances[1].value_per_unit",
  },
];

const SUPPLIER_FIELDS: FieldSpec[] = [
  {
    label: "contracted unit cost",
    get: (d) => d.contract.unit_cost,
    set: (d, v) => (d.contract.unit_cost = v ?? 0),
    errorKey: "contract",
  },
  {
    label: "replacement unit cost",
    get: (d) => d.performances[0].cost_per_unit,
    set: (d, v) => (d.performances[0].cost_per_unit = v ?? 0),
    errorKey: "performances[0].cost_per_unit",
  },
  {
    label: "solvency ceiling core",
    get: (d) => d.constraints.supplier_solvency.core,
    set: (d, v) => (d.constraints.supplier_solvency.core = v ?? 0),
    errorKey: "constraints.supplier_solvency.core",
  },
  {
    label: "solvency modulation",
    get: (d) => d.constraints.supplier_solvency.modulation,
    set: (d, v) => (d.constraints.supplier_solvency.modulation = v ?? 0),
    optional: true,
    errorKey: "constraints.supplier_solvency.modulation",
  },
  {
    label: "capacity ceiling core",
    get: (d) => d.constraints.supplier_capacity.core,
    set: (d, v) => (d.constraints.supplier_capacity.core = v ?? 0),
    errorKey: "constraints.supplier_capacity.core",
  },
  {
    label: "capacity modulation",
    get: (d) => d.constraints.supplier_capacity.modulation,
    set: (d, v) => (d.constraints.supplier_capacity.modulation = v ?? 0),
    optional: true,
    errorKey: "constraints.supplier_capacity.modulation",
  },
  {
    label: "supplier reassessment rate",
    get: (d) => d.constraints.supplier_solvency.phase_rate,
    set: (d, v) => {
      d.constraints.supplier_solvency.phase_rate = v ?? 0;
      d.constraints.supplier_capacity.phase_rate = v ?? 0;
    },
    errorKey: "constraints.supplier_solvency.phase_rate",
  },
  {
    label: "first installment unit cap",
    get: (d) => d.unit_caps[0] ?? null,
    set: (d, v) => (d.unit_caps[0] = v),
    optional: true,
    errorKey: "unit_caps[0]",
  },
  {
    label: "concession delay",
    get: (d) => d.dynamics.concession_delay,
    set: (d, v) => (d.dynamics.concession_delay = v ?? 0),
    errorKey: "dynamics",
  },
  {
    label: "concession rate",
    get: (d) => d.dynamics.concession_rate,
    set: (d, v) => (d.dynamics.concession_rate = v ?? 0),
    errorKey: "dynamics",
  },
];

const DELIVERY_FIELDS: FieldSpec[] = [
  {
    label: "first delivery delay",
    get: (d) => d.installments[0].delay,
    set: (d, v) => (d.installments[0].delay = v ?? 0),
    errorKey: "installments[0].delay",
  },
  {
    label: "second delivery delay",
    get: (d) => d.installments[1]?.delay ?? null,
    set: (d, v) => {
      if (d.installments[1]) d.installments[1].delay = v ?? 0;
    },
    errorKey: "installments[1].delay",
  },
];

const OFFER_FIELDS: Array<{ label: string; key: keyof AlternateOfferBlock }> = [
  { label: "alternate package value", key: "alternate_value" },
  { label: "expected damages", key: "expected_damages" },
  { label: "damages delay", key: "damages_delay" },
  { label: "litigation risk", key: "litigation_risk" },
  { label: "alternate failure risk", key: "alternate_failure_risk" },
  { label: "termination cost", key: "termination_cost" },
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

class ConsoleApp {
  private api: ApiClient;
  private state: ConsoleState = initialState();
  private sequencer = new RequestSequencer();
  private inputs = new Map<FieldSpec, HTMLInputElement>();
  private offerInputs = new Map<keyof AlternateOfferBlock, HTMLInputElement>();

  constructor(private root: HTMLElement) {
    const saved = localStorage.getItem("mediate-api-base");
    this.api = new ApiClient(saved ?? "");
  }

  async start(): Promise<void> {
    this.renderSkeleton();
    await this.populatePresets();
  }

  private renderSkeleton(): void {
    this.root.innerHTML = "";
    const header = el("header");
    header.append(el("h1", {}, "Mediator console"));
    const controls = el("div", { class: "controls" });
    const apiInput = el("input", {
      id: "api-base",
      placeholder: "API base (empty = same origin)",
      value: this.api.baseUrl,
    });
    apiInput.addEventListener("change", () => {
      this.api.baseUrl = apiInput.value.trim();
      localStorage.setItem("mediate-api-base", this.api.baseUrl);
      void this.populatePresets();
    });
    const presetSelect = el("select", { id: "preset-select" });
    presetSelect.addEventListener("change", () => void this.loadPreset(presetSelect.value));
    const runButton = el("button", { id: "run" }, "Run what-if");
    runButton.addEventListener("click", () => this.debouncedRun());
    const saveButton = el("button", { id: "save" }, "Save scenario");
    saveButton.addEventListener("click", () => void this.saveDraft());
    controls.append(apiInput, presetSelect, runButton, saveButton, el("span", { id: "revision" }));
    header.append(controls);

    const panels = el("div", { class: "panels" });
    panels.append(
      this.buildPanel("Buyer constraints", BUYER_FIELDS, "buyer"),
      this.buildPanel("Supplier constraints", SUPPLIER_FIELDS, "supplier"),
      this.buildPanel("Deliveries", DELIVERY_FIELDS, "deliveries"),
      this.buildOfferPanel(),
    );
    const errors = el("div", { id: "errors", class: "errors" });
    const results = el("div", { id: "results" });
    results.append(
      el("div", { id: "summary", class: "summary" }),
      el("div", { id: "chart-offers", class: "chart-box" }),
      el("div", { id: "chart-money", class: "chart-box" }),
      el("div", { id: "chart-decomposition", class: "chart-box" }),
      el("div", { id: "verdict", class: "summary" }),
    );
    this.root.append(header, panels, errors, results);
  }

  private buildPanel(title: string, fields: FieldSpec[], cls: string): HTMLElement {
    const panel = el("section", { class: `panel ${cls}` });
    panel.append(el("h2", {}, title));
    for (const field of fields) {
      const row = el("label", { class: "field" });
      row.append(el("span", {}, field.label));
      const input = el("input", { type: "number", step: "any" });
      input.addEventListener("input", () => this.onFieldEdit(field, input));
      row.append(input, el("em", { class: "field-error", "data-for": field.errorKey }));
      panel.append(row);
      this.inputs.set(field, input);
    }
    return panel;
  }

  private buildOfferPanel(): HTMLElement {
    const panel = el("section", { class: "panel offer" });
    panel.append(el("h2", {}, "Alternate supplier"));
    for (const spec of OFFER_FIELDS) {
      const row = el("label", { class: "field" });
      row.append(el("span", {}, spec.label));
      const input = el("input", { type: "number", step: "any" });
      row.append(input);
      panel.append(row);
      this.offerInputs.set(spec.key, input);
    }
    return panel;
  }

  private async populatePresets(): Promise<void> {
    const select = this.root.querySelector<HTMLSelectElement>("#preset-select");
    if (!select) return;
    try {
      const names = await this.api.listPresets();
      select.innerHTML = "";
      for (const name of names) select.append(el("option", { value: name }, name));
      if (names.length) await this.loadPreset(names[0]);
    } catch (error) {
      this.showError(error);
    }
  }

  private async loadPreset(name: string): Promise<void> {
    try {
      const preset = await this.api.getPreset(name);
      this.state = loadDraft(this.state, preset.document, name);
      this.fillForm();
      this.updateRevisionBadge();
    } catch (error) {
      this.showError(error);
    }
  }

  private fillForm(): void {
    const draft = this.state.draft;
    if (!draft) return;
    for (const [field, input] of this.inputs) {
      const value = field.get(draft);
      input.value = value === null ? "" : String(value);
    }
    const offer = draft.alternate_offer;
    for (const [key, input] of this.offerInputs) {
      input.value = offer ? String(offer[key]) : "";
    }
  }

  private onFieldEdit(field: FieldSpec, input: HTMLInputElement): void {
    if (!this.state.draft) return;
    const draft = structuredClone(this.state.draft);
    const raw = input.value.trim();
    // an emptied optional field falls back to its neutral default
    field.set(draft, raw === "" ? (field.optional ? (field.errorKey.startsWith("unit_caps") ? null : 0) : null) : Number(raw));
    this.state = editDraft(this.state, draft);
    this.updateRevisionBadge();
    this.showValidation();
  }

  private collectOffer(): AlternateOfferBlock | null {
    const values: Partial<Record<keyof AlternateOfferBlock, number>> = {};
    let any = false;
    for (const [key, input] of this.offerInputs) {
      if (input.value.trim() !== "") {
        values[key] = Number(input.value);
        any = true;
      }
    }
    if (!any) return this.state.draft?.alternate_offer ?? null;
    return {
      alternate_value: values.alternate_value ?? 0,
      expected_damages: values.expected_damages ?? 0,
      damages_delay: values.damages_delay ?? 0,
      litigation_risk: values.litigation_risk ?? 0,
      alternate_failure_risk: values.alternate_failure_risk ?? 1,
      termination_cost: values.termination_cost ?? 0,
    };
  }

  private showValidation(): boolean {
    const box = this.root.querySelector("#errors");
    if (!box || !this.state.draft) return false;
    const errors = validateDocument(this.state.draft);
    box.innerHTML = "";
    this.root.querySelectorAll(".field-error").forEach((node) => (node.textContent = ""));
    for (const error of errors) {
      const slot = this.root.querySelector(`.field-error[data-for="${error.field}"]`);
      if (slot) slot.textContent = error.message;
      box.append(el("div", { class: "error-line" }, `${error.field}: ${error.message} [${error.invariant}]`));
    }
    return errors.length === 0;
  }

  private debouncedRun = debounce(() => void this.run(), 250);

  private async run(): Promise<void> {
    if (!this.state.draft || !this.showValidation()) return;
    const token = this.sequencer.next();
    const badge = this.root.querySelector("#summary");
    if (badge) badge.textContent = "running...";
    try {
      const view = await runWhatIf(this.api, this.state.draft, {
        alternate: this.collectOffer(),
      });
      if (!this.sequencer.isCurrent(token)) return; // stale response discarded
      this.state = markComputed(this.state);
      this.renderResults(view);
    } catch (error) {
      if (this.sequencer.isCurrent(token)) this.showError(error);
    }
  }

  private renderResults(view: WhatIfViewModel): void {
    const summary = this.root.querySelector("#summary");
    if (summary) {
      const z = view.solve.allocation.z;
      const settled = view.crossing
        ? view.crossing.label
        : view.trace.settlement
          ? `settlement t* = ${view.trace.settlement.t_star.toFixed(4)}`
          : "no settlement within the horizon";
      summary.textContent =
        `computed from ${this.state.computedFrom} | regime ${view.solve.regime} | ` +
        `allocation (${z[0][0].toFixed(2)}, ${z[0][1].toFixed(2)}, ${z[1][0].toFixed(2)}) | ` +
        `objective ${view.solve.allocation.objective.toFixed(2)} | ${settled}`;
    }
    const offersBox = this.root.querySelector("#chart-offers");
    if (offersBox) {
      offersBox.innerHTML = lineChart({
        title: "Unit offers vs buyer minimum demand",
        series: view.offersSeries,
        markers: crossingMarker(view.crossing),
      });
    }
    const moneyBox = this.root.querySelector("#chart-money");
    if (moneyBox) {
      moneyBox.innerHTML = lineChart({
        title: "Reimbursement offer over mediation time",
        series: [view.moneySeries],
        markers: peakMarker(view.peak),
      });
    }
    const decompositionBox = this.root.querySelector("#chart-decomposition");
    if (decompositionBox) {
      decompositionBox.innerHTML = view.decompositionBars.length
        ? barChart({ title: "Buyer value decomposition at settlement", bars: view.decompositionBars })
        : "";
    }
    const verdictBox = this.root.querySelector("#verdict");
    if (verdictBox) {
      if (view.verdict) {
        const flip =
          view.verdict.flip_time === null
            ? "never beats the alternate within the horizon"
            : `flips to stay at t = ${view.verdict.flip_time.toFixed(4)}`;
        verdictBox.textContent =
          `versus alternate: ${view.verdict.decision} at t = ${view.verdict.at_time.toFixed(4)} ` +
          `(margin ${view.verdict.margin.toFixed(2)}, threshold ${view.verdict.threshold.toFixed(2)}; ${flip})`;
      } else {
        verdictBox.textContent = "no alternate supplier data entered";
      }
    }
  }

  private async saveDraft(): Promise<void> {
    if (!this.state.draft || !this.showValidation()) return;
    try {
      const saved = this.state.saved
        ? await this.api.updateScenario(this.state.saved.id, this.state.draft, this.state.saved.revision)
        : await this.api.saveScenario(this.state.draft);
      this.state = markSaved(this.state, saved);
      this.updateRevisionBadge();
    } catch (error) {
      this.showError(error);
    }
  }

  private updateRevisionBadge(): void {
    const badge = this.root.querySelector("#revision");
    if (badge) badge.textContent = revisionLabel(this.state);
  }

  private showError(error: unknown): void {
    const box = this.root.querySelector("#errors");
    if (!box) return;
    const message =
      error instanceof ApiError
        ? `API ${error.status}: ${JSON.stringify(error.body)}`
        : String(error);
    box.innerHTML = "";
    box.append(el("div", { class: "error-line" }, message));
  }
}

const mount = document.querySelector<HTMLElement>("#app");
if (mount) {
  void new ConsoleApp(mount).start();
}
