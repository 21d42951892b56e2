// What-if orchestration: run the API calls for a draft and shape their
// payloads into a render-ready view model. Everything numeric in the view
// model is copied from API responses; the only processing is selecting
// points to plot and formatting labels.

import type { ApiClient } from "./api.js";
import type { Marker, Series } from "./charts.js";
import type {
  AlternateOfferBlock,
  ComparePayload,
  ScenarioDocument,
  SolveReport,
  TracePayload,
} from "./types.js";

export interface CrossingAnnotation {
  t: number;
  units: number;
  label: string;
}

export interface PeakAnnotation {
  t: number;
  value: number;
  label: string;
}

export interface WhatIfViewModel {
  solve: SolveReport;
  trace: TracePayload;
  crossing: CrossingAnnotation | null;
  peak: PeakAnnotation | null;
  offersSeries: Series[];
  moneySeries: Series;
  decompositionBars: Array<{ label: string; value: number }>;
  verdict: ComparePayload | null;
}

export function crossingAnnotation(trace: TracePayload): CrossingAnnotation | null {
  const settlement = trace.settlement;
  if (!settlement) return null;
  return {
    t: settlement.t_star,
    units: settlement.units_settled,
    label: `settlement t* = ${settlement.t_star.toFixed(4)}, ${settlement.units_settled.toFixed(1)} units`,
  };
}

export function peakAnnotation(trace: TracePayload): PeakAnnotation | null {
  if (!trace.points.length) return null;
  // presentation-level argmax over the plotted payload series
  let best = trace.points[0];
  for (const point of trace.points) {
    if (point.offers[1][0] > best.offers[1][0]) best = point;
  }
  return {
    t: best.t,
    value: best.offers[1][0],
    label: `peak ${best.offers[1][0].toFixed(0)} at t = ${best.t.toFixed(2)}`,
  };
}

export function offersVsDemandSeries(trace: TracePayload): Series[] {
  return [
    {
      label: "unit offers g11+g12",
      color: "#c23b22",
      points: trace.points.map((p) => [p.t, p.offers[0][0] + p.offers[0][1]]),
    },
    {
      label: "buyer minimum demand",
      color: "#2b5d9b",
      points: trace.points.map((p) => [p.t, p.demand]),
    },
  ];
}

export function moneySeries(trace: TracePayload): Series {
  return {
    label: "reimbursement offer g21",
    color: "#3c7d4e",
    points: trace.points.map((p) => [p.t, p.offers[1][0]]),
  };
}

export function crossingMarker(annotation: CrossingAnnotation | null): Marker[] {
  if (!annotation) return [];
  return [{ x: annotation.t, y: annotation.units, label: annotation.label, color: "#111" }];
}

export function peakMarker(annotation: PeakAnnotation | null): Marker[] {
  if (!annotation) return [];
  return [{ x: annotation.t, y: annotation.value, label: annotation.label, color: "#111" }];
}

export async function runWhatIf(
  api: ApiClient,
  document: ScenarioDocument,
  options: {
    t?: number;
    t_max?: number;
    steps?: number;
    alternate?: AlternateOfferBlock | null;
  } = {},
): Promise<WhatIfViewModel> {
  const t = options.t ?? Math.PI / 2;
  const [solve, trace] = await Promise.all([
    api.optimize(document, t),
    api.simulate(document, { t_max: options.t_max, steps: options.steps }),
  ]);
  const alternate = options.alternate ?? document.alternate_offer ?? null;
  const verdict = alternate ? await api.compare(document, alternate) : null;
  const decomposition = trace.decomposition_at_settlement;
  return {
    solve,
    trace,
    crossing: crossingAnnotation(trace),
    peak: peakAnnotation(trace),
    offersSeries: offersVsDemandSeries(trace),
    moneySeries: moneySeries(trace),
    decompositionBars: decomposition
      ? decomposition.terms
          .map((term) => ({
            label: `${term.performance}[${term.installment}]`,
            value: term.value,
          }))
          .concat([{ label: "total", value: decomposition.total }])
      : [],
    verdict,
  };
}
