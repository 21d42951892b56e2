// Console session state: the local draft, what it was computed from, and
// guards against out-of-order async results overwriting newer ones.

import type { ScenarioDocument } from "./types.js";

export interface SavedRef {
  id: string;
  revision: number;
}

export interface ConsoleState {
  draft: ScenarioDocument | null;
  presetName: string | null;
  saved: SavedRef | null;
  dirtySinceSave: boolean;
  // label carried next to every displayed number: which revision produced it
  computedFrom: string | null;
}

export function initialState(): ConsoleState {
  return { draft: null, presetName: null, saved: null, dirtySinceSave: false, computedFrom: null };
}

export function loadDraft(state: ConsoleState, doc: ScenarioDocument, presetName: string | null): ConsoleState {
  return { ...state, draft: doc, presetName, saved: null, dirtySinceSave: false };
}

export function editDraft(state: ConsoleState, next: ScenarioDocument): ConsoleState {
  return { ...state, draft: next, dirtySinceSave: true };
}

export function markSaved(state: ConsoleState, ref: SavedRef): ConsoleState {
  return { ...state, saved: ref, dirtySinceSave: false };
}

export function revisionLabel(state: ConsoleState): string {
  if (state.saved && !state.dirtySinceSave) {
    return `saved ${state.saved.id} rev ${state.saved.revision}`;
  }
  const base = state.presetName ? `preset ${state.presetName}` : "scratch";
  return state.dirtySinceSave ? `${base} (edited, unsaved)` : base;
}

export function markComputed(state: ConsoleState): ConsoleState {
  return { ...state, computedFrom: revisionLabel(state) };
}

/** Monotone token dispenser; stale async responses are detected and dropped. */
export class RequestSequencer {
  private latest = 0;

  next(): number {
    this.latest += 1;
    return this.latest;
  }

  isCurrent(token: number): boolean {
    return token === this.latest;
  }
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => fn(...args), waitMs);
  };
}
