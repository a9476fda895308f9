/** Pure state transitions for the board UI.
 *
 * The server is the source of truth: every mutation returns a fresh
 * BoardView and `applyView` replaces the local copy wholesale. What lives
 * here is the decision logic in front of those calls (is this click a
 * stage, an unstage, or an illegal pick?) so it can be unit tested without
 * a DOM or a server.
 */

import type { BoardView, ErrorBody } from "./api.js";

export interface UiState {
  view: BoardView | null;
  hint: string[];
  /** ids that caught fire in the latest step, for the spread animation */
  flash: string[];
  lastError: ErrorBody | null;
  log: string[];
}

export const initialState: UiState = {
  view: null,
  hint: [],
  flash: [],
  lastError: null,
  log: [],
};

/** Replace the board after any successful server call. */
export function applyView(state: UiState, view: BoardView, note?: string, flash: string[] = []): UiState {
  return {
    ...state,
    view,
    // a stale hint would point at vertices that may have burned
    hint: [],
    flash,
    lastError: null,
    log: note ? [...state.log, note] : state.log,
  };
}

/** Ids burning in `after` that were not burning in `before` (the step's spread). */
export function newlyBurnt(before: BoardView | null, after: BoardView): string[] {
  const old = new Set<string>();
  for (const vertex of before?.vertices ?? []) {
    if (vertex.status === "burning") {
      old.add(vertex.id);
    }
  }
  return after.vertices.filter((v) => v.status === "burning" && !old.has(v.id)).map((v) => v.id);
}

export function applyError(state: UiState, error: ErrorBody): UiState {
  return {
    ...state,
    lastError: error,
    log: [...state.log, `rejected (${error.code}): ${error.detail}`],
  };
}

export function applyHint(state: UiState, hint: string[]): UiState {
  return { ...state, hint, lastError: null };
}

export type ToggleDecision =
  | { action: "protect"; id: string }
  | { action: "unprotect"; id: string }
  | { action: "reject"; reason: string };

/** Classify a click on vertex `id` against the current view.
 *
 * Pending picks toggle off; everything else must be stageable: unburnt,
 * unprotected, with budget headroom, before containment. The server
 * re-checks all of this; rejecting locally just saves a round trip and
 * gives an instant explanation.
 */
export function decideToggle(view: BoardView | null, id: string): ToggleDecision {
  if (view === null) {
    return { action: "reject", reason: "no active game" };
  }
  if (view.pending.includes(id)) {
    return { action: "unprotect", id };
  }
  if (view.contained) {
    return { action: "reject", reason: "the fire is already contained" };
  }
  const vertex = view.vertices.find((v) => v.id === id);
  if (vertex === undefined) {
    return { action: "reject", reason: `${id} is outside the current window` };
  }
  if (vertex.status === "burning") {
    return { action: "reject", reason: `${id} is burning` };
  }
  if (vertex.status === "protected") {
    return { action: "reject", reason: `${id} is already protected` };
  }
  if (view.pending.length >= view.budget) {
    return { action: "reject", reason: `budget for turn ${view.time + 1} is ${view.budget}` };
  }
  return { action: "protect", id };
}

/** One-line status for the header bar. */
export function statusLine(view: BoardView | null): string {
  if (view === null) {
    return "no game";
  }
  if (view.contained) {
    return (
      `contained at turn ${view.contained_at} - ` +
      `${view.fire_size} burnt, ${view.total_protected} protected`
    );
  }
  return (
    `turn ${view.time} - fire ${view.fire_size} - ` +
    `next budget ${view.budget} - staged ${view.pending.length}`
  );
}

/** Suggested filename for an exported trace. */
export function traceFilename(view: BoardView | null): string {
  const session = view === null ? "game" : view.session.slice(0, 8);
  return `firecontain-${session}.trace`;
}

/** Initial-fire form input: explicit ids win over the ball radius.
 *
 * Ids are split on whitespace or semicolons only: commas are part of
 * lattice ids ("0,0"), so they cannot act as separators.
 */
export function parseFireInput(idsText: string, ballRadius: number): string[] | { ball: number } {
  const ids = idsText.split(/[\s;]+/).filter((s) => s.length > 0);
  if (ids.length > 0) {
    return ids;
  }
  return { ball: Math.max(0, Math.floor(ballRadius) || 0) };
}
