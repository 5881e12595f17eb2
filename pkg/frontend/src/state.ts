/** Pure view-session state: every field is a projection of a server
 * response. Reducers never invent data (no optimistic updates), so
 * refetching the session after a reload reproduces the same state. */

import type {
  AskResponseWire,
  BetaValue,
  FollowupWire,
  PatchResponseWire,
  SessionWire,
} from "./types.js";

export type PendingKind = "ask" | "choose" | "patch" | "load" | null;

export interface ViewTurn {
  question: string;
  answer: string;
  followups: FollowupWire[];
  chosen: number | null;
}

export interface ViewSession {
  id: string | null;
  beta: BetaValue;
  turns: ViewTurn[];
  pending: PendingKind;
  error: string | null;
}

export function initialState(): ViewSession {
  return { id: null, beta: 1.0, turns: [], pending: null, error: null };
}

export function normalizeBeta(beta: number | string): BetaValue {
  if (typeof beta === "string") {
    return beta.toLowerCase() === "inf" || beta.toLowerCase() === "infinity"
      ? "inf"
      : Number(beta);
  }
  return beta;
}

export function applySessionCreated(state: ViewSession, id: string): ViewSession {
  return { ...initialState(), beta: state.beta, id };
}

/** Rebuild the whole view from GET /sessions/{id}; the reload path. */
export function applySessionFetched(_state: ViewSession, session: SessionWire): ViewSession {
  return {
    id: session.id,
    beta: normalizeBeta(session.beta),
    turns: session.turns.map((turn) => ({
      question: turn.question,
      answer: turn.answer,
      followups: turn.followups.slice(),
      chosen: turn.chosen,
    })),
    pending: null,
    error: null,
  };
}

export function startRequest(state: ViewSession, kind: Exclude<PendingKind, null>): ViewSession {
  if (state.pending !== null) {
    throw new Error(`request already pending: ${state.pending}`);
  }
  return { ...state, pending: kind, error: null };
}

export function applyAsk(state: ViewSession, response: AskResponseWire): ViewSession {
  const turn: ViewTurn = {
    question: response.question,
    answer: response.answer,
    followups: response.followups.slice(),
    chosen: null,
  };
  return {
    ...state,
    beta: normalizeBeta(response.trace_summary.beta),
    turns: [...state.turns, turn],
    pending: null,
    error: null,
  };
}

/** The chosen follow-up is marked on the previous turn and the new turn's
 * question comes verbatim from the server response. */
export function applyChoose(
  state: ViewSession,
  chosenIndex: number,
  response: AskResponseWire,
): ViewSession {
  const turns = state.turns.map((turn, i) =>
    i === state.turns.length - 1 ? { ...turn, chosen: chosenIndex } : turn,
  );
  return applyAsk({ ...state, turns }, response);
}

export function applyPatch(state: ViewSession, response: PatchResponseWire): ViewSession {
  if (state.turns.length === 0) {
    throw new Error("no turn to patch");
  }
  const turns = state.turns.map((turn, i) =>
    i === state.turns.length - 1
      ? { ...turn, followups: response.followups.slice() }
      : turn,
  );
  return {
    ...state,
    beta: normalizeBeta(response.beta),
    turns,
    pending: null,
    error: null,
  };
}

export function applyError(state: ViewSession, message: string): ViewSession {
  return { ...state, pending: null, error: message };
}

export function clearError(state: ViewSession): ViewSession {
  return { ...state, error: null };
}

export function latestTurnIndex(state: ViewSession): number {
  return state.turns.length - 1;
}

export function canMutate(state: ViewSession): boolean {
  return state.id !== null && state.pending === null;
}
