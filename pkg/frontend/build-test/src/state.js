/** Pure view-session state: every field is a projection of a server
 * response. Reducers never invent data (no optimistic updates), so
 * refetching the session after a reload reproduces the same state. */
export function initialState() {
    return { id: null, beta: 1.0, turns: [], pending: null, error: null };
}
export function normalizeBeta(beta) {
    if (typeof beta === "string") {
        return beta.toLowerCase() === "inf" || beta.toLowerCase() === "infinity"
            ? "inf"
            : Number(beta);
    }
    return beta;
}
export function applySessionCreated(state, id) {
    return { ...initialState(), beta: state.beta, id };
}
/** Rebuild the whole view from GET /sessions/{id}; the reload path. */
export function applySessionFetched(_state, session) {
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
export function startRequest(state, kind) {
    if (state.pending !== null) {
        throw new Error(`request already pending: ${state.pending}`);
    }
    return { ...state, pending: kind, error: null };
}
export function applyAsk(state, response) {
    const turn = {
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
export function applyChoose(state, chosenIndex, response) {
    const turns = state.turns.map((turn, i) => i === state.turns.length - 1 ? { ...turn, chosen: chosenIndex } : turn);
    return applyAsk({ ...state, turns }, response);
}
export function applyPatch(state, response) {
    if (state.turns.length === 0) {
        throw new Error("no turn to patch");
    }
    const turns = state.turns.map((turn, i) => i === state.turns.length - 1
        ? { ...turn, followups: response.followups.slice() }
        : turn);
    return {
        ...state,
        beta: normalizeBeta(response.beta),
        turns,
        pending: null,
        error: null,
    };
}
export function applyError(state, message) {
    return { ...state, pending: null, error: message };
}
export function clearError(state) {
    return { ...state, error: null };
}
export function latestTurnIndex(state) {
    return state.turns.length - 1;
}
export function canMutate(state) {
    return state.id !== null && state.pending === null;
}
