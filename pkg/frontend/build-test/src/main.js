/** Controller: owns one ViewSession, talks to the API, re-renders on every
 * server-confirmed change. At most one mutating request is in flight; the
 * controls are disabled while pending. */
import { ApiClient, ApiError } from "./api.js";
import { sliderToBeta } from "./format.js";
import { applyAsk, applyChoose, applyError, applyPatch, applySessionCreated, applySessionFetched, canMutate, initialState, latestTurnIndex, startRequest, } from "./state.js";
import { renderBetaControls, renderConversation, renderInspector } from "./render.js";
const api = new ApiClient("");
const SESSION_KEY = "followgen.session";
let state = initialState();
let latestTrace = null;
let lastAction = null;
const conversation = document.getElementById("conversation");
const inspector = document.getElementById("inspector");
const form = document.getElementById("ask-form");
const input = document.getElementById("question-input");
const askButton = document.getElementById("ask-button");
const slider = document.getElementById("beta-slider");
const infToggle = document.getElementById("beta-inf");
const betaLabelEl = document.getElementById("beta-label");
const newSessionButton = document.getElementById("new-session");
function render() {
    renderConversation(conversation, state, {
        onAsk: ask,
        onChoose: choose,
        onRetry: () => {
            if (lastAction)
                lastAction();
        },
    });
    renderInspector(inspector, latestTrace);
    renderBetaControls(slider, infToggle, betaLabelEl, state);
    askButton.disabled = state.pending !== null || state.id === null;
    input.disabled = state.pending !== null || state.id === null;
    if (state.turns.length === 0 && state.pending === null) {
        input.focus();
    }
}
function fail(err) {
    const message = err instanceof ApiError ? err.message : String(err);
    state = applyError(state, message);
    render();
}
async function refreshTrace() {
    const turn = latestTurnIndex(state);
    if (state.id === null || turn < 0) {
        latestTrace = null;
        return;
    }
    latestTrace = await api.getTrace(state.id, turn);
}
async function boot() {
    const stored = sessionStorage.getItem(SESSION_KEY);
    if (stored) {
        try {
            state = startRequest(state, "load");
            render();
            const session = await api.getSession(stored);
            state = applySessionFetched(state, session);
            await refreshTrace();
            render();
            return;
        }
        catch {
            sessionStorage.removeItem(SESSION_KEY);
            state = initialState();
        }
    }
    await createSession();
}
async function createSession() {
    try {
        const { id } = await api.createSession();
        sessionStorage.setItem(SESSION_KEY, id);
        state = applySessionCreated(initialState(), id);
        latestTrace = null;
        render();
    }
    catch (err) {
        fail(err);
    }
}
function ask(question) {
    if (!canMutate(state) || !question.trim())
        return;
    lastAction = () => ask(question);
    state = startRequest(state, "ask");
    render();
    api
        .ask(state.id, question)
        .then(async (response) => {
        state = applyAsk(state, response);
        await refreshTrace();
        render();
    })
        .catch(fail);
}
function choose(index) {
    if (!canMutate(state))
        return;
    lastAction = () => choose(index);
    state = startRequest(state, "choose");
    render();
    api
        .choose(state.id, index)
        .then(async (response) => {
        state = applyChoose(state, index, response);
        await refreshTrace();
        render();
    })
        .catch(fail);
}
function patchBeta(beta) {
    if (!canMutate(state) || state.turns.length === 0)
        return;
    lastAction = () => patchBeta(beta);
    state = startRequest(state, "patch");
    render();
    api
        .patchBeta(state.id, beta)
        .then(async (response) => {
        state = applyPatch(state, response);
        await refreshTrace();
        render();
    })
        .catch(fail);
}
form.addEventListener("submit", (event) => {
    event.preventDefault();
    const question = input.value.trim();
    if (question) {
        input.value = "";
        ask(question);
    }
});
slider.addEventListener("change", () => {
    patchBeta(sliderToBeta(Number(slider.value)));
});
infToggle.addEventListener("change", () => {
    patchBeta(infToggle.checked ? "inf" : sliderToBeta(Number(slider.value)));
});
newSessionButton.addEventListener("click", () => {
    sessionStorage.removeItem(SESSION_KEY);
    latestTrace = null;
    void createSession();
});
void boot();
