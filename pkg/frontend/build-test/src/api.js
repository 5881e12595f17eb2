/** Typed client for the session API. The fetch function is injected so
 * tests can run without a browser or a server. */
export class ApiError extends Error {
    constructor(status, detail) {
        super(`HTTP ${status}: ${detail}`);
        this.status = status;
        this.detail = detail;
    }
}
async function parseError(response) {
    let detail = response.statusText;
    try {
        const body = await response.json();
        detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
    }
    catch {
        // keep the status text
    }
    throw new ApiError(response.status, detail);
}
export class ApiClient {
    constructor(baseUrl = "", fetchFn = (url, init) => fetch(url, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(method, path, body) {
        const init = { method, headers: { "content-type": "application/json" } };
        if (body !== undefined) {
            init.body = JSON.stringify(body);
        }
        const response = await this.fetchFn(this.baseUrl + path, init);
        if (!response.ok) {
            await parseError(response);
        }
        return (await response.json());
    }
    createSession() {
        return this.request("POST", "/sessions");
    }
    getSession(sessionId) {
        return this.request("GET", `/sessions/${sessionId}`);
    }
    ask(sessionId, question) {
        return this.request("POST", `/sessions/${sessionId}/ask`, { question });
    }
    choose(sessionId, index) {
        return this.request("POST", `/sessions/${sessionId}/choose`, { index });
    }
    patchBeta(sessionId, beta) {
        return this.request("PATCH", `/sessions/${sessionId}/config`, { beta });
    }
    getTrace(sessionId, turn) {
        return this.request("GET", `/sessions/${sessionId}/trace/${turn}`);
    }
}
