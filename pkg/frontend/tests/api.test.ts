import assert from "node:assert/strict";
import { test } from "node:test";

import { ApiClient, ApiError } from "../src/api.js";

interface Recorded {
  url: string;
  method: string;
  body: unknown;
}

function fakeFetch(status: number, payload: unknown, log: Recorded[]) {
  return async (url: string, init?: RequestInit): Promise<Response> => {
    log.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    });
    return new Response(JSON.stringify(payload), {
      status,
      headers: { "content-type": "application/json" },
    });
  };
}

test("ask posts the question to the session endpoint", async () => {
  const log: Recorded[] = [];
  const client = new ApiClient("", fakeFetch(200, { turn: 0 }, log));
  await client.ask("sid", "Why is the sky blue?");
  assert.equal(log[0].url, "/sessions/sid/ask");
  assert.equal(log[0].method, "POST");
  assert.deepEqual(log[0].body, { question: "Why is the sky blue?" });
});

test("choose posts the index", async () => {
  const log: Recorded[] = [];
  const client = new ApiClient("", fakeFetch(200, {}, log));
  await client.choose("sid", 2);
  assert.equal(log[0].url, "/sessions/sid/choose");
  assert.deepEqual(log[0].body, { index: 2 });
});

test("patchBeta sends PATCH with the beta value or infinity flag", async () => {
  const log: Recorded[] = [];
  const client = new ApiClient("", fakeFetch(200, {}, log));
  await client.patchBeta("sid", 0.5);
  await client.patchBeta("sid", "inf");
  assert.equal(log[0].method, "PATCH");
  assert.equal(log[0].url, "/sessions/sid/config");
  assert.deepEqual(log[0].body, { beta: 0.5 });
  assert.deepEqual(log[1].body, { beta: "inf" });
});

test("trace and session are GET requests", async () => {
  const log: Recorded[] = [];
  const client = new ApiClient("", fakeFetch(200, {}, log));
  await client.getTrace("sid", 3);
  await client.getSession("sid");
  assert.equal(log[0].url, "/sessions/sid/trace/3");
  assert.equal(log[0].method, "GET");
  assert.equal(log[1].url, "/sessions/sid");
});

test("non-ok responses raise ApiError with the server detail", async () => {
  const log: Recorded[] = [];
  const client = new ApiClient("", fakeFetch(409, { detail: "choose before ask" }, log));
  await assert.rejects(
    () => client.choose("sid", 0),
    (err: unknown) => err instanceof ApiError && err.status === 409 && /choose before ask/.test(err.detail),
  );
});

test("base url prefixes every path", async () => {
  const log: Recorded[] = [];
  const client = new ApiClient("http://localhost:8000", fakeFetch(200, {}, log));
  await client.createSession();
  assert.equal(log[0].url, "http://localhost:8000/sessions");
});
