/** Wire types mirroring the HTTP API responses. The UI never recomputes
 * scores: every displayed value comes from these payloads. */
export {};
