import assert from "node:assert/strict";
import { test } from "node:test";

import { betaLabel, betaToSlider, sliderToBeta, splitFused, SLIDER_MAX } from "../src/format.js";

test("fused text splits exactly at the wiki prefix boundary", () => {
  const wiki = "The speed of sound is about 343 m/s.";
  const fused = wiki + " Beyond this, temperature matters.";
  const split = splitFused(wiki, fused);
  assert.equal(split.wiki, wiki);
  assert.equal(split.continuation, " Beyond this, temperature matters.");
  assert.equal(split.wiki + split.continuation, fused);
});

test("split rejects a fused text that lost the prefix", () => {
  assert.throws(() => splitFused("abc", "xbc rest"), /does not start with/);
});

test("empty continuation is preserved as empty", () => {
  const split = splitFused("same", "same");
  assert.equal(split.continuation, "");
});

test("slider maps 0..200 onto beta 0..2", () => {
  assert.equal(sliderToBeta(0), 0);
  assert.equal(sliderToBeta(100), 1.0);
  assert.equal(sliderToBeta(SLIDER_MAX), 2.0);
  assert.equal(sliderToBeta(50), 0.5);
});

test("slider clamps out-of-range positions", () => {
  assert.equal(sliderToBeta(-10), 0);
  assert.equal(sliderToBeta(1000), 2.0);
});

test("beta renders back onto the slider; infinity pins to the top", () => {
  assert.equal(betaToSlider(0.5), 50);
  assert.equal(betaToSlider(2.0), 200);
  assert.equal(betaToSlider("inf"), SLIDER_MAX);
});

test("beta labels", () => {
  assert.equal(betaLabel("inf"), "∞");
  assert.equal(betaLabel(1.0), "1");
  assert.equal(betaLabel(0.5), "0.5");
  assert.equal(betaLabel(0), "0");
});
