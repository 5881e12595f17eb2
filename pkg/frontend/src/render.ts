/** DOM rendering: every function projects state (or a fetched trace) into
 * elements. No score is ever computed here. */

import { betaLabel, formatScore, splitFused } from "./format.js";
import { buildGraphView, nodeRadius } from "./graphview.js";
import type { GraphView } from "./graphview.js";
import { layoutGraph } from "./layout.js";
import type { ViewSession } from "./state.js";
import type { TraceResponseWire } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface Handlers {
  onAsk: (question: string) => void;
  onChoose: (index: number) => void;
  onRetry: () => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderConversation(
  container: HTMLElement,
  state: ViewSession,
  handlers: Handlers,
): void {
  container.replaceChildren();
  for (let i = 0; i < state.turns.length; i++) {
    const turn = state.turns[i];
    const isLatest = i === state.turns.length - 1;
    const block = el("div", "turn");
    const user = el("div", "bubble user", turn.question);
    user.dataset.role = "user";
    block.append(user);
    const answer = el("div", "bubble assistant", turn.answer);
    answer.dataset.role = "assistant";
    block.append(answer);

    const chips = el("div", "followups");
    turn.followups.forEach((followup, index) => {
      const chip = el("button", "chip", followup.text);
      chip.dataset.index = String(index);
      if (turn.chosen === index) chip.classList.add("chosen");
      chip.disabled = !isLatest || state.pending !== null || turn.chosen !== null;
      chip.addEventListener("click", () => handlers.onChoose(index));
      chips.append(chip);
    });
    block.append(chips);
    container.append(block);
  }
  if (state.error) {
    const banner = el("div", "error-banner");
    banner.append(el("span", "error-text", state.error));
    const retry = el("button", "retry", "Retry");
    retry.addEventListener("click", () => handlers.onRetry());
    banner.append(retry);
    container.append(banner);
  }
  if (state.pending) {
    container.append(el("div", "pending", `… ${state.pending}`));
  }
  container.scrollTop = container.scrollHeight;
}

export function renderInspector(container: HTMLElement, trace: TraceResponseWire | null): void {
  container.replaceChildren();
  if (!trace) {
    container.append(el("div", "hint", "Ask a question to inspect its knowledge graph."));
    return;
  }
  const view = buildGraphView(trace.trace);
  if (!view) {
    container.append(
      el(
        "div",
        "hint",
        "Full trace unavailable for this turn (minimal trace mode); the inspector is disabled.",
      ),
    );
    return;
  }
  const svg = renderGraphSvg(view, 460, 340);
  container.append(svg);

  const selected = view.nodes.find((node) => node.selected)!;
  const detail = el("div", "node-detail");
  detail.append(el("h3", undefined, `Selected: ${selected.title}`));
  detail.append(
    el(
      "div",
      "scores",
      `R ${formatScore(selected.R)} · I' ${formatScore(selected.I_norm)} · S ${formatScore(selected.S)}`,
    ),
  );
  container.append(detail);

  const knowledge = trace.trace.knowledge;
  if (knowledge) {
    const split = splitFused(knowledge.wiki_text, knowledge.fused_text);
    const panel = el("div", "knowledge");
    panel.append(el("h3", undefined, "Related knowledge"));
    const body = el("p", "fused");
    body.append(el("span", "wiki", split.wiki));
    if (split.continuation) {
      body.append(el("span", "continuation", split.continuation));
    }
    panel.append(body);
    container.append(panel);
  }
}

export function renderGraphSvg(view: GraphView, width: number, height: number): SVGSVGElement {
  const positions = layoutGraph(view, width, height);
  const values = view.nodes.map((node) => node.R);
  const low = Math.min(...values);
  const high = Math.max(...values);

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "graph");

  for (const edge of view.edges) {
    const a = positions.get(edge.source);
    const b = positions.get(edge.target);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", a.x.toFixed(1));
    line.setAttribute("y1", a.y.toFixed(1));
    line.setAttribute("x2", b.x.toFixed(1));
    line.setAttribute("y2", b.y.toFixed(1));
    line.setAttribute("class", "edge");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = edge.relation;
    line.append(title);
    svg.append(line);
  }

  for (const node of view.nodes) {
    const pos = positions.get(node.id)!;
    const group = document.createElementNS(SVG_NS, "g");
    const classes = ["node"];
    if (node.center) classes.push("center");
    if (node.selected) classes.push("selected");
    group.setAttribute("class", classes.join(" "));

    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", pos.x.toFixed(1));
    circle.setAttribute("cy", pos.y.toFixed(1));
    circle.setAttribute("r", nodeRadius(node.R, low, high).toFixed(1));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${node.title}\nR=${formatScore(node.R)} I'=${formatScore(node.I_norm)} S=${formatScore(node.S)}`;
    circle.append(title);
    group.append(circle);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", pos.x.toFixed(1));
    label.setAttribute("y", (pos.y - nodeRadius(node.R, low, high) - 3).toFixed(1));
    label.setAttribute("class", "label");
    label.textContent = node.title;
    group.append(label);

    svg.append(group);
  }
  return svg;
}

export function renderBetaControls(
  slider: HTMLInputElement,
  infToggle: HTMLInputElement,
  label: HTMLElement,
  state: ViewSession,
): void {
  const enabled = state.turns.length > 0 && state.pending === null;
  slider.disabled = !enabled || state.beta === "inf";
  infToggle.disabled = !enabled;
  infToggle.checked = state.beta === "inf";
  if (state.beta !== "inf") {
    slider.value = String(Math.round(state.beta * 100));
  }
  label.textContent = `β = ${betaLabel(state.beta)}`;
}
