/** GraphView: the inspector's projection of a full trace. Scores are taken
 * verbatim from the server; exactly one node is the center and exactly one
 * is selected. */

import type { GraphWire, TraceWire } from "./types.js";

export interface GraphViewNode {
  id: string;
  title: string;
  definition: string;
  R: number;
  I_norm: number;
  S: number;
  selected: boolean;
  center: boolean;
}

export interface GraphViewEdge {
  source: string;
  target: string;
  relation: string;
}

export interface GraphView {
  nodes: GraphViewNode[];
  edges: GraphViewEdge[];
}

/** null when the trace was recorded in minimal mode (no graph/scores):
 * the inspector renders a disabled hint instead. */
export function buildGraphView(trace: TraceWire): GraphView | null {
  const graph: GraphWire | null = trace.graph;
  const selected = trace.selected_node;
  if (!graph || !selected) {
    return null;
  }
  if (graph.nodes.some((node) => !node.score)) {
    return null;
  }
  const nodes: GraphViewNode[] = graph.nodes.map((node) => ({
    id: node.id,
    title: node.title,
    definition: node.definition,
    R: node.score!.R,
    I_norm: node.score!.I_norm,
    S: node.score!.S,
    selected: node.id === selected.id,
    center: node.id === graph.center,
  }));
  const selectedCount = nodes.filter((node) => node.selected).length;
  const centerCount = nodes.filter((node) => node.center).length;
  if (selectedCount !== 1 || centerCount !== 1) {
    throw new Error(
      `expected exactly one selected and one center node, got ${selectedCount}/${centerCount}`,
    );
  }
  return { nodes, edges: graph.edges.map((edge) => ({ ...edge })) };
}

/** Node radius proportional to the composite score, rescaled into
 * [minRadius, maxRadius]; a flat score column renders mid-size. */
export function nodeRadius(
  value: number,
  low: number,
  high: number,
  minRadius = 6,
  maxRadius = 18,
): number {
  if (high <= low) {
    return (minRadius + maxRadius) / 2;
  }
  const t = (value - low) / (high - low);
  return minRadius + t * (maxRadius - minRadius);
}
