/** Wire types mirroring the HTTP API responses. The UI never recomputes
 * scores: every displayed value comes from these payloads. */

export interface FollowupWire {
  index: number;
  text: string;
}

export interface TraceSummaryWire {
  topic_page_title: string;
  selected_node_id: string;
  selected_node_title: string;
  node_count: number;
  beta: number | string;
}

export interface AskResponseWire {
  turn: number;
  question: string;
  answer: string;
  followups: FollowupWire[];
  trace_summary: TraceSummaryWire;
}

export interface PatchResponseWire {
  beta: number | string;
  followups: FollowupWire[];
  trace_summary: TraceSummaryWire;
}

export interface SessionTurnWire {
  question: string;
  answer: string;
  followups: FollowupWire[];
  chosen: number | null;
}

export interface SessionWire {
  id: string;
  beta: number | string;
  turns: SessionTurnWire[];
}

export interface NodeScoreWire {
  w: number;
  n: number;
  I: number;
  I_norm: number;
  S: number;
  R: number;
}

export interface GraphNodeWire {
  id: string;
  title: string;
  definition: string;
  url: string | null;
  score?: NodeScoreWire;
}

export interface GraphEdgeWire {
  source: string;
  target: string;
  relation: string;
}

export interface GraphWire {
  nodes: GraphNodeWire[];
  edges: GraphEdgeWire[];
  center: string;
}

export interface KnowledgeWire {
  wiki_text: string;
  fused_text: string;
  source_node_id: string;
}

export interface TraceWire {
  qa: { question: string; answer: string };
  key_info: { topic: string; keywords: string[] } | null;
  topic_page: { title: string; url: string; definition: string } | null;
  graph: GraphWire | null;
  selected_node: { id: string; title: string; definition: string } | null;
  knowledge: KnowledgeWire | null;
  question: { text: string; trace_id: string } | null;
}

export interface TraceResponseWire {
  status: string;
  failed_stage: string | null;
  error: string | null;
  trace: TraceWire;
}

/** Beta as the UI tracks it: a number in [0, 2] or the infinity flag. */
export type BetaValue = number | "inf";
