"""Stage 2: build a knowledge graph around the topic entity and pick the
background-knowledge node.

Node ranking combines two views: structural importance (PageRank weight
times random-walk visit count, min-max normalized) and semantic similarity
of the node definition to the recognition query, mixed by the beta weight.
Edges are stored as emitted (parent -> child with a relation label) but
always traversed as undirected so every node stays reachable.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from random import Random

import numpy as np

from .backends.base import BackendSet, GenerationParams, WikiPage
from .errors import GraphTooSmallError, KeyMismatchError, PageNotFoundError
from .prompting import DEFINE_ENTITY, EXPAND_ENTITY, load_template

log = logging.getLogger(__name__)

Edge = tuple[str, str, str]


@dataclass(frozen=True)
class KGNode:
    id: str
    title: str
    definition: str
    url: str | None = None

    def __post_init__(self) -> None:
        if not self.definition:
            raise ValueError(f"node {self.id!r} must carry a definition")


@dataclass
class KnowledgeGraph:
    nodes: dict[str, KGNode]
    edges: list[Edge]
    center: str

    def neighbors(self, node_id: str) -> list[str]:
        """Undirected neighbor ids, sorted for deterministic traversal."""
        out: set[str] = set()
        for source, target, _ in self.edges:
            if source == node_id:
                out.add(target)
            elif target == node_id:
                out.add(source)
        return sorted(out)

    def validate(self) -> None:
        if self.center not in self.nodes:
            raise ValueError("center must be a graph node")
        seen: set[Edge] = set()
        for edge in self.edges:
            source, target, _ = edge
            if source not in self.nodes or target not in self.nodes:
                raise ValueError(f"edge endpoint missing: {edge}")
            if source == target:
                raise ValueError(f"self-loop not allowed: {edge}")
            if edge in seen:
                raise ValueError(f"duplicate edge: {edge}")
            seen.add(edge)
        reached = {self.center}
        frontier = deque([self.center])
        while frontier:
            for neighbor in self.neighbors(frontier.popleft()):
                if neighbor not in reached:
                    reached.add(neighbor)
                    frontier.append(neighbor)
        if reached != set(self.nodes):
            raise ValueError("graph must be connected from the center")


@dataclass(frozen=True)
class NodeScore:
    node_id: str
    w: float
    n: int
    I: float
    I_norm: float
    S: float
    R: float


@dataclass(frozen=True)
class SelectionConfig:
    beta: float = 1.0
    walk_steps: int = 100
    pagerank_damping: float = 0.85
    restart_prob: float = 0.15
    max_nodes: int = 40
    max_depth: int = 2
    max_children: int = 6
    rng_seed: int = 0
    resolve_parallelism: int = 4
    prompts_dir: str | Path | None = None

    def __post_init__(self) -> None:
        if self.beta < 0:
            raise ValueError("beta must be >= 0 (math.inf ranks by similarity only)")
        if not 0 < self.pagerank_damping < 1:
            raise ValueError("pagerank_damping must be in (0,1)")
        if not 0 <= self.restart_prob < 1:
            raise ValueError("restart_prob must be in [0,1)")
        for name in ("walk_steps", "max_nodes", "max_depth", "max_children"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


def canonical_id(title: str) -> str:
    return " ".join(title.lower().split())


def _parse_children(reply: str, cap: int) -> list[tuple[str, str]]:
    children: list[tuple[str, str]] = []
    seen: set[str] = set()
    for line in reply.splitlines():
        if "|" not in line:
            continue
        name, _, relation = line.partition("|")
        name = name.strip().strip('"')
        relation = relation.strip() or "related to"
        if not name or canonical_id(name) in seen:
            continue
        seen.add(canonical_id(name))
        children.append((name, relation))
        if len(children) >= cap:
            break
    return children


def build_graph(
    seed_page: WikiPage,
    backends: BackendSet,
    config: SelectionConfig = SelectionConfig(),
    params: GenerationParams = GenerationParams(),
) -> KnowledgeGraph:
    """Breadth-first expansion from the seed entity.

    Each frontier node is expanded by asking the chat backend for up to
    max_children related entities with relation labels. Children resolve
    to pages when possible; otherwise a one-sentence chat definition backs
    the node (url-less). Expansion stops at max_depth or max_nodes.
    """
    if not seed_page.definition:
        raise ValueError("seed page must have a definition")
    expand_tpl = load_template(EXPAND_ENTITY, config.prompts_dir)
    define_tpl = load_template(DEFINE_ENTITY, config.prompts_dir)

    center_id = canonical_id(seed_page.title)
    center = KGNode(
        id=center_id,
        title=seed_page.title,
        definition=seed_page.definition,
        url=seed_page.url or None,
    )
    nodes: dict[str, KGNode] = {center_id: center}
    edges: list[Edge] = []
    edge_set: set[Edge] = set()
    depth = {center_id: 0}
    frontier = deque([center_id])

    def resolve(child_title: str) -> KGNode | None:
        try:
            page = backends.search.fetch_page(child_title)
            return KGNode(
                id=canonical_id(page.title),
                title=page.title,
                definition=page.definition,
                url=page.url or None,
            )
        except PageNotFoundError:
            prompt = define_tpl.render(title=child_title, context_title=seed_page.title)
            definition = backends.chat.chat_complete(prompt, params).strip()
            if not definition:
                return None
            return KGNode(id=canonical_id(child_title), title=child_title, definition=definition)

    while frontier:
        parent_id = frontier.popleft()
        if depth[parent_id] >= config.max_depth:
            continue
        parent = nodes[parent_id]
        prompt = expand_tpl.render(
            title=parent.title,
            definition=parent.definition,
            max_children=config.max_children,
        )
        reply = backends.chat.chat_complete(prompt, params)
        children = _parse_children(reply, config.max_children)
        children = [(name, rel) for name, rel in children if canonical_id(name) != parent_id]
        if config.resolve_parallelism > 1 and len(children) > 1:
            with ThreadPoolExecutor(max_workers=config.resolve_parallelism) as pool:
                resolved = list(pool.map(lambda c: resolve(c[0]), children))
        else:
            resolved = [resolve(name) for name, _ in children]
        for (_, relation), node in zip(children, resolved):
            if node is None or node.id == parent_id:
                continue
            if node.id not in nodes:
                if len(nodes) >= config.max_nodes:
                    continue
                nodes[node.id] = node
                depth[node.id] = depth[parent_id] + 1
                frontier.append(node.id)
            edge = (parent_id, node.id, relation)
            if edge not in edge_set:
                edge_set.add(edge)
                edges.append(edge)

    graph = KnowledgeGraph(nodes=nodes, edges=edges, center=center_id)
    if len(graph.nodes) < 2:
        raise GraphTooSmallError(f"graph has {len(graph.nodes)} node(s)")
    graph.validate()
    return graph


def pagerank(
    graph: KnowledgeGraph,
    damping: float = 0.85,
    tol: float = 1e-9,
    max_iter: int = 200,
) -> dict[str, float]:
    """Standard PageRank with uniform teleport over undirected-ized edges."""
    ids = sorted(graph.nodes)
    index = {node_id: i for i, node_id in enumerate(ids)}
    size = len(ids)
    neighbor_lists = [graph.neighbors(node_id) for node_id in ids]

    weights = np.full(size, 1.0 / size)
    transition = np.zeros((size, size))
    dangling = np.zeros(size, dtype=bool)
    for i, neighbors in enumerate(neighbor_lists):
        if not neighbors:
            dangling[i] = True
            continue
        share = 1.0 / len(neighbors)
        for neighbor in neighbors:
            transition[index[neighbor], i] = share

    teleport = np.full(size, 1.0 / size)
    for _ in range(max_iter):
        spread = transition @ weights + weights[dangling].sum() * teleport
        updated = damping * spread + (1.0 - damping) * teleport
        if np.abs(updated - weights).sum() < tol:
            weights = updated
            break
        weights = updated
    return {node_id: float(weights[index[node_id]]) for node_id in ids}


def random_walk_visits(graph: KnowledgeGraph, config: SelectionConfig) -> dict[str, int]:
    """Seeded restart walk from the center; the start position counts.

    Sum of counts is always walk_steps + 1. A neighborless current node
    forces a restart to the center.
    """
    rng = Random(config.rng_seed)
    neighbor_cache = {node_id: graph.neighbors(node_id) for node_id in graph.nodes}
    counts = {node_id: 0 for node_id in graph.nodes}
    current = graph.center
    counts[current] += 1
    for _ in range(config.walk_steps):
        neighbors = neighbor_cache[current]
        if not neighbors or rng.random() < config.restart_prob:
            current = graph.center
        else:
            current = neighbors[rng.randrange(len(neighbors))]
        counts[current] += 1
    return counts


def importance(w: dict[str, float], n: dict[str, int]) -> dict[str, float]:
    """Per-node product of PageRank weight and visit count."""
    if set(w) != set(n):
        raise KeyMismatchError("weight and visit maps must share keys")
    return {node_id: w[node_id] * n[node_id] for node_id in w}


def cosine(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    dot = math.fsum(x * y for x, y in zip(a, b))
    norm_a = math.sqrt(math.fsum(x * x for x in a))
    norm_b = math.sqrt(math.fsum(y * y for y in b))
    if norm_a == 0.0 or norm_b == 0.0:
        log.warning("cosine over zero vector; returning 0.0")
        return 0.0
    return max(-1.0, min(1.0, dot / (norm_a * norm_b)))


def semantic_similarity(query_text: str, node: KGNode, backends: BackendSet) -> float:
    """Cosine similarity of the query embedding and the node definition embedding."""
    if not query_text:
        raise ValueError("query_text must be non-empty")
    query_vec = backends.embedder.embed(query_text)
    node_vec = backends.embedder.embed(node.definition)
    return cosine(query_vec.values, node_vec.values)


def normalize_importance(importance_map: dict[str, float]) -> dict[str, float]:
    """Min-max normalization; an all-equal map degenerates to 0.5 everywhere."""
    if not importance_map:
        raise ValueError("importance map must be non-empty")
    low = min(importance_map.values())
    high = max(importance_map.values())
    if high == low:
        return {node_id: 0.5 for node_id in importance_map}
    span = high - low
    return {node_id: (value - low) / span for node_id, value in importance_map.items()}


def composite_score(
    i_norm: dict[str, float], s: dict[str, float], beta: float
) -> dict[str, float]:
    """R = I_norm + beta * S; beta = inf ranks purely by similarity."""
    if set(i_norm) != set(s):
        raise KeyMismatchError("normalized importance and similarity maps must share keys")
    if math.isinf(beta):
        return dict(s)
    return {node_id: i_norm[node_id] + beta * s[node_id] for node_id in i_norm}


@dataclass
class SelectionOutcome:
    node: KGNode
    score: NodeScore
    all_scores: list[NodeScore] = field(default_factory=list)


def select_node(
    graph: KnowledgeGraph,
    query_text: str,
    backends: BackendSet,
    config: SelectionConfig = SelectionConfig(),
) -> SelectionOutcome:
    """Score every node and return the best non-center node.

    The center duplicates the recognized topic already present in the
    context, so it never competes. Ties break toward higher similarity,
    then lexicographic id.
    """
    if len(graph.nodes) < 2:
        raise GraphTooSmallError("selection needs at least two nodes")
    w = pagerank(graph, damping=config.pagerank_damping)
    visits = random_walk_visits(graph, config)
    raw = importance(w, visits)
    normed = normalize_importance(raw)
    sims = {
        node_id: semantic_similarity(query_text, node, backends)
        for node_id, node in graph.nodes.items()
    }
    composite = composite_score(normed, sims, config.beta)
    table = [
        NodeScore(
            node_id=node_id,
            w=w[node_id],
            n=visits[node_id],
            I=raw[node_id],
            I_norm=normed[node_id],
            S=sims[node_id],
            R=composite[node_id],
        )
        for node_id in sorted(graph.nodes)
    ]
    candidates = [score for score in table if score.node_id != graph.center]
    best = sorted(candidates, key=lambda sc: (-sc.R, -sc.S, sc.node_id))[0]
    return SelectionOutcome(node=graph.nodes[best.node_id], score=best, all_scores=table)


def export_graph(graph: KnowledgeGraph, scores: list[NodeScore] | None = None) -> dict:
    """JSON-ready graph dump for the UI and debugging."""
    by_id = {score.node_id: score for score in scores} if scores else {}
    nodes = []
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        entry: dict = {
            "id": node.id,
            "title": node.title,
            "definition": node.definition,
            "url": node.url,
        }
        score = by_id.get(node_id)
        if score is not None:
            entry["score"] = {
                "w": score.w,
                "n": score.n,
                "I": score.I,
                "I_norm": score.I_norm,
                "S": score.S,
                "R": score.R,
            }
        nodes.append(entry)
    return {
        "nodes": nodes,
        "edges": [
            {"source": source, "target": target, "relation": relation}
            for source, target, relation in graph.edges
        ],
        "center": graph.center,
    }
