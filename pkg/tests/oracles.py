"""Independent brute-force oracles the tests check the library against.

These deliberately re-derive results with different code paths (dense
matrices, exhaustive loops) and must stay independent of the modules they
verify.
"""

from __future__ import annotations

import math

import numpy as np


def dense_pagerank(
    node_ids: list[str],
    edges: list[tuple[str, str]],
    damping: float = 0.85,
    iterations: int = 5000,
) -> dict[str, float]:
    """Power iteration over a dense Google matrix with undirected edges."""
    index = {node_id: i for i, node_id in enumerate(node_ids)}
    size = len(node_ids)
    adjacency = np.zeros((size, size))
    for source, target in edges:
        adjacency[index[source], index[target]] = 1.0
        adjacency[index[target], index[source]] = 1.0
    degrees = adjacency.sum(axis=1)
    transition = np.zeros((size, size))
    for i in range(size):
        if degrees[i] > 0:
            transition[:, i] = adjacency[i] / degrees[i]
        else:
            transition[:, i] = 1.0 / size
    google = damping * transition + (1.0 - damping) / size
    vec = np.full(size, 1.0 / size)
    for _ in range(iterations):
        vec = google @ vec
    return {node_id: float(vec[index[node_id]]) for node_id in node_ids}


def cosine_oracle(a, b) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0 or nb == 0:
        return 0.0
    return dot / (na * nb)


def scoring_chain_oracle(
    w: dict[str, float],
    visits: dict[str, int],
    sims: dict[str, float],
    beta: float,
    center: str,
) -> tuple[str, dict[str, float]]:
    """Exhaustive recomputation of importance -> normalize -> composite and
    the non-center argmax with the (higher S, then id) tie rule."""
    raw = {k: w[k] * visits[k] for k in w}
    low, high = min(raw.values()), max(raw.values())
    if high == low:
        normed = {k: 0.5 for k in raw}
    else:
        normed = {k: (v - low) / (high - low) for k, v in raw.items()}
    if math.isinf(beta):
        composite = dict(sims)
    else:
        composite = {k: normed[k] + beta * sims[k] for k in normed}
    best = None
    for node_id in sorted(composite):
        if node_id == center:
            continue
        if best is None:
            best = node_id
            continue
        if composite[node_id] > composite[best] or (
            composite[node_id] == composite[best] and sims[node_id] > sims[best]
        ):
            best = node_id
    return best, composite


def filter_pages_oracle(pages, title_needle=None, body_needles=()) -> set[str]:
    """Brute-force constraint filter; returns matching titles."""
    out = set()
    for page in pages:
        if title_needle is not None and title_needle.lower() not in page.title.lower():
            continue
        if any(needle.lower() not in page.body.lower() for needle in body_needles):
            continue
        out.add(page.title)
    return out


def mi_oracle(pairs: list[tuple[list[str], list[str]]], smoothing: float = 1.0) -> float:
    """Direct smoothed-joint MI in bits, full-table enumeration."""
    joint: dict[tuple[str, str], float] = {}
    for xs, ys in pairs:
        for x in xs:
            for y in ys:
                joint[(x, y)] = joint.get((x, y), 0.0) + 1.0
    x_terms = sorted({x for x, _ in joint})
    y_terms = sorted({y for _, y in joint})
    total = sum(joint.values()) + smoothing * len(x_terms) * len(y_terms)
    px = {
        x: (sum(joint.get((x, y), 0.0) for y in y_terms) + smoothing * len(y_terms)) / total
        for x in x_terms
    }
    py = {
        y: (sum(joint.get((x, y), 0.0) for x in x_terms) + smoothing * len(x_terms)) / total
        for y in y_terms
    }
    mi = 0.0
    for x in x_terms:
        for y in y_terms:
            p = (joint.get((x, y), 0.0) + smoothing) / total
            mi += p * math.log2(p / (px[x] * py[y]))
    return mi
