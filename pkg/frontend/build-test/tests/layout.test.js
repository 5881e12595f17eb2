import assert from "node:assert/strict";
import { test } from "node:test";
import { layoutGraph } from "../src/layout.js";
function node(id, overrides = {}) {
    return {
        id,
        title: id.toUpperCase(),
        definition: `def ${id}`,
        R: 0.5,
        I_norm: 0.5,
        S: 0.0,
        selected: false,
        center: false,
        ...overrides,
    };
}
function starGraph() {
    const ids = ["hub", "a", "b", "c", "d"];
    return {
        nodes: ids.map((id) => node(id, { center: id === "hub", selected: id === "a" })),
        edges: ids.slice(1).map((id) => ({ source: "hub", target: id, relation: "rel" })),
    };
}
test("layout is deterministic for the same graph", () => {
    const first = layoutGraph(starGraph(), 400, 300);
    const second = layoutGraph(starGraph(), 400, 300);
    assert.deepEqual([...first.entries()], [...second.entries()]);
});
test("positions are seeded by node id, not array order", () => {
    const graph = starGraph();
    const reversed = {
        nodes: [...graph.nodes].reverse(),
        edges: graph.edges,
    };
    const original = layoutGraph(graph, 400, 300);
    const permuted = layoutGraph(reversed, 400, 300);
    for (const [id, point] of original) {
        const other = permuted.get(id);
        assert.ok(Math.abs(point.x - other.x) < 1e-6, `${id} x stable under reordering`);
        assert.ok(Math.abs(point.y - other.y) < 1e-6, `${id} y stable under reordering`);
    }
});
test("every node lands inside the viewport with distinct positions", () => {
    const positions = layoutGraph(starGraph(), 400, 300);
    const seen = new Set();
    for (const [, point] of positions) {
        assert.ok(point.x >= 0 && point.x <= 400);
        assert.ok(point.y >= 0 && point.y <= 300);
        seen.add(`${point.x.toFixed(3)}:${point.y.toFixed(3)}`);
    }
    assert.equal(seen.size, positions.size);
});
test("changing the selected flag does not move any node", () => {
    const graph = starGraph();
    const reselected = {
        nodes: graph.nodes.map((n) => ({ ...n, selected: n.id === "d" })),
        edges: graph.edges,
    };
    assert.deepEqual([...layoutGraph(graph, 400, 300).entries()], [...layoutGraph(reselected, 400, 300).entries()]);
});
