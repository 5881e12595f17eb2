/** Deterministic force layout. Initial positions are seeded from node id
 * hashes (not array order), so a node keeps its anchor across re-renders
 * and re-selection only changes highlighting, never the geometry. */
function fnv1a(text) {
    let hash = 0x811c9dc5;
    for (let i = 0; i < text.length; i++) {
        hash ^= text.charCodeAt(i);
        hash = Math.imul(hash, 0x01000193);
    }
    return hash >>> 0;
}
function mulberry32(seed) {
    let a = seed >>> 0;
    return () => {
        a = (a + 0x6d2b79f5) | 0;
        let t = Math.imul(a ^ (a >>> 15), 1 | a);
        t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    };
}
export function layoutGraph(view, width, height, iterations = 120) {
    const ids = view.nodes.map((node) => node.id);
    const positions = new Map();
    const cx = width / 2;
    const cy = height / 2;
    const radius = Math.min(width, height) * 0.35;
    for (const id of ids) {
        const rng = mulberry32(fnv1a(id));
        const angle = rng() * Math.PI * 2;
        const r = radius * (0.4 + 0.6 * rng());
        positions.set(id, { x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle) });
    }
    const neighbors = new Map();
    for (const edge of view.edges) {
        if (!neighbors.has(edge.source))
            neighbors.set(edge.source, []);
        if (!neighbors.has(edge.target))
            neighbors.set(edge.target, []);
        neighbors.get(edge.source).push(edge.target);
        neighbors.get(edge.target).push(edge.source);
    }
    const springLength = radius / 2.2;
    const repulsion = (radius * radius) / Math.max(ids.length, 1);
    for (let step = 0; step < iterations; step++) {
        const cool = 1 - step / iterations;
        const forces = new Map(ids.map((id) => [id, { x: 0, y: 0 }]));
        for (let i = 0; i < ids.length; i++) {
            for (let j = i + 1; j < ids.length; j++) {
                const a = positions.get(ids[i]);
                const b = positions.get(ids[j]);
                let dx = a.x - b.x;
                let dy = a.y - b.y;
                let dist2 = dx * dx + dy * dy;
                if (dist2 < 1e-6) {
                    // deterministic nudge for coincident points
                    dx = 0.01 * (i - j);
                    dy = 0.013 * (i + 1);
                    dist2 = dx * dx + dy * dy;
                }
                const push = repulsion / dist2;
                forces.get(ids[i]).x += dx * push;
                forces.get(ids[i]).y += dy * push;
                forces.get(ids[j]).x -= dx * push;
                forces.get(ids[j]).y -= dy * push;
            }
        }
        for (const edge of view.edges) {
            const a = positions.get(edge.source);
            const b = positions.get(edge.target);
            if (!a || !b)
                continue;
            const dx = b.x - a.x;
            const dy = b.y - a.y;
            const dist = Math.sqrt(dx * dx + dy * dy) || 1e-3;
            const pull = (dist - springLength) / dist * 0.05;
            forces.get(edge.source).x += dx * pull;
            forces.get(edge.source).y += dy * pull;
            forces.get(edge.target).x -= dx * pull;
            forces.get(edge.target).y -= dy * pull;
        }
        for (const id of ids) {
            const pos = positions.get(id);
            const force = forces.get(id);
            // weak centering keeps disconnected clusters on screen
            force.x += (cx - pos.x) * 0.01;
            force.y += (cy - pos.y) * 0.01;
            pos.x += force.x * cool;
            pos.y += force.y * cool;
            pos.x = Math.min(Math.max(pos.x, 20), width - 20);
            pos.y = Math.min(Math.max(pos.y, 20), height - 20);
        }
    }
    return positions;
}
