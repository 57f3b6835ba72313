/** Force-directed layout and the render cap.
 *
 * Pure math: no DOM, no fetch. The canvas view steps the simulation each
 * animation frame; tests step it directly.
 */

import type { ApiNode, Triple } from "./api.js";

/** Hard ceiling on rendered nodes; larger graphs get truncated plus a banner. */
export const RENDER_CAP = 10_000;

export interface LayoutNode {
  id: number;
  label: string;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface LayoutEdge {
  edgeId: number;
  src: number;
  dst: number;
  relType: string;
}

export interface LayoutGraph {
  nodes: LayoutNode[];
  edges: LayoutEdge[];
  /** true when the source graph exceeded RENDER_CAP and was cut down */
  truncated: boolean;
}

/** Deterministic pseudo-random placement so layouts replay identically. */
function seededPosition(id: number): { x: number; y: number } {
  const a = Math.sin(id * 12.9898) * 43758.5453;
  const b = Math.sin(id * 78.233) * 24634.6345;
  return { x: (a - Math.floor(a)) * 1000, y: (b - Math.floor(b)) * 1000 };
}

/** Build a layout graph from traversal triples, enforcing the render cap. */
export function buildLayout(triples: Triple[], cap = RENDER_CAP): LayoutGraph {
  const nodes = new Map<number, ApiNode>();
  const kept: LayoutEdge[] = [];
  let truncated = false;
  for (const t of triples) {
    const incoming = [t.src, t.dst].filter((n) => !nodes.has(n.node_id));
    if (nodes.size + incoming.length > cap) {
      truncated = true;
      continue;
    }
    for (const n of incoming) nodes.set(n.node_id, n);
    kept.push({
      edgeId: t.edge.edge_id,
      src: t.edge.src,
      dst: t.edge.dst,
      relType: t.edge.rel_type,
    });
  }
  return {
    nodes: [...nodes.values()].map((n) => ({
      id: n.node_id,
      label: n.label,
      ...seededPosition(n.node_id),
      vx: 0,
      vy: 0,
    })),
    edges: kept,
    truncated,
  };
}

const REPULSION = 5000;
const SPRING = 0.02;
const SPRING_LENGTH = 80;
const CENTERING = 0.005;
const DAMPING = 0.85;

/** One simulation step: pairwise repulsion, spring edges, weak centering. */
export function step(graph: LayoutGraph): void {
  const { nodes, edges } = graph;
  const byId = new Map(nodes.map((n) => [n.id, n]));
  for (let i = 0; i < nodes.length; i++) {
    const a = nodes[i]!;
    for (let j = i + 1; j < nodes.length; j++) {
      const b = nodes[j]!;
      const dx = a.x - b.x;
      const dy = a.y - b.y;
      const d2 = Math.max(dx * dx + dy * dy, 1);
      const f = REPULSION / d2;
      const d = Math.sqrt(d2);
      a.vx += (dx / d) * f;
      a.vy += (dy / d) * f;
      b.vx -= (dx / d) * f;
      b.vy -= (dy / d) * f;
    }
  }
  for (const e of edges) {
    const a = byId.get(e.src);
    const b = byId.get(e.dst);
    if (!a || !b || a === b) continue;
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1e-6);
    const f = SPRING * (d - SPRING_LENGTH);
    a.vx += (dx / d) * f;
    a.vy += (dy / d) * f;
    b.vx -= (dx / d) * f;
    b.vy -= (dy / d) * f;
  }
  for (const n of nodes) {
    n.vx -= n.x * CENTERING;
    n.vy -= n.y * CENTERING;
    n.vx *= DAMPING;
    n.vy *= DAMPING;
    n.x += n.vx;
    n.y += n.vy;
  }
}

/** Node colour by label — one bright colour per node class. */
export const LABEL_COLORS: Record<string, string> = {
  document: "#4cc9f0",
  topic: "#f9c74f",
  databook: "#f94144",
  synthetic: "#90be6d",
};

export function colorFor(label: string): string {
  return LABEL_COLORS[label] ?? "#adb5bd";
}
