/**
 * Node-link DAG view.
 *
 * Nodes are layered by topological depth: a node's layer is the longest
 * directed path reaching it, so every directed edge points at least one
 * layer to the right. Within a layer nodes sit in index order, which makes
 * the layout a pure function of the adjacency matrix. Symmetric 1-pairs
 * (undirected CPDAG edges) are drawn once, without an arrowhead, and do not
 * influence depth.
 */

const SVG_NS = "http://www.w3.org/2000/svg";
const LAYER_GAP = 150;
const ROW_GAP = 80;
const MARGIN = 60;
const NODE_R = 17;

/** Longest-path depth per node over the strictly directed part of B. */
export function layerByDepth(B: number[][]): number[] {
  const d = B.length;
  const directed = (i: number, j: number) => B[i][j] !== 0 && B[j][i] === 0;
  const depth = new Array(d).fill(0);
  const indeg = new Array(d).fill(0);
  for (let i = 0; i < d; i++) {
    for (let j = 0; j < d; j++) {
      if (directed(i, j)) indeg[j] += 1;
    }
  }
  // Kahn order, smallest ready index first, keeps the result deterministic
  const ready: number[] = [];
  for (let i = 0; i < d; i++) {
    if (indeg[i] === 0) ready.push(i);
  }
  let seen = 0;
  while (ready.length > 0) {
    ready.sort((a, b) => a - b);
    const i = ready.shift() as number;
    seen += 1;
    for (let j = 0; j < d; j++) {
      if (!directed(i, j)) continue;
      if (depth[i] + 1 > depth[j]) depth[j] = depth[i] + 1;
      indeg[j] -= 1;
      if (indeg[j] === 0) ready.push(j);
    }
  }
  if (seen < d) {
    throw new Error("directed part of the graph contains a cycle");
  }
  return depth;
}

function positions(depth: number[]): { x: number; y: number }[] {
  const rows = new Map<number, number>();
  return depth.map((layer) => {
    const row = rows.get(layer) ?? 0;
    rows.set(layer, row + 1);
    return { x: MARGIN + layer * LAYER_GAP, y: MARGIN + row * ROW_GAP };
  });
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

/** Trim an edge segment so it starts and ends at the node circles. */
function trimmed(a: { x: number; y: number }, b: { x: number; y: number }) {
  const dx = b.x - a.x;
  const dy = b.y - a.y;
  const len = Math.hypot(dx, dy) || 1;
  const off = NODE_R + 2;
  return {
    x1: a.x + (dx / len) * off,
    y1: a.y + (dy / len) * off,
    x2: b.x - (dx / len) * off,
    y2: b.y - (dy / len) * off,
  };
}

/**
 * Render the graph as layered SVG. weights, when given, feed the hover
 * tooltip on each edge; otherwise the tooltip names the edge alone.
 */
export function renderDag(B: number[][], weights?: number[][] | null): SVGSVGElement {
  const d = B.length;
  const depth = layerByDepth(B);
  const pos = positions(depth);
  const width = MARGIN * 2 + Math.max(0, ...depth) * LAYER_GAP;
  const counts = new Map<number, number>();
  for (const v of depth) counts.set(v, (counts.get(v) ?? 0) + 1);
  const maxRow = Math.max(1, ...counts.values());
  const height = MARGIN * 2 + (maxRow - 1) * ROW_GAP;

  const svg = svgEl("svg", {
    class: "dag-view",
    width: String(width),
    height: String(height),
    viewBox: `0 0 ${width} ${height}`,
  });
  const defs = svgEl("defs", {});
  const marker = svgEl("marker", {
    id: "dag-arrow",
    viewBox: "0 0 10 10",
    refX: "9",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.appendChild(svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z", class: "dag-arrowhead" }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  for (let i = 0; i < d; i++) {
    for (let j = 0; j < d; j++) {
      if (B[i][j] === 0) continue;
      const undirected = B[j][i] !== 0;
      if (undirected && j < i) continue; // symmetric pair already drawn
      const seg = trimmed(pos[i], pos[j]);
      const line = svgEl("line", {
        class: undirected ? "dag-edge dag-edge-undirected" : "dag-edge",
        x1: String(seg.x1),
        y1: String(seg.y1),
        x2: String(seg.x2),
        y2: String(seg.y2),
      });
      if (!undirected) line.setAttribute("marker-end", "url(#dag-arrow)");
      const tip = svgEl("title", {});
      const arrow = undirected ? "↔" : "→";
      const w = weights ? weights[i][j] : null;
      tip.textContent =
        w === null ? `x${i} ${arrow} x${j}` : `x${i} ${arrow} x${j} (${w.toFixed(3)})`;
      line.appendChild(tip);
      svg.appendChild(line);
    }
  }
  for (let i = 0; i < d; i++) {
    const group = svgEl("g", { class: "dag-node", "data-node": String(i) });
    group.appendChild(
      svgEl("circle", { cx: String(pos[i].x), cy: String(pos[i].y), r: String(NODE_R) }),
    );
    const label = svgEl("text", {
      x: String(pos[i].x),
      y: String(pos[i].y + 4),
      "text-anchor": "middle",
    });
    label.textContent = `x${i}`;
    group.appendChild(label);
    svg.appendChild(group);
  }
  return svg;
}
