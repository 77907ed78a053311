/** Network view: insight nodes, aggregated link strokes, gatekeeper hubs.
 *
 * Two layouts: a custom grid layout anchoring each panel at its dashboard
 * cell with the panel's insights placed radially around it, and a small
 * deterministic force simulation.
 */

import type { DashboardDto, NetworkDto } from '../api.js';
import { glyphStyles } from '../glyphs.js';

const SVG_NS = 'http://www.w3.org/2000/svg';
const WIDTH = 900;
const HEIGHT = 560;

interface Point {
  x: number;
  y: number;
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, String(v));
  return el;
}

export function gridLayout(network: NetworkDto, dashboard: DashboardDto): Map<string, Point> {
  const rows = Math.max(...dashboard.panels.map((p) => p.row)) + 1;
  const cols = Math.max(...dashboard.panels.map((p) => p.col)) + 1;
  const anchors = new Map<string, Point>();
  for (const panel of dashboard.panels) {
    anchors.set(panel.panelId, {
      x: ((panel.col + 0.5) / cols) * WIDTH,
      y: ((panel.row + 0.5) / rows) * HEIGHT,
    });
  }
  const byPanel = new Map<string, string[]>();
  for (const node of network.nodes) {
    const list = byPanel.get(node.panelId) ?? [];
    list.push(node.id);
    byPanel.set(node.panelId, list);
  }
  const points = new Map<string, Point>();
  for (const [panelId, ids] of byPanel) {
    const anchor = anchors.get(panelId) ?? { x: WIDTH / 2, y: HEIGHT / 2 };
    const radius = Math.min(WIDTH / cols, HEIGHT / rows) * 0.33;
    ids.forEach((id, ix) => {
      const angle = (ix / ids.length) * Math.PI * 2 - Math.PI / 2;
      points.set(id, {
        x: anchor.x + radius * Math.cos(angle),
        y: anchor.y + radius * Math.sin(angle),
      });
    });
  }
  return points;
}

/** Deterministic force layout: seeded ring start, fixed iteration count. */
export function forceLayout(
  ids: string[],
  edges: Array<[string, string]>,
  iterations = 120,
): Map<string, Point> {
  const points = new Map<string, Point>();
  ids.forEach((id, ix) => {
    const angle = (ix / Math.max(ids.length, 1)) * Math.PI * 2;
    points.set(id, {
      x: WIDTH / 2 + WIDTH * 0.32 * Math.cos(angle),
      y: HEIGHT / 2 + HEIGHT * 0.32 * Math.sin(angle),
    });
  });
  const index = new Map(ids.map((id, ix) => [id, ix] as const));
  const fx = new Float64Array(ids.length);
  const fy = new Float64Array(ids.length);
  for (let it = 0; it < iterations; it += 1) {
    fx.fill(0);
    fy.fill(0);
    const k = 42;
    for (let i = 0; i < ids.length; i += 1) {
      const pi = points.get(ids[i])!;
      for (let j = i + 1; j < ids.length; j += 1) {
        const pj = points.get(ids[j])!;
        let dx = pi.x - pj.x;
        let dy = pi.y - pj.y;
        const d2 = dx * dx + dy * dy || 0.01;
        const rep = (k * k) / d2;
        dx *= rep;
        dy *= rep;
        fx[i] += dx;
        fy[i] += dy;
        fx[j] -= dx;
        fy[j] -= dy;
      }
    }
    for (const [a, b] of edges) {
      const ia = index.get(a);
      const ib = index.get(b);
      if (ia === undefined || ib === undefined) continue;
      const pa = points.get(a)!;
      const pb = points.get(b)!;
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const dist = Math.sqrt(dx * dx + dy * dy) || 1;
      const pull = (dist - 70) * 0.004;
      fx[ia] += dx * pull;
      fy[ia] += dy * pull;
      fx[ib] -= dx * pull;
      fy[ib] -= dy * pull;
    }
    const damp = 0.08 * (1 - it / iterations) + 0.01;
    ids.forEach((id, ix) => {
      const p = points.get(id)!;
      p.x += fx[ix] * damp + (WIDTH / 2 - p.x) * 0.002;
      p.y += fy[ix] * damp + (HEIGHT / 2 - p.y) * 0.002;
      p.x = Math.max(16, Math.min(WIDTH - 16, p.x));
      p.y = Math.max(16, Math.min(HEIGHT - 16, p.y));
    });
  }
  return points;
}

export interface NetworkCallbacks {
  onSelect?: (insightId: string) => void;
  onHover?: (insightId: string | null) => void;
}

export function renderNetwork(
  network: NetworkDto,
  dashboard: DashboardDto,
  options: { force: boolean; selected: string[]; hovered: string | null },
  callbacks: NetworkCallbacks = {},
): HTMLElement {
  const root = document.createElement('div');
  root.className = 'network-view';
  const svg = svgEl('svg', {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: 'network-svg',
    width: '100%',
  });
  root.appendChild(svg);

  const gatekeepers = network.gatekeepers;
  const pairLinks = gatekeepers ? gatekeepers.remainingLinks : network.links;

  // aggregate parallel links into one stroke, weight = link count
  const weights = new Map<string, number>();
  for (const link of pairLinks) {
    if (link.kind === 'PriorityChainSuccessor') continue;
    const key = `${link.a}|${link.b}`;
    weights.set(key, (weights.get(key) ?? 0) + 1);
  }

  const gateIds = gatekeepers ? gatekeepers.gatekeeperNodes.map((g) => g.id) : [];
  const allIds = [...network.nodes.map((n) => n.id), ...gateIds];
  const edges: Array<[string, string]> = [...weights.keys()].map((k) => {
    const [a, b] = k.split('|');
    return [a, b] as [string, string];
  });
  if (gatekeepers) {
    for (const edge of gatekeepers.edges) edges.push([edge.insight, edge.gatekeeper]);
  }

  let points: Map<string, Point>;
  if (options.force) {
    points = forceLayout(allIds, edges);
  } else {
    points = gridLayout(network, dashboard);
    // place gatekeeper hubs at the centroid of their members
    if (gatekeepers) {
      for (const gate of gatekeepers.gatekeeperNodes) {
        let sx = 0;
        let sy = 0;
        for (const member of gate.members) {
          const p = points.get(member) ?? { x: WIDTH / 2, y: HEIGHT / 2 };
          sx += p.x;
          sy += p.y;
        }
        points.set(gate.id, { x: sx / gate.members.length, y: sy / gate.members.length });
      }
    }
  }

  const edgesGroup = svgEl('g', { class: 'edges' });
  svg.appendChild(edgesGroup);
  for (const [key, weight] of weights) {
    const [a, b] = key.split('|');
    const pa = points.get(a);
    const pb = points.get(b);
    if (!pa || !pb) continue;
    edgesGroup.appendChild(
      svgEl('line', {
        x1: pa.x, y1: pa.y, x2: pb.x, y2: pb.y,
        stroke: '#9aa4b2',
        'stroke-opacity': 0.3,
        'stroke-width': Math.min(0.4 + weight * 0.35, 5),
        'data-weight': weight,
      }),
    );
  }
  if (gatekeepers) {
    for (const edge of gatekeepers.edges) {
      const pa = points.get(edge.insight);
      const pb = points.get(edge.gatekeeper);
      if (!pa || !pb) continue;
      edgesGroup.appendChild(
        svgEl('line', {
          x1: pa.x, y1: pa.y, x2: pb.x, y2: pb.y,
          stroke: '#c08552',
          'stroke-opacity': 0.45,
          'stroke-width': 1,
          'data-gatekeeper-edge': 'true',
        }),
      );
    }
  }

  const styles = glyphStyles(network.nodes, network.scores);
  const nodesGroup = svgEl('g', { class: 'nodes' });
  svg.appendChild(nodesGroup);

  if (gatekeepers) {
    for (const gate of gatekeepers.gatekeeperNodes) {
      const p = points.get(gate.id)!;
      const g = svgEl('g', { class: 'gatekeeper-node', 'data-gatekeeper': gate.id });
      g.appendChild(svgEl('rect', {
        x: p.x - 9, y: p.y - 9, width: 18, height: 18, rx: 3,
        fill: '#7a5c3e',
      }));
      const title = svgEl('title');
      title.textContent = `${gate.id} (degree ${gate.degree})`;
      g.appendChild(title);
      nodesGroup.appendChild(g);
    }
  }

  for (const node of network.nodes) {
    const p = points.get(node.id)!;
    const style = styles.get(node.id)!;
    const selected = options.selected.includes(node.id);
    const hovered = options.hovered === node.id;
    const g = svgEl('g', { class: 'insight-node', 'data-insight': node.id });
    g.appendChild(svgEl('circle', {
      cx: p.x, cy: p.y, r: hovered ? 13 : 11,
      fill: style.fill,
      stroke: selected ? '#111' : '#fff',
      'stroke-width': selected ? 2.5 : 1,
    }));
    const label = svgEl('text', {
      x: p.x, y: p.y + 3.5,
      'text-anchor': 'middle',
      'font-size': 9,
      'font-weight': 600,
      fill: '#fff',
    });
    label.textContent = style.label;
    g.appendChild(label);
    const title = svgEl('title');
    title.textContent = `${node.id}: ${node.text}`;
    g.appendChild(title);
    g.addEventListener('click', () => callbacks.onSelect?.(node.id));
    g.addEventListener('mouseenter', () => callbacks.onHover?.(node.id));
    g.addEventListener('mouseleave', () => callbacks.onHover?.(null));
    nodesGroup.appendChild(g);
  }
  return root;
}
