/** Tiny SVG renderer for the pipeline's declarative chart specs. */

import type { ChartRowDto, ChartSpecDto, DashboardDto, PanelDto } from './api.js';

const SVG_NS = 'http://www.w3.org/2000/svg';
const WIDTH = 320;
const HEIGHT = 150;
const PAD = { top: 10, right: 8, bottom: 22, left: 36 };

const SERIES_COLORS = ['#4c78a8', '#f58518', '#54a24b', '#b279a2', '#e45756', '#72b7b2'];
const HIGHLIGHT = '#d62728';

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, String(v));
  return el;
}

function groupBySeries(rows: ChartRowDto[]): Map<string, ChartRowDto[]> {
  const out = new Map<string, ChartRowDto[]>();
  for (const row of rows) {
    const list = out.get(row.series) ?? [];
    list.push(row);
    out.set(row.series, list);
  }
  return out;
}

function renderBars(svg: SVGSVGElement, rows: ChartRowDto[]): void {
  const innerW = WIDTH - PAD.left - PAD.right;
  const innerH = HEIGHT - PAD.top - PAD.bottom;
  const max = Math.max(...rows.map((r) => r.y), 1);
  const step = innerW / rows.length;
  rows.forEach((row, ix) => {
    const h = (row.y / max) * innerH;
    const rect = svgEl('rect', {
      x: PAD.left + ix * step + step * 0.12,
      y: PAD.top + innerH - h,
      width: step * 0.76,
      height: h,
      fill: row.highlight ? HIGHLIGHT : SERIES_COLORS[0],
      'data-x': row.x,
      'data-highlight': String(row.highlight),
    });
    const title = svgEl('title');
    title.textContent = `${row.x}: ${row.y}`;
    rect.appendChild(title);
    svg.appendChild(rect);
    if (rows.length <= 8) {
      const label = svgEl('text', {
        x: PAD.left + ix * step + step / 2,
        y: HEIGHT - 6,
        'text-anchor': 'middle',
        'font-size': 9,
        fill: '#555',
      });
      label.textContent = row.x.length > 9 ? `${row.x.slice(0, 8)}…` : row.x;
      svg.appendChild(label);
    }
  });
}

function renderLines(svg: SVGSVGElement, rows: ChartRowDto[]): void {
  const innerW = WIDTH - PAD.left - PAD.right;
  const innerH = HEIGHT - PAD.top - PAD.bottom;
  const bySeries = groupBySeries(rows);
  const max = Math.max(...rows.map((r) => r.y), 1);
  const min = Math.min(...rows.map((r) => r.y), 0);
  let colorIx = 0;
  for (const [name, series] of bySeries) {
    const color = SERIES_COLORS[colorIx % SERIES_COLORS.length];
    colorIx += 1;
    const n = series.length;
    const px = (ix: number) => PAD.left + (n <= 1 ? innerW / 2 : (ix / (n - 1)) * innerW);
    const py = (y: number) => PAD.top + innerH - ((y - min) / (max - min || 1)) * innerH;
    const path = series.map((r, ix) => `${ix === 0 ? 'M' : 'L'}${px(ix)},${py(r.y)}`).join(' ');
    svg.appendChild(
      svgEl('path', { d: path, fill: 'none', stroke: color, 'stroke-width': 1.6, 'data-series': name }),
    );
    series.forEach((row, ix) => {
      if (!row.highlight) return;
      const dot = svgEl('circle', {
        cx: px(ix),
        cy: py(row.y),
        r: 4,
        fill: HIGHLIGHT,
        'data-x': row.x,
        'data-highlight': 'true',
      });
      const title = svgEl('title');
      title.textContent = `${row.x}: ${row.y}`;
      dot.appendChild(title);
      svg.appendChild(dot);
    });
  }
}

function renderArcs(svg: SVGSVGElement, rows: ChartRowDto[]): void {
  const cx = WIDTH / 2;
  const cy = HEIGHT / 2;
  const radius = Math.min(WIDTH, HEIGHT) / 2 - 8;
  const total = rows.reduce((acc, r) => acc + r.y, 0) || 1;
  let angle = -Math.PI / 2;
  rows.forEach((row, ix) => {
    const span = (row.y / total) * Math.PI * 2;
    const x0 = cx + radius * Math.cos(angle);
    const y0 = cy + radius * Math.sin(angle);
    const x1 = cx + radius * Math.cos(angle + span);
    const y1 = cy + radius * Math.sin(angle + span);
    const large = span > Math.PI ? 1 : 0;
    const path = svgEl('path', {
      d: `M${cx},${cy} L${x0},${y0} A${radius},${radius} 0 ${large} 1 ${x1},${y1} Z`,
      fill: SERIES_COLORS[ix % SERIES_COLORS.length],
      opacity: row.highlight ? 1 : 0.45,
      'data-x': row.x,
      'data-highlight': String(row.highlight),
    });
    const title = svgEl('title');
    title.textContent = `${row.x}: ${row.y}`;
    path.appendChild(title);
    svg.appendChild(path);
    angle += span;
  });
}

export function renderChart(spec: ChartSpecDto): SVGSVGElement {
  const svg = svgEl('svg', {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: WIDTH,
    height: HEIGHT,
    class: 'chart',
  });
  const rows = spec.data.values;
  if (spec.mark.type === 'arc') renderArcs(svg, rows);
  else if (spec.mark.type === 'line') renderLines(svg, rows);
  else renderBars(svg, rows);
  return svg;
}

/** Build a plain (no-highlight) chart spec for a dashboard panel's table. */
export function panelChartSpec(dashboard: DashboardDto, panel: PanelDto): ChartSpecDto {
  const table = dashboard.tables[panel.tableId];
  const dims = table.columns.filter((c) => c.role === 'Dimension');
  const times = table.columns.filter((c) => c.role === 'Time');
  const metrics = table.columns.filter((c) => c.role === 'Metric');
  const colIx = (name: string) => table.columns.findIndex((c) => c.name === name);

  const rows: ChartRowDto[] = [];
  const useTime = times.length > 0 && panel.chartType !== 'Bar' && panel.chartType !== 'Donut';
  if (useTime) {
    const tIx = colIx(times[0].name);
    const mIx = colIx(metrics[0].name);
    const split = dims.length > 0 ? colIx(dims[0].name) : -1;
    for (const row of table.rows) {
      rows.push({
        x: String(row[tIx]),
        y: Number(row[mIx]),
        series: split >= 0 ? `${dims[0].name} [${row[split]}]` : metrics[0].name,
        highlight: false,
      });
    }
  } else if (dims.length >= 2) {
    // crossed table: show the first metric for the first segment value
    const segIx = colIx(dims[0].name);
    const axisIx = colIx(dims[dims.length - 1].name);
    const mIx = colIx(metrics[0].name);
    const firstSeg = table.rows[0]?.[segIx];
    for (const row of table.rows) {
      if (row[segIx] !== firstSeg) continue;
      rows.push({
        x: String(row[axisIx]),
        y: Number(row[mIx]),
        series: `${metrics[0].name} (${firstSeg})`,
        highlight: false,
      });
    }
  } else {
    const axisIx = colIx(dims[0].name);
    const mIx = colIx(metrics[0].name);
    for (const row of table.rows) {
      rows.push({
        x: String(row[axisIx]),
        y: Number(row[mIx]),
        series: metrics[0].name,
        highlight: false,
      });
    }
  }
  const mark = panel.chartType === 'Donut' ? 'arc' : panel.chartType === 'Line' || panel.chartType === 'MultiLine' ? 'line' : 'bar';
  return {
    title: panel.title,
    mark: { type: mark },
    data: { values: rows },
    encoding: {},
  };
}
