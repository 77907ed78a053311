/** Dashboard view: the source panels laid out on their grid. */

import type { DashboardDto } from '../api.js';
import { panelChartSpec, renderChart } from '../charts.js';

export function renderDashboard(dashboard: DashboardDto): HTMLElement {
  const root = document.createElement('div');
  root.className = 'dashboard-view';

  const maxCol = Math.max(...dashboard.panels.map((p) => p.col)) + 1;
  root.style.display = 'grid';
  root.style.gridTemplateColumns = `repeat(${maxCol}, minmax(200px, 1fr))`;
  root.style.gap = '10px';

  const ordered = [...dashboard.panels].sort((a, b) => a.row - b.row || a.col - b.col);
  for (const panel of ordered) {
    const cell = document.createElement('div');
    cell.className = 'panel-card';
    cell.dataset.panelId = panel.panelId;
    cell.style.gridRow = String(panel.row + 1);
    cell.style.gridColumn = String(panel.col + 1);
    const heading = document.createElement('h3');
    heading.textContent = `${panel.panelId} — ${panel.title}`;
    cell.appendChild(heading);
    cell.appendChild(renderChart(panelChartSpec(dashboard, panel)));
    root.appendChild(cell);
  }
  return root;
}
