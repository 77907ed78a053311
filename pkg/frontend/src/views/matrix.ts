/** Link-matrix heatmap: insight IDs on both axes, cells encode link counts. */

import type { MatrixDto } from '../api.js';

export interface MatrixCallbacks {
  onHover?: (insightId: string | null) => void;
}

export function renderMatrix(
  matrix: MatrixDto,
  hovered: string | null,
  callbacks: MatrixCallbacks = {},
): HTMLElement {
  const root = document.createElement('div');
  root.className = 'matrix-view';
  const max = Math.max(1, ...matrix.counts.flat());

  const table = document.createElement('table');
  table.className = 'matrix-grid';
  const header = document.createElement('tr');
  header.appendChild(document.createElement('th'));
  for (const id of matrix.order) {
    const th = document.createElement('th');
    th.className = 'matrix-col-label';
    th.dataset.insight = id;
    const span = document.createElement('span');
    span.textContent = id;
    th.appendChild(span);
    header.appendChild(th);
  }
  table.appendChild(header);

  matrix.order.forEach((rowId, i) => {
    const tr = document.createElement('tr');
    const th = document.createElement('th');
    th.textContent = rowId;
    th.dataset.insight = rowId;
    if (hovered === rowId) th.classList.add('hovered');
    th.addEventListener('mouseenter', () => callbacks.onHover?.(rowId));
    th.addEventListener('mouseleave', () => callbacks.onHover?.(null));
    tr.appendChild(th);
    matrix.order.forEach((colId, j) => {
      const td = document.createElement('td');
      const count = matrix.counts[i][j];
      td.className = 'matrix-cell';
      td.dataset.a = rowId;
      td.dataset.b = colId;
      td.dataset.count = String(count);
      if (count > 0) {
        const strength = count / max;
        td.style.background = `rgba(44, 96, 160, ${0.15 + strength * 0.8})`;
      }
      td.title = `${rowId} × ${colId}: ${count}`;
      tr.appendChild(td);
    });
    table.appendChild(tr);
  });
  root.appendChild(table);
  return root;
}
