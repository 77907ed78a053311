// @vitest-environment happy-dom
// Full App drive against the live service: boots the real UI code in a DOM,
// loads the bundle, walks through all four views, and builds a story by
// selecting nodes. Skipped unless RUN_E2E=1.
import { type ChildProcess, spawn } from 'node:child_process';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { App } from '../src/main.js';

const RUN = process.env.RUN_E2E === '1';
const PORT = 8919;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let app: App;
let root: HTMLElement;

async function waitForServer(timeoutMs = 30000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${BASE}/api/insights`);
      if (res.ok) return;
    } catch {
      // retry
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error('server did not come up');
}

describe.runIf(RUN)('App end-to-end', () => {
  beforeAll(async () => {
    server = spawn(
      'python3',
      ['-m', 'insightloom.cli', 'serve', '--spec', process.env.SPEC_PATH!, '--stub', '--port', String(PORT)],
      { stdio: 'ignore' },
    );
    await waitForServer();
    root = document.createElement('div');
    root.id = 'app';
    document.body.appendChild(root);
    app = new App(new ApiClient(BASE), root);
    await app.load();
  }, 40000);

  afterAll(() => {
    server?.kill('SIGTERM');
  });

  it('renders all four views from the fixture bundle', async () => {
    expect(root.querySelector('.error-banner')).toBeNull();
    expect(root.querySelectorAll('.panel-card').length).toBe(5);

    await app.setViewMode('network');
    const insights = await new ApiClient(BASE).insights();
    expect(root.querySelectorAll('.insight-node').length).toBe(insights.length);

    await app.setViewMode('clusters');
    expect(root.querySelectorAll('.cluster-cell').length).toBeGreaterThan(0);

    await app.setViewMode('matrix');
    expect(root.querySelectorAll('.matrix-cell').length).toBe(insights.length ** 2);
  });

  it('selecting three nodes builds the server-verified story paragraph', async () => {
    const api = new ApiClient(BASE);
    const texts = new Map((await api.insights()).map((i) => [i.id, i.text]));
    const picks = ['LC--DE', 'BCW-SK', 'MCS1SP'];
    for (const id of picks) {
      await app.selectInsight(id);
    }
    const expected = picks.map((id) => texts.get(id)!).join('. ') + '.';
    expect(app.getStory()).toBe(expected);
    const paragraph = root.querySelector('.story-paragraph')!;
    expect(paragraph.textContent).toBe(expected);
    expect(root.querySelectorAll('.story-card').length).toBe(3);

    // duplicate selection is a no-op
    await app.selectInsight('LC--DE');
    expect(app.getStory()).toBe(expected);
    expect(app.store.getState().selectedIds).toEqual(picks);

    // view switches never mutate the selection
    await app.setViewMode('dashboard');
    expect(app.store.getState().selectedIds).toEqual(picks);
  });

  it('deselect removes the sentence and keeps the rest in order', async () => {
    const api = new ApiClient(BASE);
    const texts = new Map((await api.insights()).map((i) => [i.id, i.text]));
    await app.deselectInsight('BCW-SK');
    const expected = [texts.get('LC--DE'), texts.get('MCS1SP')].join('. ') + '.';
    expect(app.getStory()).toBe(expected);
    expect(root.querySelectorAll('.story-card').length).toBe(2);
  });

  it('cluster view with panel keys mirrors the fixture layout', async () => {
    await app.setAxisKeys('row', ['SamePanelRow']);
    await app.setAxisKeys('col', ['SamePanelCol']);
    await app.setViewMode('clusters');
    const cells = [...root.querySelectorAll('.cluster-cell')] as HTMLElement[];
    const occupied = new Set(
      cells.filter((c) => c.querySelector('.node-chip')).map((c) => `${c.dataset.row},${c.dataset.col}`),
    );
    expect(occupied).toEqual(new Set(['0,0', '0,1', '0,2', '1,0', '1,1']));
  });

  it('rejects a third axis key with an inline message', async () => {
    await app.setAxisKeys('row', ['SamePanelRow', 'SamePanelCol', 'SharedMetric']);
    expect(root.querySelector('.error-banner')?.textContent).toMatch(/two link kinds/);
    await app.setAxisKeys('row', ['SamePanelRow']);
    expect(root.querySelector('.error-banner')).toBeNull();
  });

  it('disabling every link kind empties the matrix', async () => {
    app.store.setKinds([]);
    await app.setViewMode('matrix');
    const counts = [...root.querySelectorAll('.matrix-cell')].map(
      (c) => (c as HTMLElement).dataset.count,
    );
    expect(counts.length).toBeGreaterThan(0);
    expect(counts.every((c) => c === '0')).toBe(true);
  });
});
