/** Playground shell: toolbar, view host, story panel, server session. */

import {
  ApiClient,
  type DashboardDto,
  type InsightDto,
  type MatrixDto,
  type NetworkDto,
  type ScoreDto,
  type StoryComponentDto,
} from './api.js';
import { ALL_KINDS, LINK_KINDS, Store, type UiState, type ViewMode } from './state.js';
import { renderDashboard } from './views/dashboard.js';
import { renderNetwork } from './views/network.js';
import { renderClusters } from './views/clusters.js';
import { renderMatrix } from './views/matrix.js';
import { renderStory } from './views/story.js';

export interface LoadedBundle {
  dashboard: DashboardDto;
  insights: InsightDto[];
  scores: Record<string, ScoreDto>;
}

export class App {
  readonly store = new Store();
  private bundle: LoadedBundle | null = null;
  private sessionId: string | null = null;
  private story = '';
  private components: StoryComponentDto[] = [];
  private network: NetworkDto | null = null;
  private matrix: MatrixDto | null = null;
  private clustersDto: Awaited<ReturnType<ApiClient['clusters']>> | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {
    this.store.subscribe(() => this.render());
  }

  /** Fetch everything the four views need; on failure show a banner only. */
  async load(): Promise<void> {
    try {
      const [dashboard, insights, scores] = await Promise.all([
        this.api.dashboard(),
        this.api.insights(),
        this.api.scores(),
      ]);
      const session = await this.api.createSession();
      this.bundle = { dashboard, insights, scores };
      this.sessionId = session.sessionId;
      this.story = session.story;
      await this.refreshViewData();
      this.store.update({ error: null });
    } catch (err) {
      this.bundle = null;
      this.store.setError(`failed to load bundle: ${String(err)}`);
    }
  }

  private enabledKinds(): string[] {
    return ALL_KINDS.filter((k) => this.store.getState().enabledKinds.has(k));
  }

  async refreshViewData(): Promise<void> {
    const state = this.store.getState();
    const kinds = this.enabledKinds();
    try {
      if (state.viewMode === 'network') {
        this.network = await this.api.network(kinds, state.gatekeeperCategories);
      } else if (state.viewMode === 'matrix') {
        this.matrix = await this.api.matrix(kinds);
      } else if (state.viewMode === 'clusters') {
        this.clustersDto = await this.api.clusters(state.rowKeys, state.colKeys);
      }
      this.render();
    } catch (err) {
      this.store.setError(String(err));
    }
  }

  async selectInsight(insightId: string): Promise<void> {
    if (!this.sessionId) return;
    const state = this.store.getState();
    if (state.selectedIds.includes(insightId)) {
      // duplicate selection is a no-op; flash the existing selection instead
      this.store.setHovered(insightId);
      return;
    }
    const result = await this.api.select(this.sessionId, insightId);
    this.story = result.story;
    if (result.component) this.components.push(result.component);
    this.store.applySession(result.selected);
  }

  async deselectInsight(insightId: string): Promise<void> {
    if (!this.sessionId) return;
    const result = await this.api.deselect(this.sessionId, insightId);
    this.story = result.story;
    this.components = this.components.filter((c) => c.insightId !== insightId);
    this.store.applySession(result.selected);
  }

  async setViewMode(mode: ViewMode): Promise<void> {
    this.store.setViewMode(mode);
    await this.refreshViewData();
  }

  async toggleKind(kind: string): Promise<void> {
    this.store.toggleKind(kind);
    await this.refreshViewData();
  }

  async setAxisKeys(axis: 'row' | 'col', keys: string[]): Promise<void> {
    const error = this.store.setAxisKeys(axis, keys);
    if (error) {
      this.store.setError(error);
      return;
    }
    this.store.setError(null);
    await this.refreshViewData();
  }

  async toggleGatekeepers(categories: string[]): Promise<void> {
    this.store.update({ gatekeeperCategories: categories });
    await this.refreshViewData();
  }

  async toggleForceLayout(): Promise<void> {
    this.store.update({ forceLayout: !this.store.getState().forceLayout });
    await this.refreshViewData();
  }

  getStory(): string {
    return this.story;
  }

  render(): void {
    const state = this.store.getState();
    this.root.textContent = '';

    if (state.error) {
      const banner = document.createElement('div');
      banner.className = 'error-banner';
      banner.textContent = state.error;
      this.root.appendChild(banner);
    }
    if (!this.bundle) return;

    this.root.appendChild(this.renderToolbar(state));

    const layout = document.createElement('div');
    layout.className = 'layout';
    const viewHost = document.createElement('div');
    viewHost.className = 'view-host';

    if (state.viewMode === 'dashboard') {
      viewHost.appendChild(renderDashboard(this.bundle.dashboard));
    } else if (state.viewMode === 'network' && this.network) {
      viewHost.appendChild(
        renderNetwork(
          this.network,
          this.bundle.dashboard,
          { force: state.forceLayout, selected: state.selectedIds, hovered: state.hoveredId },
          {
            onSelect: (id) => void this.selectInsight(id),
            onHover: (id) => this.store.setHovered(id),
          },
        ),
      );
    } else if (state.viewMode === 'clusters' && this.clustersDto) {
      viewHost.appendChild(
        renderClusters(this.clustersDto, this.bundle.insights, this.bundle.scores, state.hoveredId, {
          onSelect: (id) => void this.selectInsight(id),
          onHover: (id) => this.store.setHovered(id),
        }),
      );
    } else if (state.viewMode === 'matrix' && this.matrix) {
      viewHost.appendChild(
        renderMatrix(this.matrix, state.hoveredId, {
          onHover: (id) => this.store.setHovered(id),
        }),
      );
    }

    layout.appendChild(viewHost);
    layout.appendChild(
      renderStory(this.story, this.components, {
        onDeselect: (id) => void this.deselectInsight(id),
      }),
    );
    this.root.appendChild(layout);
  }

  private renderToolbar(state: UiState): HTMLElement {
    const bar = document.createElement('div');
    bar.className = 'toolbar';

    const modes: ViewMode[] = ['dashboard', 'network', 'clusters', 'matrix'];
    const tabs = document.createElement('div');
    tabs.className = 'tabs';
    for (const mode of modes) {
      const btn = document.createElement('button');
      btn.textContent = mode;
      btn.dataset.mode = mode;
      if (mode === state.viewMode) btn.classList.add('active');
      btn.addEventListener('click', () => void this.setViewMode(mode));
      tabs.appendChild(btn);
    }
    bar.appendChild(tabs);

    if (state.viewMode === 'network' || state.viewMode === 'matrix') {
      bar.appendChild(this.renderKindFilters(state));
    }
    if (state.viewMode === 'network') {
      const force = document.createElement('button');
      force.className = 'layout-toggle';
      force.textContent = state.forceLayout ? 'grid layout' : 'force layout';
      force.addEventListener('click', () => void this.toggleForceLayout());
      bar.appendChild(force);

      const gate = document.createElement('label');
      gate.className = 'gatekeeper-toggle';
      const box = document.createElement('input');
      box.type = 'checkbox';
      box.checked = state.gatekeeperCategories.length > 0;
      box.addEventListener('change', () =>
        void this.toggleGatekeepers(box.checked ? Object.keys(LINK_KINDS) : []),
      );
      gate.appendChild(box);
      gate.appendChild(document.createTextNode(' gatekeeper hubs'));
      bar.appendChild(gate);
    }
    if (state.viewMode === 'clusters') {
      bar.appendChild(this.renderAxisPicker('row', state.rowKeys));
      bar.appendChild(this.renderAxisPicker('col', state.colKeys));
    }
    return bar;
  }

  private renderKindFilters(state: UiState): HTMLElement {
    const wrap = document.createElement('div');
    wrap.className = 'kind-filters';
    for (const [category, kinds] of Object.entries(LINK_KINDS)) {
      const group = document.createElement('span');
      group.className = 'kind-group';
      group.appendChild(document.createTextNode(category.replace('Based', ' ')));
      for (const kind of kinds) {
        const label = document.createElement('label');
        const box = document.createElement('input');
        box.type = 'checkbox';
        box.dataset.kind = kind;
        box.checked = state.enabledKinds.has(kind);
        box.addEventListener('change', () => void this.toggleKind(kind));
        label.appendChild(box);
        label.appendChild(document.createTextNode(kind.replace(/^(Same|Shared)/, '')));
        group.appendChild(label);
      }
      wrap.appendChild(group);
    }
    return wrap;
  }

  private renderAxisPicker(axis: 'row' | 'col', current: string[]): HTMLElement {
    const wrap = document.createElement('span');
    wrap.className = `axis-picker axis-${axis}`;
    wrap.appendChild(document.createTextNode(`${axis}: `));
    const select = document.createElement('select');
    select.multiple = true;
    select.size = 3;
    for (const kind of ALL_KINDS) {
      const option = document.createElement('option');
      option.value = kind;
      option.textContent = kind;
      option.selected = current.includes(kind);
      select.appendChild(option);
    }
    select.addEventListener('change', () => {
      const keys = [...select.selectedOptions].map((o) => o.value);
      void this.setAxisKeys(axis, keys);
    });
    wrap.appendChild(select);
    return wrap;
  }
}

export function boot(apiBase = ''): App {
  const root = document.getElementById('app');
  if (!root) throw new Error('missing #app element');
  const app = new App(new ApiClient(apiBase), root);
  void app.load();
  return app;
}

declare global {
  interface Window {
    insightloomApp?: App;
  }
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  window.insightloomApp = boot();
}
