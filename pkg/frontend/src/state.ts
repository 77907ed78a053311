/** UI state store: view mode, link-kind filters, axis keys, selection. */

export type ViewMode = 'dashboard' | 'network' | 'clusters' | 'matrix';

export const LINK_KINDS: Record<string, string[]> = {
  TypeBased: ['SameInsightType', 'SameComparisonType', 'SameChartCategory'],
  TopicBased: ['SharedMetric', 'SharedDimension', 'SharedFilterSegment'],
  ValueBased: ['SharedDate', 'SharedPercentage', 'SharedDimensionValue'],
  MetadataBased: ['SamePanelRow', 'SamePanelCol', 'SameTableColumn', 'SameSortAttribute'],
};

export const ALL_KINDS: string[] = Object.values(LINK_KINDS).flat();

export interface UiState {
  viewMode: ViewMode;
  enabledKinds: Set<string>;
  rowKeys: string[];
  colKeys: string[];
  selectedIds: string[];
  hoveredId: string | null;
  gatekeeperCategories: string[];
  forceLayout: boolean;
  error: string | null;
}

export function initialState(): UiState {
  return {
    viewMode: 'dashboard',
    enabledKinds: new Set(ALL_KINDS),
    rowKeys: ['SamePanelRow'],
    colKeys: ['SamePanelCol'],
    selectedIds: [],
    hoveredId: null,
    gatekeeperCategories: [],
    forceLayout: false,
    error: null,
  };
}

export type Listener = (state: UiState) => void;

export class Store {
  private state: UiState = initialState();
  private listeners: Listener[] = [];

  getState(): UiState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(partial: Partial<UiState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Switching views never touches the selection. */
  setViewMode(mode: ViewMode): void {
    this.update({ viewMode: mode });
  }

  toggleKind(kind: string): void {
    const kinds = new Set(this.state.enabledKinds);
    if (kinds.has(kind)) kinds.delete(kind);
    else kinds.add(kind);
    this.update({ enabledKinds: kinds });
  }

  setKinds(kinds: string[]): void {
    this.update({ enabledKinds: new Set(kinds) });
  }

  /** Returns an error message instead of mutating when more than two keys. */
  setAxisKeys(axis: 'row' | 'col', keys: string[]): string | null {
    if (keys.length > 2) {
      return 'at most two link kinds per axis';
    }
    if (axis === 'row') this.update({ rowKeys: keys });
    else this.update({ colKeys: keys });
    return null;
  }

  /** Mirror of the server session; duplicates are a no-op. */
  applySession(selected: string[]): void {
    this.update({ selectedIds: [...selected] });
  }

  setHovered(id: string | null): void {
    this.update({ hoveredId: id });
  }

  setError(message: string | null): void {
    this.update({ error: message });
  }
}
