/** Typed client for the insightloom HTTP JSON API. */

export interface PanelDto {
  panelId: string;
  chartType: 'Bar' | 'Donut' | 'Line' | 'MultiLine' | 'Table';
  row: number;
  col: number;
  tableId: string;
  title: string;
  sort?: string;
}

export interface ColumnDto {
  name: string;
  role: 'Dimension' | 'Metric' | 'Time';
}

export interface TableDto {
  columns: ColumnDto[];
  rows: Array<Array<string | number>>;
}

export interface DashboardDto {
  id: string;
  title: string;
  panels: PanelDto[];
  tables: Record<string, TableDto>;
}

export interface InsightDto {
  id: string;
  panelId: string;
  type: string;
  comparison: string;
  chartCategory: string;
  text: string;
  metrics: string[];
  dimensions: string[];
  values: string[];
  dates: Array<string | [string, string]>;
  numbers: Array<[string, number]>;
  percentage: number | null;
  tableColumn: number | null;
  segment: { column: string; value: string } | null;
}

export interface LinkDto {
  a: string;
  b: string;
  kind: string;
  category: string;
  key: string;
}

export interface ScoreDto {
  layoutScore: number;
  valueScore: number;
  priority: number;
}

export interface GatekeeperNodeDto {
  id: string;
  members: string[];
  degree: number;
}

export interface NetworkDto {
  nodes: InsightDto[];
  links: LinkDto[];
  scores: Record<string, ScoreDto>;
  gatekeepers?: {
    insightNodes: string[];
    gatekeeperNodes: GatekeeperNodeDto[];
    edges: Array<{ insight: string; gatekeeper: string }>;
    remainingLinks: LinkDto[];
  };
}

export interface MatrixDto {
  order: string[];
  counts: number[][];
}

export interface ClusterCellDto {
  row: string;
  col: string;
  ids: string[];
}

export interface ClustersDto {
  rowKeys: string[];
  colKeys: string[];
  cells: ClusterCellDto[];
}

export interface SelectionDto {
  scoreOrder: string[];
  readingOrder: string[];
}

export interface StoryComponentDto {
  insightId: string;
  title: string;
  text: string;
  chartSpec: ChartSpecDto;
}

export interface ChartSpecDto {
  title?: string;
  mark: { type: 'bar' | 'line' | 'arc'; point?: boolean };
  data: { values: ChartRowDto[] };
  encoding: Record<string, unknown>;
}

export interface ChartRowDto {
  x: string;
  y: number;
  series: string;
  highlight: boolean;
}

export interface SessionStateDto {
  sessionId: string;
  selected: string[];
  story: string;
  component?: StoryComponentDto;
}

async function getJson<T>(url: string): Promise<T> {
  const res = await fetch(url);
  if (!res.ok) throw new Error(`GET ${url} -> ${res.status}`);
  return (await res.json()) as T;
}

export class ApiClient {
  constructor(readonly base: string = '') {}

  dashboard(): Promise<DashboardDto> {
    return getJson(`${this.base}/api/dashboard`);
  }

  insights(): Promise<InsightDto[]> {
    return getJson(`${this.base}/api/insights`);
  }

  network(kinds?: string[], gatekeeperCategories?: string[]): Promise<NetworkDto> {
    const params = new URLSearchParams();
    if (kinds !== undefined) params.set('kinds', kinds.join(','));
    if (gatekeeperCategories && gatekeeperCategories.length > 0) {
      params.set('gatekeepers', gatekeeperCategories.join(','));
    }
    const qs = params.toString();
    return getJson(`${this.base}/api/network${qs ? `?${qs}` : ''}`);
  }

  matrix(kinds?: string[]): Promise<MatrixDto> {
    const qs = kinds === undefined ? '' : `?kinds=${kinds.join(',')}`;
    return getJson(`${this.base}/api/matrix${qs}`);
  }

  clusters(rowKeys: string[], colKeys: string[]): Promise<ClustersDto> {
    const params = new URLSearchParams({ row: rowKeys.join(','), col: colKeys.join(',') });
    return getJson(`${this.base}/api/clusters?${params}`);
  }

  scores(): Promise<Record<string, ScoreDto>> {
    return getJson(`${this.base}/api/scores`);
  }

  selection(): Promise<SelectionDto> {
    return getJson(`${this.base}/api/selection`);
  }

  async createSession(): Promise<SessionStateDto> {
    const res = await fetch(`${this.base}/api/sessions`, { method: 'POST' });
    if (!res.ok) throw new Error(`POST sessions -> ${res.status}`);
    return (await res.json()) as SessionStateDto;
  }

  async select(sessionId: string, insightId: string): Promise<SessionStateDto> {
    const res = await fetch(`${this.base}/api/sessions/${sessionId}/select`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ insightId }),
    });
    if (!res.ok) throw new Error(`select ${insightId} -> ${res.status}`);
    return (await res.json()) as SessionStateDto;
  }

  async deselect(sessionId: string, insightId: string): Promise<SessionStateDto> {
    const res = await fetch(`${this.base}/api/sessions/${sessionId}/select/${insightId}`, {
      method: 'DELETE',
    });
    if (!res.ok) throw new Error(`deselect ${insightId} -> ${res.status}`);
    return (await res.json()) as SessionStateDto;
  }

  story(insightId: string): Promise<StoryComponentDto> {
    return getJson(`${this.base}/api/story/${insightId}`);
  }
}
