/**
 * Typed client for the knowledge-mapping service.
 *
 * Only the documented endpoints are used; the UI never computes scores or
 * reorders anything the server returns.
 */

export interface RankedItem {
  item_id: string;
  kind: 'publication' | 'clinical_trial' | 'entity';
  score: number;
  text_sim: number;
  graph_prox: number;
  rank: number;
  title?: string;
  canonical_name?: string;
  entity_type?: string;
}

export interface SearchResponse {
  query: string;
  entities?: RankedItem[];
  publications?: RankedItem[];
  clinical_trials?: RankedItem[];
}

export interface MapResponse {
  map_id: string;
  landmarks: string[];
  starred_docs: string[];
  dirty: boolean;
  map_fingerprint: string;
}

export interface SnapshotResponse {
  computed_at: number;
  snapshot_fingerprint: string;
  map_fingerprint: string;
  dirty: boolean;
  publications?: RankedItem[];
  clinical_trials?: RankedItem[];
}

export interface CardSection {
  name: string;
  items: RankedItem[];
}

export interface CardResponse {
  entity_id: string;
  canonical_name: string;
  entity_type: string;
  summary: string;
  dirty: boolean;
  sections: CardSection[];
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { 'Content-Type': 'application/json' } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const payload = await response.json();
        if (payload && typeof payload.detail === 'string') {
          detail = payload.detail;
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  search(query: string): Promise<SearchResponse> {
    return this.request('GET', `/search?q=${encodeURIComponent(query)}`);
  }

  createMap(): Promise<MapResponse> {
    return this.request('POST', '/maps');
  }

  getMap(mapId: string): Promise<MapResponse> {
    return this.request('GET', `/maps/${mapId}`);
  }

  addLandmark(mapId: string, entityId: string): Promise<MapResponse> {
    return this.request('POST', `/maps/${mapId}/landmarks`, { entity_id: entityId });
  }

  removeLandmark(mapId: string, entityId: string): Promise<MapResponse> {
    return this.request('DELETE', `/maps/${mapId}/landmarks`, { entity_id: entityId });
  }

  starDocument(mapId: string, docId: string): Promise<MapResponse> {
    return this.request('POST', `/maps/${mapId}/stars`, { doc_id: docId });
  }

  unstarDocument(mapId: string, docId: string): Promise<MapResponse> {
    return this.request('DELETE', `/maps/${mapId}/stars`, { doc_id: docId });
  }

  refresh(mapId: string): Promise<SnapshotResponse> {
    return this.request('POST', `/maps/${mapId}/refresh`);
  }

  results(mapId: string): Promise<SnapshotResponse> {
    return this.request('GET', `/maps/${mapId}/results`);
  }

  card(mapId: string, entityId: string): Promise<CardResponse> {
    return this.request('GET', `/maps/${mapId}/cards/${encodeURIComponent(entityId)}`);
  }
}
