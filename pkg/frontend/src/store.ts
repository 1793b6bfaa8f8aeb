/**
 * View state for the single-page client.
 *
 * Two invariants drive the store: the staleness banner is shown exactly when
 * the server last reported dirty=true, and star toggles mirror the map
 * membership arrays from the most recent server response. Nothing in here
 * re-ranks or re-scores.
 */

import type { CardResponse, SearchResponse, SnapshotResponse } from './api.js';

export interface ViewState {
  mapId: string | null;
  query: string;
  validation: string | null;
  searchResults: SearchResponse | null;
  snapshot: SnapshotResponse | null;
  landmarks: string[];
  starredDocs: string[];
  dirty: boolean;
  openCards: CardResponse[];
  focusedCard: string | null;
  unknownItems: string[];
  toast: string | null;
}

export function initialState(): ViewState {
  return {
    mapId: null,
    query: '',
    validation: null,
    searchResults: null,
    snapshot: null,
    landmarks: [],
    starredDocs: [],
    dirty: false,
    openCards: [],
    focusedCard: null,
    unknownItems: [],
    toast: null,
  };
}

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = initialState();
  private listeners: Listener[] = [];

  get(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  /** Apply the membership + dirty flag from any map-bearing response. */
  applyMapState(body: { landmarks: string[]; starred_docs: string[]; dirty: boolean }): void {
    this.update({
      landmarks: [...body.landmarks],
      starredDocs: [...body.starred_docs],
      dirty: body.dirty,
    });
  }

  isMember(itemId: string): boolean {
    return this.state.landmarks.includes(itemId) || this.state.starredDocs.includes(itemId);
  }
}
