/**
 * Controller: wires user gestures to the API and the store.
 *
 * Mutations are serialized through a promise chain so at most one map
 * mutation is in flight, matching the server's single-writer contract.
 * Errors never wipe the view: network failures show a toast and leave the
 * previous state, and a 422 marks the item as unknown.
 */

import { ApiClient, ApiError } from './api.js';
import type { RankedItem } from './api.js';
import { Store } from './store.js';
import { render } from './render.js';
import type { Handlers } from './render.js';

export class App {
  private mutationChain: Promise<void> = Promise.resolve();
  private autoRefreshed = false;

  constructor(
    private readonly api: ApiClient,
    readonly store: Store,
    private readonly root: HTMLElement,
  ) {
    store.subscribe((state) => render(root, state, this.handlers()));
  }

  handlers(): Handlers {
    return {
      onSearch: (query) => void this.searchAndRender(query),
      onToggleStar: (item) => void this.toggleStar(item),
      onRefresh: () => void this.refreshAndRender(),
      onOpenCard: (entityId) => void this.openCard(entityId),
      onRemoveMapEntry: (itemId, kind) => void this.removeMapEntry(itemId, kind),
    };
  }

  async init(): Promise<void> {
    const map = await this.api.createMap();
    this.store.update({ mapId: map.map_id });
    this.store.applyMapState(map);
  }

  private mapId(): string {
    const id = this.store.get().mapId;
    if (!id) {
      throw new Error('no active map');
    }
    return id;
  }

  private toast(message: string): void {
    this.store.update({ toast: message });
  }

  /** Serialize map mutations; failures surface as a toast, old view kept. */
  private enqueue(action: () => Promise<void>): Promise<void> {
    this.mutationChain = this.mutationChain.then(action).catch((error) => {
      if (error instanceof ApiError) {
        this.toast(`request failed (${error.status}): ${error.message}`);
      } else {
        this.toast('service unreachable');
      }
    });
    return this.mutationChain;
  }

  async searchAndRender(query: string): Promise<void> {
    if (!query.trim()) {
      this.store.update({ validation: 'Enter a search term first.', query });
      return;
    }
    try {
      const results = await this.api.search(query);
      this.store.update({ query, validation: null, toast: null, searchResults: results });
    } catch {
      this.toast('service unreachable');
    }
  }

  async toggleStar(item: RankedItem): Promise<void> {
    const mapId = this.mapId();
    const member = this.store.isMember(item.item_id);
    return this.enqueue(async () => {
      try {
        const body = item.kind === 'entity'
          ? (member
            ? await this.api.removeLandmark(mapId, item.item_id)
            : await this.api.addLandmark(mapId, item.item_id))
          : (member
            ? await this.api.unstarDocument(mapId, item.item_id)
            : await this.api.starDocument(mapId, item.item_id));
        this.store.update({ toast: null });
        this.store.applyMapState(body);
      } catch (error) {
        if (error instanceof ApiError && error.status === 422) {
          this.store.update({
            unknownItems: [...this.store.get().unknownItems, item.item_id],
          });
          return;
        }
        throw error;
      }
    });
  }

  async removeMapEntry(itemId: string, kind: 'landmark' | 'star'): Promise<void> {
    const mapId = this.mapId();
    return this.enqueue(async () => {
      const body = kind === 'landmark'
        ? await this.api.removeLandmark(mapId, itemId)
        : await this.api.unstarDocument(mapId, itemId);
      this.store.applyMapState(body);
    });
  }

  async refreshAndRender(): Promise<void> {
    const mapId = this.mapId();
    return this.enqueue(async () => {
      const snapshot = await this.api.refresh(mapId);
      this.store.update({ snapshot, dirty: snapshot.dirty, toast: null });
    });
  }

  /** Load the last snapshot; a 409 (nothing computed yet) triggers one
   * automatic refresh. */
  async loadResults(): Promise<void> {
    try {
      const snapshot = await this.api.results(this.mapId());
      this.store.update({ snapshot, dirty: snapshot.dirty });
    } catch (error) {
      if (error instanceof ApiError && error.status === 409 && !this.autoRefreshed) {
        this.autoRefreshed = true;
        await this.refreshAndRender();
        return;
      }
      if (error instanceof ApiError) {
        this.toast(`request failed (${error.status}): ${error.message}`);
      } else {
        this.toast('service unreachable');
      }
    }
  }

  async openCard(entityId: string): Promise<void> {
    const open = this.store.get().openCards;
    if (open.some((card) => card.entity_id === entityId)) {
      this.store.update({ focusedCard: entityId });
      return;
    }
    try {
      const card = await this.api.card(this.mapId(), entityId);
      this.store.update({
        openCards: [...this.store.get().openCards, card],
        focusedCard: entityId,
        toast: null,
      });
    } catch (error) {
      if (error instanceof ApiError) {
        this.toast(`request failed (${error.status}): ${error.message}`);
      } else {
        this.toast('service unreachable');
      }
    }
  }
}

export async function boot(root: HTMLElement, baseUrl: string): Promise<App> {
  const app = new App(new ApiClient(baseUrl), new Store(), root);
  await app.init();
  return app;
}
