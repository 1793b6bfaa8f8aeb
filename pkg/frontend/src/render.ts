/**
 * DOM rendering. Pure functions from state to elements; user gestures are
 * forwarded through the handler callbacks. Result lists are rendered in the
 * exact order the server returned them.
 */

import type { CardResponse, RankedItem } from './api.js';
import type { ViewState } from './store.js';

export interface Handlers {
  onSearch(query: string): void;
  onToggleStar(item: RankedItem): void;
  onRefresh(): void;
  onOpenCard(entityId: string): void;
  onRemoveMapEntry(itemId: string, kind: 'landmark' | 'star'): void;
}

export function provenanceUrl(itemId: string): string | null {
  const [namespace, rest] = itemId.split(/:(.*)/s, 2);
  if (namespace === 'pmid') {
    return `https://pubmed.ncbi.nlm.nih.gov/${rest}/`;
  }
  if (namespace === 'nct') {
    return `https://clinicaltrials.gov/study/${rest}`;
  }
  return null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function starButton(item: RankedItem, starred: boolean, handlers: Handlers): HTMLButtonElement {
  const button = el('button', starred ? 'star starred' : 'star', starred ? '★' : '☆');
  button.dataset.itemId = item.item_id;
  button.setAttribute('aria-label', starred ? `remove ${item.item_id}` : `add ${item.item_id}`);
  button.addEventListener('click', () => handlers.onToggleStar(item));
  return button;
}

function resultRow(item: RankedItem, state: ViewState, handlers: Handlers): HTMLLIElement {
  const row = el('li', 'result');
  row.dataset.itemId = item.item_id;
  row.append(starButton(item, state.landmarks.includes(item.item_id)
    || state.starredDocs.includes(item.item_id), handlers));

  const label = item.kind === 'entity'
    ? `${item.canonical_name ?? item.item_id} (${item.entity_type ?? 'entity'})`
    : item.title ?? item.item_id;
  if (item.kind === 'entity') {
    const link = el('a', 'entity-name', label);
    link.href = '#';
    link.addEventListener('click', (event) => {
      event.preventDefault();
      handlers.onOpenCard(item.item_id);
    });
    row.append(link);
  } else {
    row.append(el('span', 'title', label));
  }

  const url = provenanceUrl(item.item_id);
  if (url) {
    const source = el('a', 'provenance', item.item_id);
    source.href = url;
    source.target = '_blank';
    source.rel = 'noreferrer';
    row.append(source);
  } else {
    row.append(el('span', 'provenance', item.item_id));
  }
  if (state.unknownItems.includes(item.item_id)) {
    row.append(el('span', 'unknown', 'unknown id'));
  }
  return row;
}

function resultList(name: string, items: RankedItem[] | undefined, state: ViewState,
                    handlers: Handlers): HTMLElement {
  const section = el('section', 'result-group');
  section.dataset.group = name;
  section.append(el('h3', undefined, name));
  const list = el('ul');
  for (const item of items ?? []) {
    list.append(resultRow(item, state, handlers));
  }
  section.append(list);
  return section;
}

function mapPanel(state: ViewState, handlers: Handlers): HTMLElement {
  const panel = el('aside', 'map-panel');
  panel.append(el('h2', undefined, 'Knowledge map'));
  const list = el('ul');
  for (const landmark of state.landmarks) {
    const row = el('li', 'map-entry landmark', landmark);
    const remove = el('button', 'remove', '×');
    remove.addEventListener('click', () => handlers.onRemoveMapEntry(landmark, 'landmark'));
    row.append(remove);
    list.append(row);
  }
  for (const doc of state.starredDocs) {
    const row = el('li', 'map-entry star', doc);
    const remove = el('button', 'remove', '×');
    remove.addEventListener('click', () => handlers.onRemoveMapEntry(doc, 'star'));
    row.append(remove);
    list.append(row);
  }
  panel.append(list);
  return panel;
}

function banner(handlers: Handlers): HTMLElement {
  const node = el('div', 'banner');
  node.append(el('span', undefined, 'Knowledge map changed. Refresh to update results.'));
  const refresh = el('button', 'refresh', 'Refresh');
  refresh.addEventListener('click', () => handlers.onRefresh());
  node.append(refresh);
  return node;
}

function cardColumn(card: CardResponse, state: ViewState, handlers: Handlers): HTMLElement {
  const column = el('article', 'card');
  column.dataset.entityId = card.entity_id;
  if (state.focusedCard === card.entity_id) {
    column.classList.add('focused');
  }
  column.append(el('h3', undefined, `${card.canonical_name} (${card.entity_type})`));
  if (card.summary) {
    column.append(el('p', 'summary', card.summary));
  }
  for (const section of card.sections) {
    const block = el('section', 'card-section');
    block.dataset.section = section.name;
    block.append(el('h4', undefined, section.name));
    const list = el('ul');
    for (const item of section.items) {
      list.append(resultRow(item, state, handlers));
    }
    block.append(list);
    column.append(block);
  }
  return column;
}

export function render(root: HTMLElement, state: ViewState, handlers: Handlers): void {
  root.textContent = '';

  const header = el('header');
  const form = el('form', 'search');
  const input = el('input');
  input.type = 'search';
  input.name = 'q';
  input.value = state.query;
  input.placeholder = 'Search entities, publications, trials';
  const submit = el('button', undefined, 'Search');
  submit.type = 'submit';
  form.append(input, submit);
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    handlers.onSearch(input.value);
  });
  header.append(form);
  if (state.validation) {
    header.append(el('p', 'validation', state.validation));
  }
  root.append(header);

  if (state.toast) {
    root.append(el('div', 'toast', state.toast));
  }
  if (state.dirty) {
    root.append(banner(handlers));
  }

  const main = el('main');
  main.append(mapPanel(state, handlers));

  const content = el('div', 'content');
  if (state.searchResults) {
    const search = el('section', 'search-results');
    search.append(el('h2', undefined, `Search: ${state.searchResults.query}`));
    search.append(resultList('entities', state.searchResults.entities, state, handlers));
    search.append(resultList('publications', state.searchResults.publications, state, handlers));
    search.append(resultList('clinical trials', state.searchResults.clinical_trials,
                             state, handlers));
    content.append(search);
  }
  if (state.snapshot) {
    const ranked = el('section', 'ranked-results');
    ranked.append(el('h2', undefined, 'Ranked by map proximity'));
    ranked.append(resultList('publications', state.snapshot.publications, state, handlers));
    ranked.append(resultList('clinical trials', state.snapshot.clinical_trials,
                             state, handlers));
    content.append(ranked);
  }
  if (state.openCards.length > 0) {
    const cards = el('section', 'cards');
    for (const card of state.openCards) {
      cards.append(cardColumn(card, state, handlers));
    }
    content.append(cards);
  }
  main.append(content);
  root.append(main);
}
