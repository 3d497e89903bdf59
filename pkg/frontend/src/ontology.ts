// Ontology browser: one tab per loaded ontology, a collapsible tree per tab,
// and a properties strip for the selected tree entry. External super-concepts
// expose the load-imported action, which round-trips through the service and
// refreshes the tab list.

import { OntologyInfo, TreePayload } from './api';

export interface OntologyHandlers {
  importOntology(iri: string): void;
  inspect(description: string): void;
}

interface PanelState {
  activeTab: number;
  expanded: Set<string>;
}

const panelStates = new WeakMap<HTMLElement, PanelState>();

function describe(path: string[], node: TreePayload): string {
  const where = path.length ? `${path.join(' > ')} > ` : '';
  return `${where}${node.label} [${node.kind}]`;
}

function renderTree(
  node: TreePayload,
  path: string[],
  state: PanelState,
  handlers: OntologyHandlers,
): HTMLElement {
  const li = document.createElement('li');
  li.className = `tree-node tree-${node.kind}`;
  const row = document.createElement('div');
  row.className = 'tree-row';
  const key = [...path, node.label].join('/');

  if (node.children.length > 0) {
    const toggle = document.createElement('button');
    toggle.type = 'button';
    toggle.className = 'tree-toggle';
    toggle.textContent = state.expanded.has(key) ? '▾' : '▸';
    toggle.addEventListener('click', () => {
      if (state.expanded.has(key)) state.expanded.delete(key);
      else state.expanded.add(key);
      const panel = row.closest('.ontology-panel');
      if (panel) panel.dispatchEvent(new CustomEvent('rerender'));
    });
    row.appendChild(toggle);
  }

  const label = document.createElement('span');
  label.className = 'tree-label';
  label.textContent = node.label;
  label.addEventListener('click', () => handlers.inspect(describe(path, node)));
  row.appendChild(label);

  if (node.kind === 'external-concept' || node.kind === 'import') {
    const action = document.createElement('button');
    action.type = 'button';
    action.className = 'tree-action';
    action.textContent = 'load imported ontology';
    action.dataset.iri = node.label;
    action.addEventListener('click', () => handlers.importOntology(node.label));
    row.appendChild(action);
  }

  li.appendChild(row);
  if (node.children.length > 0 && state.expanded.has(key)) {
    const ul = document.createElement('ul');
    ul.className = 'tree-children';
    for (const child of node.children) {
      ul.appendChild(renderTree(child, [...path, node.label], state, handlers));
    }
    li.appendChild(ul);
  }
  return li;
}

export function renderOntologyPanel(
  container: HTMLElement,
  ontologies: OntologyInfo[],
  handlers: OntologyHandlers,
): void {
  let state = panelStates.get(container);
  if (!state) {
    state = { activeTab: 0, expanded: new Set(['concepts']) };
    panelStates.set(container, state);
    container.addEventListener('rerender', () => renderOntologyPanel(container, ontologies, handlers));
  }
  if (state.activeTab >= ontologies.length) state.activeTab = 0;

  container.innerHTML = '';
  container.classList.add('ontology-panel');

  const tabs = document.createElement('div');
  tabs.className = 'ontology-tabs';
  ontologies.forEach((ont, i) => {
    const tab = document.createElement('button');
    tab.type = 'button';
    tab.className = i === state!.activeTab ? 'tab active' : 'tab';
    tab.textContent = ont.iri.split('/').pop() ?? ont.iri;
    tab.title = ont.iri;
    tab.addEventListener('click', () => {
      state!.activeTab = i;
      renderOntologyPanel(container, ontologies, handlers);
    });
    tabs.appendChild(tab);
  });
  container.appendChild(tabs);

  const active = ontologies[state.activeTab];
  if (!active) {
    const empty = document.createElement('div');
    empty.className = 'ontology-empty';
    empty.textContent = 'No ontologies loaded';
    container.appendChild(empty);
  } else {
    const treeRoot = document.createElement('ul');
    treeRoot.className = 'ontology-tree';
    // skip the synthetic "ontology <iri>" wrapper; render its sections
    for (const section of active.tree.children) {
      treeRoot.appendChild(renderTree(section, [], state, handlers));
    }
    container.appendChild(treeRoot);
  }

  const importForm = document.createElement('form');
  importForm.className = 'ontology-import';
  const input = document.createElement('input');
  input.type = 'text';
  input.placeholder = 'ontology IRI';
  input.className = 'ontology-import-iri';
  const load = document.createElement('button');
  load.type = 'submit';
  load.textContent = 'Load';
  importForm.append(input, load);
  importForm.addEventListener('submit', (event) => {
    event.preventDefault();
    if (input.value.trim()) handlers.importOntology(input.value.trim());
  });
  container.appendChild(importForm);
}
