import { describe, expect, it } from 'vitest';

import { OntologyInfo } from '../src/api';
import { OntologyHandlers, renderOntologyPanel } from '../src/ontology';

function fixtureOntologies(): OntologyInfo[] {
  return [
    {
      iri: 'http://example.org/biology',
      tree: {
        label: 'ontology http://example.org/biology',
        kind: 'ontology',
        children: [
          {
            label: 'concepts',
            kind: 'section',
            children: [
              {
                label: 'Human',
                kind: 'concept',
                children: [{ label: 'hasName ofType _string', kind: 'attribute', children: [] }],
              },
            ],
          },
        ],
      },
    },
    {
      iri: 'http://example.org/sociology',
      tree: {
        label: 'ontology http://example.org/sociology',
        kind: 'ontology',
        children: [
          {
            label: 'concepts',
            kind: 'section',
            children: [
              {
                label: 'Human',
                kind: 'external-concept',
                children: [{ label: 'Person', kind: 'concept', children: [] }],
              },
            ],
          },
        ],
      },
    },
  ];
}

function handlers(overrides: Partial<OntologyHandlers> = {}): OntologyHandlers {
  return { importOntology: () => undefined, inspect: () => undefined, ...overrides };
}

describe('renderOntologyPanel', () => {
  it('shows one tab per loaded ontology', () => {
    const host = document.createElement('div');
    renderOntologyPanel(host, fixtureOntologies(), handlers());
    const tabs = Array.from(host.querySelectorAll('.tab'));
    expect(tabs.map((t) => t.getAttribute('title'))).toEqual([
      'http://example.org/biology',
      'http://example.org/sociology',
    ]);
  });

  it('switches trees when a tab is clicked', () => {
    const host = document.createElement('div');
    renderOntologyPanel(host, fixtureOntologies(), handlers());
    // the concepts section opens by default; expand Human to see its attribute
    (host.querySelectorAll('.tree-toggle')[1] as HTMLElement).click();
    expect(host.textContent).toContain('hasName ofType _string');
    (host.querySelectorAll('.tab')[1] as HTMLElement).click();
    expect(host.querySelectorAll('.tab')[1].className).toContain('active');
    expect(host.textContent).not.toContain('hasName ofType _string');
  });

  it('offers the load-imported action on external super-concepts', () => {
    const host = document.createElement('div');
    const imported: string[] = [];
    renderOntologyPanel(host, fixtureOntologies(), handlers({ importOntology: (iri) => imported.push(iri) }));
    (host.querySelectorAll('.tab')[1] as HTMLElement).click();
    const action = host.querySelector('.tree-action') as HTMLElement;
    expect(action).not.toBeNull();
    action.click();
    expect(imported).toEqual(['Human']);
  });

  it('reports the selected entry to the properties inspector', () => {
    const host = document.createElement('div');
    const inspected: string[] = [];
    renderOntologyPanel(host, fixtureOntologies(), handlers({ inspect: (d) => inspected.push(d) }));
    const labels = Array.from(host.querySelectorAll<HTMLElement>('.tree-label'));
    labels.find((l) => l.textContent === 'Human')!.click();
    expect(inspected).toEqual(['concepts > Human [concept]']);
  });

  it('submits the import form with the typed IRI', () => {
    const host = document.createElement('div');
    const imported: string[] = [];
    renderOntologyPanel(host, [], handlers({ importOntology: (iri) => imported.push(iri) }));
    expect(host.textContent).toContain('No ontologies loaded');
    const input = host.querySelector('.ontology-import-iri') as HTMLInputElement;
    input.value = '  http://example.org/biology ';
    host.querySelector('form')!.dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
    expect(imported).toEqual(['http://example.org/biology']);
  });
});
