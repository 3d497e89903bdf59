import { describe, expect, it } from 'vitest';

import { CanvasHandlers, renderCanvas, scriptPort, SHAPE_BY_KIND } from '../src/canvas';
import { NodePayload } from '../src/api';
import { makeModel, personNode, rootNode } from './helpers';

function svgHost(): SVGSVGElement {
  return document.createElementNS('http://www.w3.org/2000/svg', 'svg');
}

function noopHandlers(overrides: Partial<CanvasHandlers> = {}): CanvasHandlers {
  return {
    select: () => undefined,
    openMenu: () => undefined,
    move: () => undefined,
    connect: () => undefined,
    ...overrides,
  };
}

const VIEWPORT = { panX: 0, panY: 0, zoom: 100 };

function operatorNode(id = 'n3'): NodePayload {
  return { id, kind: 'operator', x: 300, y: 120, op: 'OR' };
}

describe('shape lookup', () => {
  it('maps kinds to the legend shapes', () => {
    expect(SHAPE_BY_KIND.root).toBe('circle');
    expect(SHAPE_BY_KIND.variable).toBe('rect');
    expect(SHAPE_BY_KIND.relation).toBe('rect');
    expect(SHAPE_BY_KIND.instance).toBe('rect');
    expect(SHAPE_BY_KIND.operator).toBe('oval');
  });
});

describe('renderCanvas', () => {
  it('draws one group per node with the mapped shape', () => {
    const svg = svgHost();
    renderCanvas(svg, makeModel([rootNode(), personNode(), operatorNode()]), null, VIEWPORT, noopHandlers());
    const groups = svg.querySelectorAll('g.node');
    expect(groups).toHaveLength(3);
    expect(svg.querySelector('[data-kind="root"] circle')).not.toBeNull();
    expect(svg.querySelector('[data-kind="variable"] rect')).not.toBeNull();
    expect(svg.querySelector('[data-kind="operator"] ellipse')).not.toBeNull();
  });

  it('renders slot rows with selection ids', () => {
    const svg = svgHost();
    renderCanvas(svg, makeModel([rootNode(), personNode()]), null, VIEWPORT, noopHandlers());
    const row = svg.querySelector('[data-selection="slot:n2:0"]');
    expect(row).not.toBeNull();
    expect(row!.textContent).toContain('hasEmployer');
    expect(row!.textContent).toContain('Organization');
  });

  it('draws connections as arrow-marked edges', () => {
    const model = makeModel(
      [rootNode(), personNode()],
      [{ id: 'c1', source: { kind: 'root', node: 'n1', index: null }, target: 'n2' }],
    );
    const svg = svgHost();
    renderCanvas(svg, model, null, VIEWPORT, noopHandlers());
    const edge = svg.querySelector('line.edge');
    expect(edge).not.toBeNull();
    expect(edge!.getAttribute('marker-end')).toBe('url(#arrow)');
    expect(edge!.getAttribute('data-conn')).toBe('c1');
  });

  it('requests the service menu on right-click with the element selection', () => {
    const seen: string[] = [];
    const svg = svgHost();
    renderCanvas(
      svg,
      makeModel([rootNode(), personNode()]),
      null,
      VIEWPORT,
      noopHandlers({ openMenu: (sel) => seen.push(sel) }),
    );
    svg.querySelector('[data-selection="slot:n2:0"]')!.dispatchEvent(
      new MouseEvent('contextmenu', { bubbles: true, cancelable: true }),
    );
    svg.querySelector('[data-node="n2"]')!.dispatchEvent(
      new MouseEvent('contextmenu', { bubbles: true, cancelable: true }),
    );
    expect(seen).toEqual(['slot:n2:0', 'node:n2']);
  });

  it('translates an alt-drag between elements into a connect command', () => {
    const connects: [string, string][] = [];
    const svg = svgHost();
    renderCanvas(
      svg,
      makeModel([rootNode(), personNode(), operatorNode()]),
      null,
      VIEWPORT,
      noopHandlers({ connect: (port, node) => connects.push([port, node]) }),
    );
    svg.querySelector('[data-selection="slot:n2:0"]')!.dispatchEvent(
      new MouseEvent('mousedown', { bubbles: true, cancelable: true, altKey: true }),
    );
    svg.querySelector('[data-node="n3"]')!.dispatchEvent(new MouseEvent('mouseup', { bubbles: true }));
    expect(connects).toEqual([['n2.0', 'n3']]);
  });

  it('marks the selected element', () => {
    const svg = svgHost();
    renderCanvas(svg, makeModel([rootNode(), personNode()]), 'node:n2', VIEWPORT, noopHandlers());
    expect(svg.querySelector('[data-node="n2"]')!.getAttribute('class')).toContain('selected');
  });

  it('applies pan and zoom to the world transform', () => {
    const svg = svgHost();
    renderCanvas(svg, makeModel([rootNode()]), null, { panX: 30, panY: -10, zoom: 50 }, noopHandlers());
    expect(svg.querySelector('g.world')!.getAttribute('transform')).toBe('translate(30,-10) scale(0.5)');
  });
});

describe('scriptPort', () => {
  it('uses the command syntax for each port kind', () => {
    expect(scriptPort(rootNode(), null)).toBe('root');
    expect(scriptPort(personNode(), 0)).toBe('n2.0');
    expect(scriptPort({ id: 'n4', kind: 'relation', x: 0, y: 0, relation: ['iri', 'worksFor'], params: [] }, 1)).toBe('n4[1]');
    expect(scriptPort(operatorNode(), null)).toBe('n3');
  });
});
