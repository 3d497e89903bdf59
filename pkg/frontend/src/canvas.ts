// SVG canvas: a generic node-graph surface driven entirely by the model
// payload. Shapes come from a pure kind lookup (Start circle, variable /
// relation / instance rectangles with header and rows, operator ovals);
// connections are directed arrows. No editing semantics live here - every
// gesture is translated into a command line or a menu request.

import { ModelPayload, NodePayload, PortPayload, TypePayload } from './api';
import { Viewport } from './state';

export const NODE_WIDTH = 160;
export const HEADER_HEIGHT = 24;
export const ROW_HEIGHT = 18;

export type ShapeKind = 'circle' | 'rect' | 'oval';

export const SHAPE_BY_KIND: Record<NodePayload['kind'], ShapeKind> = {
  root: 'circle',
  variable: 'rect',
  relation: 'rect',
  instance: 'rect',
  operator: 'oval',
};

export interface CanvasHandlers {
  select(selection: string): void;
  openMenu(selection: string, x: number, y: number): void;
  move(nodeId: string, x: number, y: number): void;
  connect(portSelection: string, nodeId: string): void;
}

export function typeDisplay(t: TypePayload): string {
  if (t.kind === 'builtin') return t.builtin ?? '?';
  return t.concept ? t.concept[1] : (t.conceptName ?? '?');
}

export function nodeTitle(node: NodePayload): string {
  switch (node.kind) {
    case 'root':
      return 'Start';
    case 'variable':
      return `${node.name} memberOf ${node.concept?.[1]}${node.shared ? ' (shared)' : ''}`;
    case 'relation':
      return node.relation?.[1] ?? 'relation';
    case 'operator':
      return node.op ?? 'operator';
    case 'instance':
      return node.instance ? node.instance[1] : `${node.builtin} ${node.value}`;
  }
}

export function nodeRows(node: NodePayload): string[] {
  if (node.kind === 'variable') {
    return (node.slots ?? []).map((s) => `${s.name} ${s.constraint} ${typeDisplay(s.range)}`);
  }
  if (node.kind === 'relation') {
    return (node.params ?? []).map((p, k) => `parameter ${k}: ${typeDisplay(p.type)}`);
  }
  return [];
}

export function nodeHeight(node: NodePayload): number {
  const shape = SHAPE_BY_KIND[node.kind];
  if (shape !== 'rect') return 36;
  return HEADER_HEIGHT + nodeRows(node).length * ROW_HEIGHT;
}

function rowSelection(node: NodePayload, index: number): string {
  return node.kind === 'variable' ? `slot:${node.id}:${index}` : `param:${node.id}:${index}`;
}

export function portAnchor(model: ModelPayload, port: PortPayload): { x: number; y: number } {
  const node = model.nodes.find((n) => n.id === port.node);
  if (!node) return { x: 0, y: 0 };
  if (port.kind === 'root') return { x: node.x + 18, y: node.y + 18 };
  if (port.kind === 'operator') return { x: node.x + NODE_WIDTH / 2, y: node.y + 18 };
  const row = port.index ?? 0;
  return { x: node.x + NODE_WIDTH, y: node.y + HEADER_HEIGHT + row * ROW_HEIGHT + ROW_HEIGHT / 2 };
}

function targetAnchor(model: ModelPayload, nodeId: string): { x: number; y: number } {
  const node = model.nodes.find((n) => n.id === nodeId);
  if (!node) return { x: 0, y: 0 };
  const shape = SHAPE_BY_KIND[node.kind];
  if (shape === 'rect') return { x: node.x, y: node.y + nodeHeight(node) / 2 };
  return { x: node.x, y: node.y + 18 };
}

/** Script syntax for a connection source port, as the service expects it. */
export function scriptPort(node: NodePayload, rowIndex: number | null): string {
  if (node.kind === 'root') return 'root';
  if (node.kind === 'operator') return node.id;
  if (node.kind === 'variable' && rowIndex !== null) return `${node.id}.${rowIndex}`;
  if (node.kind === 'relation' && rowIndex !== null) return `${node.id}[${rowIndex}]`;
  return node.id;
}

// a connect gesture in progress: alt-drag from a port onto a node
let pendingConnect: string | null = null;

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K, attrs: Record<string, string>): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

function text(x: number, y: number, content: string, cls: string): SVGTextElement {
  const el = svgEl('text', { x: String(x), y: String(y), class: cls });
  el.textContent = content;
  return el;
}

export function portSelectionOf(node: NodePayload, rowIndex: number | null): string {
  if (node.kind === 'root') return 'root';
  if (node.kind === 'operator') return node.id;
  return rowIndex === null ? `node:${node.id}` : rowSelection(node, rowIndex);
}

export function renderCanvas(
  svg: SVGSVGElement,
  model: ModelPayload,
  selection: string | null,
  viewport: Viewport,
  handlers: CanvasHandlers,
): void {
  svg.innerHTML = '';
  pendingConnect = null;
  const defs = svgEl('defs', {});
  const marker = svgEl('marker', {
    id: 'arrow',
    viewBox: '0 0 10 10',
    refX: '9',
    refY: '5',
    markerWidth: '7',
    markerHeight: '7',
    orient: 'auto-start-reverse',
  });
  marker.appendChild(svgEl('path', { d: 'M 0 0 L 10 5 L 0 10 z', class: 'arrow-head' }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  const scale = viewport.zoom / 100;
  const world = svgEl('g', {
    class: 'world',
    transform: `translate(${viewport.panX},${viewport.panY}) scale(${scale})`,
  });
  svg.appendChild(world);

  for (const conn of model.connections) {
    const from = portAnchor(model, conn.source);
    const to = targetAnchor(model, conn.target);
    const line = svgEl('line', {
      x1: String(from.x),
      y1: String(from.y),
      x2: String(to.x),
      y2: String(to.y),
      class: selection === `conn:${conn.id}` ? 'edge selected' : 'edge',
      'marker-end': 'url(#arrow)',
      'data-conn': conn.id,
    });
    line.addEventListener('click', (e) => {
      e.stopPropagation();
      handlers.select(`conn:${conn.id}`);
    });
    line.addEventListener('contextmenu', (e) => {
      e.preventDefault();
      e.stopPropagation();
      handlers.openMenu(`conn:${conn.id}`, (e as MouseEvent).clientX, (e as MouseEvent).clientY);
    });
    world.appendChild(line);
  }

  for (const node of model.nodes) {
    world.appendChild(renderNode(node, selection, handlers));
  }
}

function renderNode(node: NodePayload, selection: string | null, handlers: CanvasHandlers): SVGGElement {
  const nodeSel = node.kind === 'root' ? 'root' : `node:${node.id}`;
  const selected = selection === nodeSel;
  const g = svgEl('g', {
    class: `node node-${node.kind}${selected ? ' selected' : ''}`,
    transform: `translate(${node.x},${node.y})`,
    'data-node': node.id,
    'data-kind': node.kind,
    'data-shape': SHAPE_BY_KIND[node.kind],
  });

  const shape = SHAPE_BY_KIND[node.kind];
  if (shape === 'circle') {
    g.appendChild(svgEl('circle', { cx: '18', cy: '18', r: '18', class: 'node-body' }));
    g.appendChild(text(18, 22, 'Start', 'node-title centered'));
  } else if (shape === 'oval') {
    g.appendChild(svgEl('ellipse', { cx: String(NODE_WIDTH / 4), cy: '18', rx: String(NODE_WIDTH / 4), ry: '18', class: 'node-body' }));
    g.appendChild(text(NODE_WIDTH / 4, 22, nodeTitle(node), 'node-title centered'));
  } else {
    const height = nodeHeight(node);
    g.appendChild(svgEl('rect', { width: String(NODE_WIDTH), height: String(height), rx: '4', class: 'node-body' }));
    g.appendChild(svgEl('rect', { width: String(NODE_WIDTH), height: String(HEADER_HEIGHT), rx: '4', class: 'node-header' }));
    g.appendChild(text(6, 16, nodeTitle(node), 'node-title'));
    nodeRows(node).forEach((label, k) => {
      const rowSel = rowSelection(node, k);
      const y = HEADER_HEIGHT + k * ROW_HEIGHT;
      const row = svgEl('g', { class: selection === rowSel ? 'node-row selected' : 'node-row', 'data-selection': rowSel });
      row.appendChild(svgEl('rect', { y: String(y), width: String(NODE_WIDTH), height: String(ROW_HEIGHT), class: 'row-hit' }));
      row.appendChild(text(10, y + 13, label, 'row-label'));
      row.addEventListener('click', (e) => {
        e.stopPropagation();
        handlers.select(rowSel);
      });
      row.addEventListener('contextmenu', (e) => {
        e.preventDefault();
        e.stopPropagation();
        handlers.openMenu(rowSel, (e as MouseEvent).clientX, (e as MouseEvent).clientY);
      });
      row.addEventListener('mousedown', (e) => {
        if ((e as MouseEvent).altKey) {
          e.stopPropagation();
          pendingConnect = scriptPort(node, k);
        }
      });
      g.appendChild(row);
    });
  }

  g.addEventListener('click', (e) => {
    e.stopPropagation();
    handlers.select(nodeSel);
  });
  if (node.kind === 'operator' || node.kind === 'root') {
    g.addEventListener('mousedown', (e) => {
      if ((e as MouseEvent).altKey) {
        e.stopPropagation();
        pendingConnect = scriptPort(node, null);
      }
    });
  }
  g.addEventListener('mouseup', () => {
    if (pendingConnect !== null && node.kind !== 'root') {
      const port = pendingConnect;
      pendingConnect = null;
      handlers.connect(port, node.id);
    }
  });
  g.addEventListener('contextmenu', (e) => {
    e.preventDefault();
    e.stopPropagation();
    handlers.openMenu(nodeSel, (e as MouseEvent).clientX, (e as MouseEvent).clientY);
  });
  attachDrag(g, node, handlers);
  return g;
}

function attachDrag(g: SVGGElement, node: NodePayload, handlers: CanvasHandlers): void {
  if (node.kind === 'root') return;
  let startX = 0;
  let startY = 0;
  let moved = false;

  const onMove = (e: MouseEvent) => {
    if (Math.abs(e.clientX - startX) + Math.abs(e.clientY - startY) > 3) moved = true;
  };
  const onUp = (e: MouseEvent) => {
    document.removeEventListener('mousemove', onMove);
    document.removeEventListener('mouseup', onUp);
    if (moved) {
      handlers.move(node.id, node.x + (e.clientX - startX), node.y + (e.clientY - startY));
    }
  };
  g.addEventListener('mousedown', (e) => {
    if ((e as MouseEvent).button !== 0) return;
    startX = (e as MouseEvent).clientX;
    startY = (e as MouseEvent).clientY;
    moved = false;
    document.addEventListener('mousemove', onMove);
    document.addEventListener('mouseup', onUp);
  });
}
