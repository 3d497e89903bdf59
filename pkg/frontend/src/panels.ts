// Side panels: properties of the selected element, the expression outline
// (selection synced with the canvas), the live text view, the thumbnail
// mini-map, and the zoom control. All panels re-render from the latest
// payloads; none holds editing logic.

import { ConnectionPayload, ModelPayload, NodePayload, WsmlPayload } from './api';
import { nodeHeight, nodeTitle, NODE_WIDTH, typeDisplay } from './canvas';
import { MAX_ZOOM, MIN_ZOOM, Viewport } from './state';

export function renderTextView(container: HTMLElement, wsml: WsmlPayload | null): void {
  container.innerHTML = '';
  container.classList.add('text-view');
  if (!wsml) return;
  if (wsml.complete && wsml.text !== null) {
    const pre = document.createElement('pre');
    pre.className = 'wsml-text';
    pre.textContent = wsml.text;
    container.appendChild(pre);
    return;
  }
  const list = document.createElement('ul');
  list.className = 'violations';
  for (const v of wsml.violations) {
    const li = document.createElement('li');
    li.textContent = `${v.rule} (${v.subject}): ${v.message}`;
    list.appendChild(li);
  }
  container.appendChild(list);
}

function propertyRows(node: NodePayload): [string, string][] {
  const rows: [string, string][] = [
    ['id', node.id],
    ['kind', node.kind],
    ['position', `${node.x}, ${node.y}`],
  ];
  if (node.kind === 'variable') {
    rows.push(['name', node.name ?? '']);
    rows.push(['concept', node.concept ? `${node.concept[1]} (${node.concept[0]})` : '']);
    rows.push(['shared', String(node.shared ?? false)]);
    (node.slots ?? []).forEach((s, k) => {
      rows.push([`slot ${k}`, `${s.name} ${s.constraint} ${typeDisplay(s.range)}${s.binding ? ` = ${s.binding}` : ' (free)'}`]);
    });
  } else if (node.kind === 'relation') {
    rows.push(['relation', node.relation ? `${node.relation[1]} (${node.relation[0]})` : '']);
    (node.params ?? []).forEach((p, k) => {
      rows.push([`parameter ${k}`, `${typeDisplay(p.type)}${p.binding ? ` = ${p.binding}` : ' (free)'}`]);
    });
  } else if (node.kind === 'operator') {
    rows.push(['operator', node.op ?? '']);
  } else if (node.kind === 'instance') {
    if (node.instance) {
      rows.push(['instance', `${node.instance[1]} (${node.instance[0]})`]);
      if (node.memberOf) rows.push(['memberOf', node.memberOf[1]]);
    } else {
      rows.push(['datatype', node.builtin ?? '']);
      rows.push(['value', node.value ?? '']);
    }
  }
  return rows;
}

export function renderProperties(container: HTMLElement, model: ModelPayload | null, selection: string | null): void {
  container.innerHTML = '';
  container.classList.add('properties-panel');
  const title = document.createElement('h3');
  title.textContent = 'Properties';
  container.appendChild(title);
  if (!model || !selection) return;

  const table = document.createElement('dl');
  table.className = 'property-list';
  const add = (k: string, v: string) => {
    const dt = document.createElement('dt');
    dt.textContent = k;
    const dd = document.createElement('dd');
    dd.textContent = v;
    table.append(dt, dd);
  };

  const [kind, id, index] = selection.split(':');
  if (kind === 'conn') {
    const conn = model.connections.find((c) => c.id === id);
    if (conn) {
      add('connection', conn.id);
      add('source', `${conn.source.kind} ${conn.source.node}${conn.source.index !== null ? `[${conn.source.index}]` : ''}`);
      add('target', conn.target);
    }
  } else {
    const nodeId = kind === 'root' ? model.nodes.find((n) => n.kind === 'root')?.id : id;
    const node = model.nodes.find((n) => n.id === nodeId);
    if (node) {
      for (const [k, v] of propertyRows(node)) add(k, v);
      if ((kind === 'slot' || kind === 'param') && index !== undefined) {
        add('selected row', `${kind} ${index}`);
      }
    }
  }
  container.appendChild(table);
}

interface OutlineHandlers {
  select(selection: string): void;
}

function outlineChildren(model: ModelPayload, nodeId: string): ConnectionPayload[] {
  return model.connections.filter((c) => c.source.node === nodeId);
}

function outlineEntry(
  model: ModelPayload,
  node: NodePayload,
  selection: string | null,
  handlers: OutlineHandlers,
  seen: Set<string>,
): HTMLElement {
  const li = document.createElement('li');
  const sel = node.kind === 'root' ? 'root' : `node:${node.id}`;
  const label = document.createElement('span');
  label.className = selection === sel ? 'outline-label selected' : 'outline-label';
  label.dataset.selection = sel;
  label.textContent = nodeTitle(node);
  label.addEventListener('click', () => handlers.select(sel));
  li.appendChild(label);

  if (seen.has(node.id)) return li; // shared element: reference only
  seen.add(node.id);

  const children = outlineChildren(model, node.id);
  if (children.length) {
    const ul = document.createElement('ul');
    for (const conn of children) {
      const target = model.nodes.find((n) => n.id === conn.target);
      if (target) ul.appendChild(outlineEntry(model, target, selection, handlers, seen));
    }
    li.appendChild(ul);
  }
  return li;
}

export function renderOutline(
  container: HTMLElement,
  model: ModelPayload | null,
  selection: string | null,
  handlers: OutlineHandlers,
): void {
  container.innerHTML = '';
  container.classList.add('outline-panel');
  const title = document.createElement('h3');
  title.textContent = 'Outline';
  container.appendChild(title);
  if (!model) return;
  const root = model.nodes.find((n) => n.kind === 'root');
  if (!root) return;
  const ul = document.createElement('ul');
  ul.className = 'outline-tree';
  ul.appendChild(outlineEntry(model, root, selection, handlers, new Set()));
  container.appendChild(ul);
}

export function renderThumbnail(
  canvas: HTMLElement,
  model: ModelPayload | null,
  viewport: Viewport,
  viewSize: { width: number; height: number },
): void {
  canvas.innerHTML = '';
  canvas.classList.add('thumbnail');
  if (!model) return;
  const extent = model.nodes.reduce(
    (acc, n) => ({
      maxX: Math.max(acc.maxX, n.x + NODE_WIDTH),
      maxY: Math.max(acc.maxY, n.y + nodeHeight(n)),
    }),
    { maxX: 400, maxY: 300 },
  );
  const scale = Math.min(120 / extent.maxX, 90 / extent.maxY);

  for (const node of model.nodes) {
    const dot = document.createElement('div');
    dot.className = `thumb-node thumb-${node.kind}`;
    dot.style.left = `${node.x * scale}px`;
    dot.style.top = `${node.y * scale}px`;
    dot.style.width = `${Math.max(3, NODE_WIDTH * scale)}px`;
    dot.style.height = `${Math.max(2, nodeHeight(node) * scale)}px`;
    canvas.appendChild(dot);
  }

  // visible region of the world under the current pan and zoom
  const zoom = viewport.zoom / 100;
  const box = document.createElement('div');
  box.className = 'thumb-viewport';
  box.style.left = `${(-viewport.panX / zoom) * scale}px`;
  box.style.top = `${(-viewport.panY / zoom) * scale}px`;
  box.style.width = `${(viewSize.width / zoom) * scale}px`;
  box.style.height = `${(viewSize.height / zoom) * scale}px`;
  canvas.appendChild(box);
}

export function renderZoomControl(
  container: HTMLElement,
  viewport: Viewport,
  onZoom: (percent: number) => void,
): void {
  container.innerHTML = '';
  container.classList.add('zoom-control');
  const out = document.createElement('button');
  out.type = 'button';
  out.textContent = '−';
  out.addEventListener('click', () => onZoom(viewport.zoom / 1.25));
  const label = document.createElement('span');
  label.className = 'zoom-label';
  label.textContent = `${viewport.zoom}%`;
  const input = document.createElement('input');
  input.type = 'range';
  input.min = String(MIN_ZOOM);
  input.max = String(MAX_ZOOM);
  input.value = String(viewport.zoom);
  input.addEventListener('input', () => onZoom(Number(input.value)));
  const zoomIn = document.createElement('button');
  zoomIn.type = 'button';
  zoomIn.textContent = '+';
  zoomIn.addEventListener('click', () => onZoom(viewport.zoom * 1.25));
  container.append(out, input, label, zoomIn);
}
