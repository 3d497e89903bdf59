// Context menu rendering. Every enabled entry is one verbatim command line
// from a /menu response; the client adds no operations of its own. Template
// entries (free-text commands such as rename) open an inline editor seeded
// with the sample line before submitting.

import { MenuItem } from './api';

export interface MenuHandlers {
  run(line: string): void;
  close(): void;
}

const VERB_LABELS: Record<string, string> = {
  refine: 'Refine value',
  refinep: 'Refine parameter',
  involve: 'Involve variable',
  connect: 'Connect to',
  insert: 'Insert operator',
  reconnect: 'Reconnect',
  delete: 'Delete',
  setop: 'Change operator',
  addoperand: 'Add operand',
  rename: 'Rename',
  setval: 'Edit value',
  var: 'New variable',
  op: 'New operator',
  inst: 'New instance',
  lit: 'New literal',
  rel: 'New relation',
  move: 'Move',
};

export function menuLabel(item: MenuItem): string {
  const prefix = VERB_LABELS[item.verb] ?? item.verb;
  const rest = item.line.startsWith(item.verb) ? item.line.slice(item.verb.length).trim() : item.line;
  return `${prefix}: ${rest}`;
}

export function buildContextMenu(items: MenuItem[], handlers: MenuHandlers): HTMLElement {
  const root = document.createElement('div');
  root.className = 'context-menu';
  root.setAttribute('role', 'menu');
  if (items.length === 0) {
    const empty = document.createElement('div');
    empty.className = 'menu-empty';
    empty.textContent = 'No operations available';
    root.appendChild(empty);
    return root;
  }
  for (const item of items) {
    const entry = document.createElement('button');
    entry.type = 'button';
    entry.className = 'menu-item';
    entry.setAttribute('role', 'menuitem');
    entry.dataset.line = item.line;
    entry.dataset.verb = item.verb;
    entry.dataset.template = String(item.template);
    entry.textContent = menuLabel(item);
    entry.addEventListener('click', () => {
      if (item.template) {
        openTemplateEditor(root, item, handlers);
      } else {
        handlers.close();
        handlers.run(item.line);
      }
    });
    root.appendChild(entry);
  }
  return root;
}

function openTemplateEditor(root: HTMLElement, item: MenuItem, handlers: MenuHandlers): void {
  const editor = document.createElement('form');
  editor.className = 'menu-template-editor';
  const input = document.createElement('input');
  input.type = 'text';
  input.value = item.line;
  input.className = 'menu-template-input';
  const submit = document.createElement('button');
  submit.type = 'submit';
  submit.textContent = 'Apply';
  editor.append(input, submit);
  editor.addEventListener('submit', (event) => {
    event.preventDefault();
    handlers.close();
    handlers.run(input.value);
  });
  root.appendChild(editor);
  input.focus();
}

/** Show a menu at viewport coordinates and wire dismissal. */
export function showMenuAt(
  container: HTMLElement,
  items: MenuItem[],
  x: number,
  y: number,
  run: (line: string) => void,
): HTMLElement {
  dismissMenus(container);
  const handlers: MenuHandlers = {
    run,
    close: () => dismissMenus(container),
  };
  const menu = buildContextMenu(items, handlers);
  menu.style.left = `${x}px`;
  menu.style.top = `${y}px`;
  container.appendChild(menu);
  return menu;
}

export function dismissMenus(container: HTMLElement): void {
  for (const el of Array.from(container.querySelectorAll('.context-menu'))) {
    el.remove();
  }
}
