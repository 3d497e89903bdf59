import { describe, expect, it } from 'vitest';

import { MenuItem } from '../src/api';
import { buildContextMenu, dismissMenus, menuLabel, showMenuAt } from '../src/menu';

const ITEMS: MenuItem[] = [
  { line: 'refine n2.hasEmployer default', verb: 'refine', template: false },
  { line: 'refine n2.hasEmployer inst http://example.org/sociology#Acme', verb: 'refine', template: false },
  { line: 'rename n2 ?person1', verb: 'rename', template: true },
];

describe('buildContextMenu', () => {
  it('creates one entry per service item and nothing else', () => {
    const menu = buildContextMenu(ITEMS, { run: () => undefined, close: () => undefined });
    const entries = Array.from(menu.querySelectorAll('.menu-item'));
    expect(entries).toHaveLength(ITEMS.length);
    // zero-duplication: every entry's command line is a verbatim service line
    const serviceLines = new Set(ITEMS.map((i) => i.line));
    for (const entry of entries) {
      expect(serviceLines.has((entry as HTMLElement).dataset.line!)).toBe(true);
    }
  });

  it('runs the exact service line on click', () => {
    const ran: string[] = [];
    const menu = buildContextMenu(ITEMS, { run: (line) => ran.push(line), close: () => undefined });
    (menu.querySelectorAll('.menu-item')[1] as HTMLElement).click();
    expect(ran).toEqual(['refine n2.hasEmployer inst http://example.org/sociology#Acme']);
  });

  it('opens an editor seeded with the sample line for template items', () => {
    const ran: string[] = [];
    const menu = buildContextMenu(ITEMS, { run: (line) => ran.push(line), close: () => undefined });
    (menu.querySelectorAll('.menu-item')[2] as HTMLElement).click();
    expect(ran).toEqual([]); // not submitted yet
    const input = menu.querySelector('.menu-template-input') as HTMLInputElement;
    expect(input.value).toBe('rename n2 ?person1');
    input.value = 'rename n2 ?employee';
    menu.querySelector('form')!.dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
    expect(ran).toEqual(['rename n2 ?employee']);
  });

  it('shows a placeholder when the service offers nothing', () => {
    const menu = buildContextMenu([], { run: () => undefined, close: () => undefined });
    expect(menu.querySelector('.menu-item')).toBeNull();
    expect(menu.querySelector('.menu-empty')!.textContent).toContain('No operations');
  });
});

describe('showMenuAt', () => {
  it('replaces any open menu and positions the new one', () => {
    const host = document.createElement('div');
    showMenuAt(host, ITEMS, 10, 20, () => undefined);
    const second = showMenuAt(host, ITEMS.slice(0, 1), 40, 50, () => undefined);
    expect(host.querySelectorAll('.context-menu')).toHaveLength(1);
    expect(second.style.left).toBe('40px');
    expect(second.style.top).toBe('50px');
    dismissMenus(host);
    expect(host.querySelectorAll('.context-menu')).toHaveLength(0);
  });
});

describe('menuLabel', () => {
  it('prefixes a human verb and keeps the full argument text', () => {
    expect(menuLabel(ITEMS[0])).toBe('Refine value: n2.hasEmployer default');
    expect(menuLabel({ line: 'delete n3', verb: 'delete', template: false })).toBe('Delete: n3');
  });
});
