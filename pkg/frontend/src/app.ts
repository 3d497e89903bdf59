// Workspace assembly: toolbar, ontology browser, canvas, side panels, text
// view, and the toast strip for server rejections. The app is a thin loop:
// render from the store, translate gestures into command lines or menu
// requests, and feed every response back into the store.

import { ApiClient, MenuItem, ServiceFault } from './api';
import { renderCanvas } from './canvas';
import { dismissMenus, showMenuAt } from './menu';
import { renderOntologyPanel } from './ontology';
import {
  renderOutline,
  renderProperties,
  renderTextView,
  renderThumbnail,
  renderZoomControl,
} from './panels';
import { WorkspaceStore } from './state';

export class App {
  store: WorkspaceStore;
  root: HTMLElement;

  private toolbar!: HTMLElement;
  private ontologyPane!: HTMLElement;
  private canvasHost!: HTMLElement;
  private svg!: SVGSVGElement;
  private propertiesPane!: HTMLElement;
  private outlinePane!: HTMLElement;
  private thumbnailPane!: HTMLElement;
  private zoomPane!: HTMLElement;
  private textPane!: HTMLElement;
  private toastPane!: HTMLElement;

  constructor(root: HTMLElement, api: ApiClient) {
    this.root = root;
    this.store = new WorkspaceStore(api);
    this.buildLayout();
    this.store.subscribe(() => this.render());
  }

  async start(mode: 'standard' | 'advanced' = 'standard'): Promise<void> {
    try {
      await this.store.openSession(mode);
      await this.refreshOntologies();
    } catch (err) {
      this.toast(err instanceof ServiceFault ? `${err.code}: ${err.message}` : 'service unreachable');
    }
  }

  private buildLayout(): void {
    this.root.innerHTML = '';
    this.root.classList.add('workspace');

    this.toolbar = this.pane('toolbar');
    const main = document.createElement('div');
    main.className = 'workspace-main';

    this.ontologyPane = this.makePane('ontology-pane');
    this.canvasHost = this.makePane('canvas-host');
    this.svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
    this.svg.setAttribute('class', 'canvas');
    this.canvasHost.appendChild(this.svg);
    this.svg.addEventListener('contextmenu', (e) => {
      e.preventDefault();
      this.openMenu('root', (e as MouseEvent).clientX, (e as MouseEvent).clientY);
    });
    this.svg.addEventListener('click', () => {
      dismissMenus(this.canvasHost);
      this.store.select(null);
    });

    const side = document.createElement('div');
    side.className = 'side-panels';
    this.propertiesPane = this.makePane('properties');
    this.outlinePane = this.makePane('outline');
    this.thumbnailPane = this.makePane('thumbnail-host');
    this.zoomPane = this.makePane('zoom');
    side.append(this.propertiesPane, this.outlinePane, this.thumbnailPane, this.zoomPane);

    main.append(this.ontologyPane, this.canvasHost, side);
    this.textPane = this.makePane('text-pane');
    this.toastPane = this.makePane('toasts');
    this.root.append(this.toolbar, main, this.textPane, this.toastPane);
  }

  private pane(cls: string): HTMLElement {
    const el = this.makePane(cls);
    return el;
  }

  private makePane(cls: string): HTMLElement {
    const el = document.createElement('div');
    el.className = cls;
    return el;
  }

  private renderToolbar(): void {
    this.toolbar.innerHTML = '';
    const label = document.createElement('span');
    label.className = 'toolbar-title';
    label.textContent = `axiom editor — revision ${this.store.revision}`;
    this.toolbar.appendChild(label);

    for (const mode of ['standard', 'advanced'] as const) {
      const btn = document.createElement('button');
      btn.type = 'button';
      btn.className = this.store.mode === mode ? 'mode-toggle active' : 'mode-toggle';
      btn.dataset.mode = mode;
      btn.textContent = `${mode} mode`;
      btn.disabled = this.store.busy;
      btn.addEventListener('click', () => {
        if (this.store.mode !== mode) void this.start(mode); // mode switch opens a new session
      });
      this.toolbar.appendChild(btn);
    }
  }

  async refreshOntologies(): Promise<void> {
    const { ontologies } = await this.store.api.listOntologies();
    renderOntologyPanel(this.ontologyPane, ontologies, {
      importOntology: async (iri) => {
        try {
          await this.store.api.importOntology(iri);
          await this.refreshOntologies();
          await this.store.refresh();
        } catch (err) {
          this.toast(err instanceof ServiceFault ? `${err.code}: ${err.message}` : String(err));
        }
      },
      inspect: (description) => this.toast(description, 'info'),
    });
  }

  /** Fetch the service menu for a selection and show it; nothing client-made. */
  async openMenu(selection: string, x: number, y: number): Promise<void> {
    this.store.select(selection);
    let items: MenuItem[];
    try {
      items = (await this.store.menu(selection)).commands;
    } catch (err) {
      this.toast(err instanceof ServiceFault ? `${err.code}: ${err.message}` : String(err));
      return;
    }
    showMenuAt(this.canvasHost, items, x, y, (line) => void this.runCommand(line));
  }

  async runCommand(line: string): Promise<void> {
    const outcome = await this.store.execute(line);
    if (!outcome.committed && outcome.rejection) {
      this.toast(`${outcome.rejection.rule}: ${outcome.rejection.message}`);
    }
  }

  toast(message: string, kind: 'error' | 'info' = 'error'): void {
    const el = document.createElement('div');
    el.className = `toast toast-${kind}`;
    el.textContent = message;
    this.toastPane.appendChild(el);
    setTimeout(() => el.remove(), 6000);
  }

  render(): void {
    this.renderToolbar();
    if (this.store.model) {
      renderCanvas(this.svg, this.store.model, this.store.selection, this.store.viewport, {
        select: (sel) => this.store.select(sel),
        openMenu: (sel, x, y) => void this.openMenu(sel, x, y),
        move: (nodeId, x, y) => void this.runCommand(`move ${nodeId} @${Math.round(x)},${Math.round(y)}`),
        connect: (portSel, nodeId) => void this.runCommand(`connect ${portSel} ${nodeId}`),
      });
    }
    renderProperties(this.propertiesPane, this.store.model, this.store.selection);
    renderOutline(this.outlinePane, this.store.model, this.store.selection, {
      select: (sel) => this.store.select(sel),
    });
    renderThumbnail(this.thumbnailPane, this.store.model, this.store.viewport, {
      width: this.canvasHost.clientWidth || 800,
      height: this.canvasHost.clientHeight || 600,
    });
    renderZoomControl(this.zoomPane, this.store.viewport, (p) => this.store.setZoom(p));
    renderTextView(this.textPane, this.store.wsml);
  }
}
