/**
 * Orchestration of the three workflows: generate from the constraint
 * panel, edit-regenerate with version navigation, and organize into
 * favorites folders and canvas collections.
 *
 * The workspace owns per-slot view state (displayed version + document)
 * and serializes generate/edit traffic per slot: at most one request in
 * flight per slot, later ones queue behind it.
 */

import { ApiClient, VersionDescriptor } from "./api.js";
import { CanvasView } from "./canvas.js";
import { PanelState } from "./panel.js";

export interface SlotView {
  slotId: string;
  versionCount: number;
  currentIndex: number;
  displayedHtml: string;
  viewport: [number, number];
}

export interface PendingEdit {
  slotId: string;
  selector: string;
  label: string;
  presetOps: Set<string>;
  freeText: string;
}

export class Workspace {
  readonly slots = new Map<string, SlotView>();
  pendingEdit: PendingEdit | null = null;

  private queues = new Map<string, Promise<unknown>>();

  constructor(
    readonly api: ApiClient,
    readonly panel: PanelState,
    readonly canvas: CanvasView,
  ) {}

  private record(descriptor: VersionDescriptor): SlotView {
    const view: SlotView = {
      slotId: descriptor.slot_id,
      versionCount: descriptor.version_count,
      currentIndex: descriptor.version_index,
      displayedHtml: descriptor.design.html_document,
      viewport: descriptor.design.device_viewport,
    };
    this.slots.set(view.slotId, view);
    return view;
  }

  private enqueue<T>(slotId: string, task: () => Promise<T>): Promise<T> {
    const previous = this.queues.get(slotId) ?? Promise.resolve();
    const next = previous.then(task, task);
    this.queues.set(slotId, next.catch(() => undefined));
    return next;
  }

  /** Workflow 1: generate from the current panel state. */
  async generate(seed?: number): Promise<SlotView> {
    const issues = this.panel.validate();
    if (issues.length > 0) {
      throw new Error(`fix the form first: ${issues.map((i) => i.message).join("; ")}`);
    }
    const descriptor = await this.api.generate(this.panel.toRequestSettings(), seed);
    const view = this.record(descriptor);
    this.canvas.addGenerated(view.slotId, view.viewport);
    return view;
  }

  /** Workflow 2, step 1: element picked inside the preview. */
  beginEdit(slotId: string, selector: string, label: string): PendingEdit {
    this.pendingEdit = {
      slotId, selector, label,
      presetOps: new Set<string>(), freeText: "",
    };
    return this.pendingEdit;
  }

  /** Workflow 2, step 2: Regenerate Design with the modification box. */
  regenerate(): Promise<SlotView> {
    const edit = this.pendingEdit;
    if (!edit) throw new Error("no element selected for editing");
    if (edit.presetOps.size === 0 && !edit.freeText.trim()) {
      throw new Error("choose a preset option or describe the change");
    }
    return this.enqueue(edit.slotId, async () => {
      const descriptor = await this.api.edit(edit.slotId, {
        target_selector: edit.selector,
        preset_ops: [...edit.presetOps],
        free_text: edit.freeText,
      });
      this.pendingEdit = null;
      return this.record(descriptor);
    });
  }

  /** Version navigator arrows; index is clamped by the server. */
  navigate(slotId: string, index: number): Promise<SlotView> {
    return this.enqueue(slotId, async () => {
      const descriptor = await this.api.navigate(slotId, index);
      return this.record(descriptor);
    });
  }

  navigateBack(slotId: string): Promise<SlotView> {
    const view = this.mustSlot(slotId);
    return this.navigate(slotId, Math.max(0, view.currentIndex - 1));
  }

  navigateForward(slotId: string): Promise<SlotView> {
    const view = this.mustSlot(slotId);
    return this.navigate(
      slotId, Math.min(view.versionCount - 1, view.currentIndex + 1));
  }

  /** Toolbar: duplicate into a fresh slot placed beside the original. */
  async duplicate(slotId: string): Promise<SlotView> {
    const descriptor = await this.api.duplicate(slotId);
    const view = this.record(descriptor);
    this.canvas.addGenerated(view.slotId, view.viewport);
    return view;
  }

  /** Toolbar: remove the design from canvas and server. */
  async remove(slotId: string): Promise<void> {
    await this.api.deleteSlot(slotId);
    this.slots.delete(slotId);
    if (this.canvas.frame(slotId)) this.canvas.removeFrame(slotId);
  }

  /** Toolbar: download the displayed version's exact bytes. */
  download(slotId: string): Promise<string> {
    const view = this.mustSlot(slotId);
    return this.api.download(slotId, view.currentIndex);
  }

  /** Workflow 3: canvas collections. */
  async saveCanvas(name: string, id?: string): Promise<string> {
    const payload = {
      id,
      name,
      slots: this.canvas.layout.map((f) => ({
        slot_id: f.slotId, x: f.x, y: f.y, w: f.w, h: f.h, z: f.z,
      })),
      panel_state: this.panel.document,
    };
    const saved = await this.api.saveCanvas(payload);
    return saved.id;
  }

  /** Load Canvas restores panel state (locks included) and frames. */
  async loadCanvas(id: string): Promise<void> {
    const payload = await this.api.loadCanvas(id);
    this.panel.loadDocument(JSON.stringify(payload.panel_state));
    this.canvas.restoreLayout(payload.slots.map((s) => ({
      slotId: s.slot_id, x: s.x, y: s.y, w: s.w, h: s.h, z: s.z,
    })));
    this.slots.clear();
    for (const placed of payload.slots) {
      const listing = await this.api.versions(placed.slot_id);
      const design = await this.api.version(placed.slot_id, listing.current_index);
      this.slots.set(placed.slot_id, {
        slotId: placed.slot_id,
        versionCount: listing.versions.length,
        currentIndex: listing.current_index,
        displayedHtml: design.html_document,
        viewport: design.device_viewport,
      });
    }
  }

  /** Workflow 3: Save to Favorites (optionally creating the folder inline). */
  async saveToFavorites(slotId: string, folderId: string | null,
                        newFolderName?: string): Promise<void> {
    let target = folderId;
    if (target === null) {
      if (!newFolderName) throw new Error("choose a folder or name a new one");
      target = (await this.api.createFolder(newFolderName)).id;
    }
    const view = this.mustSlot(slotId);
    await this.api.saveToFavorites(target, slotId, view.currentIndex);
  }

  private mustSlot(slotId: string): SlotView {
    const view = this.slots.get(slotId);
    if (!view) throw new Error(`unknown slot ${slotId}`);
    return view;
  }
}
