/**
 * Infinite-canvas view state: pan/zoom transform, per-slot frames, the
 * current selection, and session-scoped undo/redo of layout operations.
 *
 * Layout history is a stack of full frame snapshots; undo then redo
 * restores the exact layout, and Clear Canvas is itself undoable. History
 * lives only in memory: it is deliberately not part of saved canvases.
 */

export interface Frame {
  slotId: string;
  x: number;
  y: number;
  w: number;
  h: number;
  z: number;
}

export interface ViewportTransform {
  panX: number;
  panY: number;
  zoom: number;
}

export const MIN_ZOOM = 0.1;
export const MAX_ZOOM = 4.0;

const PLACEMENT_GAP = 80;

function cloneFrames(frames: Frame[]): Frame[] {
  return frames.map((f) => ({ ...f }));
}

export class CanvasView {
  transform: ViewportTransform = { panX: 0, panY: 0, zoom: 1 };
  selected: string | null = null;

  private frames: Frame[] = [];
  private undoStack: Frame[][] = [];
  private redoStack: Frame[][] = [];

  constructor(readonly viewWidth = 1600, readonly viewHeight = 1000) {}

  get layout(): Frame[] {
    return cloneFrames(this.frames);
  }

  frame(slotId: string): Frame | undefined {
    const found = this.frames.find((f) => f.slotId === slotId);
    return found ? { ...found } : undefined;
  }

  private checkpoint(): void {
    this.undoStack.push(cloneFrames(this.frames));
    this.redoStack = [];
  }

  /** Place a freshly generated design beside the previous one, select it,
   * and zoom the viewport to it. */
  addGenerated(slotId: string, viewport: [number, number]): Frame {
    this.checkpoint();
    const [w, h] = viewport;
    let x = 0;
    if (this.frames.length > 0) {
      x = Math.max(...this.frames.map((f) => f.x + f.w)) + PLACEMENT_GAP;
    }
    const frame: Frame = {
      slotId, x, y: 0, w, h,
      z: this.frames.length ? Math.max(...this.frames.map((f) => f.z)) + 1 : 0,
    };
    this.frames.push(frame);
    this.select(slotId);
    this.zoomTo(frame);
    return { ...frame };
  }

  restoreLayout(frames: Frame[]): void {
    this.checkpoint();
    this.frames = cloneFrames(frames);
    this.selected = null;
  }

  moveFrame(slotId: string, x: number, y: number): void {
    const frame = this.mustFrame(slotId);
    this.checkpoint();
    frame.x = x;
    frame.y = y;
  }

  /** Display-size resize only; stored documents are never touched. */
  resizeFrame(slotId: string, w: number, h: number): void {
    const frame = this.mustFrame(slotId);
    if (w <= 0 || h <= 0) throw new Error("frame size must be positive");
    this.checkpoint();
    frame.w = w;
    frame.h = h;
  }

  removeFrame(slotId: string): void {
    this.mustFrame(slotId);
    this.checkpoint();
    this.frames = this.frames.filter((f) => f.slotId !== slotId);
    if (this.selected === slotId) this.selected = null;
  }

  /** Selecting raises the frame to the top of the stacking order. */
  select(slotId: string | null): void {
    this.selected = slotId;
    if (slotId === null) return;
    const frame = this.mustFrame(slotId);
    const top = Math.max(...this.frames.map((f) => f.z));
    if (frame.z < top) frame.z = top + 1;
  }

  clear(): void {
    this.checkpoint();
    this.frames = [];
    this.selected = null;
  }

  undo(): boolean {
    const previous = this.undoStack.pop();
    if (previous === undefined) return false;
    this.redoStack.push(cloneFrames(this.frames));
    this.frames = previous;
    if (this.selected && !this.frames.some((f) => f.slotId === this.selected)) {
      this.selected = null;
    }
    return true;
  }

  redo(): boolean {
    const next = this.redoStack.pop();
    if (next === undefined) return false;
    this.undoStack.push(cloneFrames(this.frames));
    this.frames = next;
    return true;
  }

  setZoom(zoom: number): number {
    this.transform.zoom = Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, zoom));
    return this.transform.zoom;
  }

  pan(dx: number, dy: number): void {
    this.transform.panX += dx;
    this.transform.panY += dy;
  }

  /** Fit a frame into the view with a small margin. */
  zoomTo(frame: Frame): void {
    const zoom = this.setZoom(
      0.9 * Math.min(this.viewWidth / frame.w, this.viewHeight / frame.h));
    this.transform.panX = this.viewWidth / 2 - (frame.x + frame.w / 2) * zoom;
    this.transform.panY = this.viewHeight / 2 - (frame.y + frame.h / 2) * zoom;
  }

  private mustFrame(slotId: string): Frame {
    const frame = this.frames.find((f) => f.slotId === slotId);
    if (!frame) throw new Error(`no frame for slot ${slotId}`);
    return frame;
  }
}
