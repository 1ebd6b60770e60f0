/**
 * Browser entry point: wires the constraint side panel, the canvas of
 * sandboxed previews, the selection toolbar, the modification box, the
 * version navigator, favorites, and canvas collections onto the DOM.
 */

import { ApiClient, ApiError } from "./api.js";
import { CanvasView } from "./canvas.js";
import { GALLERY } from "./gallery.js";
import { PanelState } from "./panel.js";
import {
  SANDBOX_ATTRIBUTE,
  buildSrcdoc,
  isPickResult,
} from "./preview.js";
import {
  DESIGN_THEMES,
  DEVICES,
  FieldName,
  STYLES,
} from "./settings.js";
import { Workspace } from "./workspace.js";

const api = new ApiClient("");
const panel = new PanelState();
const canvas = new CanvasView(window.innerWidth - 340, window.innerHeight - 60);
const workspace = new Workspace(api, panel, canvas);

const frames = new Map<string, HTMLIFrameElement>();

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function notice(message: string): void {
  const box = document.getElementById("notices")!;
  const item = el("div", "notice", message);
  const dismiss = el("button", "notice-dismiss", "x");
  dismiss.onclick = () => item.remove();
  item.appendChild(dismiss);
  box.appendChild(item);
  setTimeout(() => item.remove(), 8000);
}

async function guard<T>(work: () => Promise<T>): Promise<T | undefined> {
  try {
    return await work();
  } catch (err) {
    notice(err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
    return undefined;
  }
}

/* ---------------- landing gallery ---------------- */

function renderGallery(): void {
  const root = document.getElementById("app")!;
  root.innerHTML = "";
  const page = el("div", "gallery");
  page.appendChild(el("h1", "", "briefcanvas"));
  page.appendChild(el("p", "",
    "Structured constraints in, design prototypes out. Examples below show "
    + "settings and the designs they produced. Log in to start."));

  const grid = el("div", "gallery-grid");
  for (const example of GALLERY) {
    const card = el("div", "gallery-card");
    card.appendChild(el("h3", "", example.title));
    const frame = el("iframe", "gallery-frame");
    frame.setAttribute("sandbox", SANDBOX_ATTRIBUTE);
    frame.srcdoc = example.html;
    card.appendChild(frame);
    const spec = el("pre", "gallery-spec",
      JSON.stringify(example.settings, null, 2));
    card.appendChild(spec);
    grid.appendChild(card);
  }
  page.appendChild(grid);

  const form = el("div", "login-form");
  const user = el("input");
  user.placeholder = "login";
  const pass = el("input");
  pass.type = "password";
  pass.placeholder = "password";
  const button = el("button", "", "Log in");
  button.onclick = () => guard(async () => {
    await api.login(user.value, pass.value);
    renderWorkspace();
  });
  form.append(user, pass, button);
  page.appendChild(form);
  root.appendChild(page);
}

/* ---------------- side panel ---------------- */

function lockButton(field: FieldName): HTMLButtonElement {
  const button = el("button", "lock-toggle", panel.isLocked(field) ? "locked" : "open");
  button.title = "Keep this constraint fixed across generations";
  button.onclick = () => {
    panel.toggleLock(field);
    button.textContent = panel.isLocked(field) ? "locked" : "open";
    button.classList.toggle("is-locked", panel.isLocked(field));
  };
  button.classList.toggle("is-locked", panel.isLocked(field));
  return button;
}

function fieldRow(label: string, field: FieldName, input: HTMLElement): HTMLElement {
  const row = el("div", "field-row");
  const caption = el("label", "", label);
  row.append(caption, input, lockButton(field));
  return row;
}

function rejectIfLocked(field: FieldName): boolean {
  if (panel.isLocked(field)) {
    notice(`"${field}" is locked; unlock it to edit`);
    return true;
  }
  return false;
}

function selectInput(field: FieldName, options: string[],
                     allowEmpty: boolean): HTMLSelectElement {
  const select = el("select");
  if (allowEmpty) select.appendChild(el("option", "", ""));
  for (const option of options) {
    const node = el("option", "", option);
    node.value = option;
    select.appendChild(node);
  }
  select.value = String(panel.value(field) ?? "");
  select.onchange = () => {
    if (rejectIfLocked(field)) {
      select.value = String(panel.value(field) ?? "");
      return;
    }
    const value = select.value === "" ? null : select.value;
    panel.setField(field, value as never);
  };
  return select;
}

function textInput(field: FieldName): HTMLInputElement {
  const input = el("input");
  input.value = String(panel.value(field) ?? "");
  input.onchange = () => {
    if (rejectIfLocked(field)) {
      input.value = String(panel.value(field) ?? "");
      return;
    }
    panel.setField(field, input.value as never);
  };
  return input;
}

function listInput(field: FieldName, max: number, placeholder: string): HTMLInputElement {
  const input = el("input");
  input.placeholder = placeholder;
  input.value = (panel.value(field) as string[]).join(", ");
  input.onchange = () => {
    if (rejectIfLocked(field)) {
      input.value = (panel.value(field) as string[]).join(", ");
      return;
    }
    const values = input.value.split(",").map((v) => v.trim()).filter(Boolean);
    if (values.length > max) {
      notice(`at most ${max} entries`);
      return;
    }
    panel.setField(field, values as never);
  };
  return input;
}

function renderPanel(options: {
  industries: string[]; screen_types: string[]; styles: string[];
  design_themes: string[]; fonts: string[];
}): HTMLElement {
  const side = el("aside", "side-panel");
  side.appendChild(el("h2", "", "Constraints"));
  side.appendChild(fieldRow("Industry", "industry",
    selectInput("industry", options.industries, true)));
  side.appendChild(fieldRow("Product purpose", "product_purpose",
    textInput("product_purpose")));
  side.appendChild(fieldRow("Target audience", "target_audience",
    textInput("target_audience")));
  side.appendChild(fieldRow("Device", "device",
    selectInput("device", [...DEVICES], false)));
  side.appendChild(fieldRow("Screen type", "screen_type",
    selectInput("screen_type", options.screen_types, true)));
  side.appendChild(fieldRow("Colors (up to 5)", "colors",
    listInput("colors", 5, "#2C3E50, #18BC9C")));
  side.appendChild(fieldRow("Fonts (up to 3)", "fonts",
    listInput("fonts", 3, "Lato, Montserrat")));
  side.appendChild(fieldRow("Style", "style",
    selectInput("style", [...STYLES], true)));
  side.appendChild(fieldRow("Design theme", "design_theme",
    selectInput("design_theme", [...DESIGN_THEMES], true)));
  side.appendChild(fieldRow("Others", "features_text", textInput("features_text")));

  const logoRow = el("div", "field-row");
  const logoInput = el("input");
  logoInput.type = "file";
  logoInput.accept = "image/*";
  logoInput.onchange = () => guard(async () => {
    if (rejectIfLocked("logo") || !logoInput.files?.length) return;
    const file = logoInput.files[0];
    const asset = await api.uploadAsset(file, file.name, "logo");
    panel.setField("logo", asset.id);
    notice(`logo uploaded (${asset.id})`);
  });
  logoRow.append(el("label", "", "Logo"), logoInput, lockButton("logo"));
  side.appendChild(logoRow);

  const generate = el("button", "generate-button", "Generate design");
  generate.onclick = () => guard(async () => {
    generate.disabled = true;
    try {
      const view = await workspace.generate();
      renderFrame(view.slotId, view.displayedHtml, view.viewport);
      refreshCanvasLayout();
    } finally {
      generate.disabled = false;
    }
  });
  side.appendChild(generate);

  const importButton = el("button", "", "Import Settings");
  const importFile = el("input");
  importFile.type = "file";
  importFile.accept = "application/json";
  importFile.style.display = "none";
  importFile.onchange = () => guard(async () => {
    if (!importFile.files?.length) return;
    panel.loadDocument(await importFile.files[0].text());
    renderWorkspace();
  });
  importButton.onclick = () => importFile.click();

  const exportButton = el("button", "", "Export Settings");
  exportButton.onclick = () => {
    const blob = new Blob([panel.exportDocument()], { type: "application/json" });
    const link = el("a");
    link.href = URL.createObjectURL(blob);
    link.download = "settings.json";
    link.click();
    URL.revokeObjectURL(link.href);
  };
  side.append(importButton, importFile, exportButton);
  return side;
}

/* ---------------- canvas, toolbar, navigator ---------------- */

function refreshCanvasLayout(): void {
  const surface = document.getElementById("canvas-surface");
  if (!surface) return;
  const { panX, panY, zoom } = canvas.transform;
  surface.style.transform = `translate(${panX}px, ${panY}px) scale(${zoom})`;
  for (const frame of canvas.layout) {
    const holder = document.getElementById(`holder-${frame.slotId}`);
    if (!holder) continue;
    holder.style.left = `${frame.x}px`;
    holder.style.top = `${frame.y}px`;
    holder.style.width = `${frame.w}px`;
    holder.style.height = `${frame.h}px`;
    holder.style.zIndex = String(frame.z);
    holder.classList.toggle("selected", canvas.selected === frame.slotId);
  }
}

function renderFrame(slotId: string, html: string, viewport: [number, number]): void {
  const surface = document.getElementById("canvas-surface")!;
  let holder = document.getElementById(`holder-${slotId}`);
  if (!holder) {
    holder = el("div", "design-holder");
    holder.id = `holder-${slotId}`;
    const iframe = el("iframe", "design-frame");
    iframe.setAttribute("sandbox", SANDBOX_ATTRIBUTE);
    iframe.width = String(viewport[0]);
    iframe.height = String(viewport[1]);
    frames.set(slotId, iframe);
    const topbar = el("div", "frame-topbar");
    topbar.onclick = () => {
      canvas.select(slotId);
      renderToolbar(slotId);
      refreshCanvasLayout();
    };
    holder.append(topbar, iframe, navigatorBar(slotId));
    surface.appendChild(holder);
  }
  frames.get(slotId)!.srcdoc = buildSrcdoc(html);
  updateNavigator(slotId);
  refreshCanvasLayout();
}

function navigatorBar(slotId: string): HTMLElement {
  const bar = el("div", "version-nav");
  bar.id = `nav-${slotId}`;
  const back = el("button", "", "<");
  back.onclick = () => guard(async () => {
    const view = await workspace.navigateBack(slotId);
    renderFrame(slotId, view.displayedHtml, view.viewport);
  });
  const indicator = el("span", "version-indicator", "1 / 1");
  const forward = el("button", "", ">");
  forward.onclick = () => guard(async () => {
    const view = await workspace.navigateForward(slotId);
    renderFrame(slotId, view.displayedHtml, view.viewport);
  });
  bar.append(back, indicator, forward);
  return bar;
}

function updateNavigator(slotId: string): void {
  const view = workspace.slots.get(slotId);
  const bar = document.getElementById(`nav-${slotId}`);
  if (!view || !bar) return;
  bar.querySelector(".version-indicator")!.textContent =
    `${view.currentIndex + 1} / ${view.versionCount}`;
}

function renderToolbar(slotId: string): void {
  const bar = document.getElementById("toolbar")!;
  bar.innerHTML = "";
  const actions: [string, () => void][] = [
    ["Delete", () => void guard(async () => {
      await workspace.remove(slotId);
      document.getElementById(`holder-${slotId}`)?.remove();
      bar.innerHTML = "";
    })],
    ["Duplicate", () => void guard(async () => {
      const view = await workspace.duplicate(slotId);
      renderFrame(view.slotId, view.displayedHtml, view.viewport);
    })],
    ["Edit", () => beginPick(slotId)],
    ["Save to Favorites", () => openFavoritesPopup(slotId)],
    ["Download", () => void guard(async () => {
      const html = await workspace.download(slotId);
      const blob = new Blob([html], { type: "text/html" });
      const link = el("a");
      link.href = URL.createObjectURL(blob);
      link.download = `${slotId}.html`;
      link.click();
      URL.revokeObjectURL(link.href);
    })],
    ["Specifications", () => void guard(async () => {
      const sheet = await api.specSheet(slotId);
      openSheet(sheet);
    })],
  ];
  for (const [label, onClick] of actions) {
    const button = el("button", "toolbar-button", label);
    button.onclick = onClick;
    bar.appendChild(button);
  }
}

/* ---------------- workflow 2: pick + modification box ---------------- */

function beginPick(slotId: string): void {
  const iframe = frames.get(slotId);
  if (!iframe) return;
  iframe.contentWindow?.postMessage({ type: "pick-request" }, "*");
  notice("click the part of the design you want to change");

  const onMessage = (event: MessageEvent) => {
    if (!isPickResult(event, iframe)) return;
    window.removeEventListener("message", onMessage);
    workspace.beginEdit(slotId, event.data.selector, event.data.label);
    openModificationBox(slotId, event.data.label);
  };
  window.addEventListener("message", onMessage);
}

function openModificationBox(slotId: string, label: string): void {
  closeDialogs();
  const box = el("div", "modification-box");
  box.id = "modification-box";
  box.appendChild(el("h3", "", `Modify: ${label}`));

  const presets: [string, string][] = [
    ["resize-smaller", "Smaller"],
    ["resize-larger", "Larger"],
    ["alter-color-scheme", "Color scheme"],
    ["alter-typography", "Typography"],
  ];
  for (const [op, caption] of presets) {
    const check = el("input");
    check.type = "checkbox";
    check.onchange = () => {
      const edit = workspace.pendingEdit!;
      if (check.checked) edit.presetOps.add(op);
      else edit.presetOps.delete(op);
    };
    const row = el("label", "preset-row", caption);
    row.prepend(check);
    box.appendChild(row);
  }

  const freeText = el("textarea");
  freeText.placeholder = "Describe the change in detail";
  freeText.onchange = () => {
    workspace.pendingEdit!.freeText = freeText.value;
  };
  box.appendChild(freeText);

  const regenerate = el("button", "regenerate-button", "Regenerate Design");
  regenerate.onclick = () => guard(async () => {
    regenerate.disabled = true;
    try {
      const view = await workspace.regenerate();
      renderFrame(slotId, view.displayedHtml, view.viewport);
      box.remove();
    } finally {
      regenerate.disabled = false;
    }
  });
  box.appendChild(regenerate);
  document.body.appendChild(box);
}

/* ---------------- favorites + collections ---------------- */

function closeDialogs(): void {
  document.getElementById("modification-box")?.remove();
  document.getElementById("favorites-popup")?.remove();
  document.getElementById("sheet-view")?.remove();
}

function openSheet(text: string): void {
  closeDialogs();
  const sheet = el("div", "sheet-view");
  sheet.id = "sheet-view";
  sheet.appendChild(el("pre", "", text));
  const close = el("button", "", "Close");
  close.onclick = () => sheet.remove();
  sheet.appendChild(close);
  document.body.appendChild(sheet);
}

function openFavoritesPopup(slotId: string): void {
  closeDialogs();
  void guard(async () => {
    const folders = await api.listFolders();
    const popup = el("div", "favorites-popup");
    popup.id = "favorites-popup";
    popup.appendChild(el("h3", "", "Save to Favorites"));
    const select = el("select");
    for (const folder of folders) {
      const option = el("option", "", folder.name);
      option.value = folder.id;
      select.appendChild(option);
    }
    const newName = el("input");
    newName.placeholder = "or create a new folder";
    const save = el("button", "", "Save");
    save.onclick = () => guard(async () => {
      const useNew = newName.value.trim().length > 0;
      await workspace.saveToFavorites(
        slotId, useNew ? null : select.value || null, newName.value.trim());
      popup.remove();
      notice("saved to favorites");
    });
    popup.append(select, newName, save);
    document.body.appendChild(popup);
  });
}

function renderTopBar(): HTMLElement {
  const bar = el("header", "top-bar");
  const canvasName = el("input");
  canvasName.placeholder = "canvas name";
  const saveCanvas = el("button", "", "Save Canvas");
  saveCanvas.onclick = () => guard(async () => {
    await workspace.saveCanvas(canvasName.value || "Untitled canvas");
    notice("canvas saved");
  });
  const collections = el("button", "", "Canvas Collections");
  collections.onclick = () => guard(async () => {
    const listing = await api.listCanvases();
    const names = listing.map((c) => `${c.name} (${c.id})`).join("\n");
    openSheet(names || "no saved canvases");
  });
  const favorites = el("button", "", "Favorites");
  favorites.onclick = () => guard(async () => {
    const folders = await api.listFolders();
    openSheet(folders.map((f) => `${f.name}: ${f.entry_count} designs`).join("\n")
      || "no folders yet");
  });
  const undo = el("button", "", "Undo");
  undo.onclick = () => { canvas.undo(); refreshCanvasLayout(); };
  const redo = el("button", "", "Redo");
  redo.onclick = () => { canvas.redo(); refreshCanvasLayout(); };
  const clear = el("button", "", "Clear Canvas");
  clear.onclick = () => {
    canvas.clear();
    document.getElementById("canvas-surface")!.innerHTML = "";
    refreshCanvasLayout();
  };
  bar.append(canvasName, saveCanvas, collections, favorites, undo, redo, clear);
  return bar;
}

/* ---------------- assembly ---------------- */

function renderWorkspace(): void {
  void guard(async () => {
    const options = await api.options();
    const root = document.getElementById("app")!;
    root.innerHTML = "";
    root.appendChild(renderTopBar());
    const layout = el("div", "workspace-layout");
    layout.appendChild(renderPanel(options));
    const canvasArea = el("div", "canvas-area");
    canvasArea.id = "canvas-area";
    const surface = el("div", "canvas-surface");
    surface.id = "canvas-surface";
    canvasArea.appendChild(surface);
    const toolbar = el("div", "toolbar");
    toolbar.id = "toolbar";
    canvasArea.appendChild(toolbar);
    layout.appendChild(canvasArea);
    root.appendChild(layout);
    refreshCanvasLayout();
  });
}

document.addEventListener("DOMContentLoaded", () => {
  const notices = el("div");
  notices.id = "notices";
  document.body.appendChild(notices);
  renderGallery();
});
