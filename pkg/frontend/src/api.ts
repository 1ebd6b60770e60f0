/**
 * Typed client for the ideation service HTTP API. The UI performs no
 * constraint logic of its own beyond mirrored validation; everything goes
 * through these routes.
 */

import { SettingsDocument } from "./settings.js";

export interface DesignPayload {
  id: string;
  html_document: string;
  constraints_snapshot: SettingsDocument;
  reference_screen_id: string | null;
  prompt_fingerprint: string;
  created_at: string;
  device_viewport: [number, number];
}

export interface VersionDescriptor {
  slot_id: string;
  version_index: number;
  version_count: number;
  design: DesignPayload;
}

export interface VersionsListing {
  slot_id: string;
  current_index: number;
  versions: { index: number; id: string; created_at: string; prompt_fingerprint: string }[];
}

export interface EditRequest {
  target_selector: string;
  preset_ops: string[];
  free_text: string;
}

export interface CanvasPayload {
  id?: string;
  name: string;
  slots: { slot_id: string; x: number; y: number; w: number; h: number; z: number }[];
  panel_state: SettingsDocument;
  [extra: string]: unknown;
}

export interface OptionLists {
  industries: string[];
  screen_types: string[];
  styles: string[];
  design_themes: string[];
  fonts: string[];
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly code: string,
    readonly status: number,
    readonly details?: unknown,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  token: string | null = null;

  constructor(
    readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(method: string, path: string, init: RequestInit = {}): Promise<Response> {
    const headers = new Headers(init.headers);
    if (this.token) headers.set("Authorization", `Bearer ${this.token}`);
    const response = await this.fetchImpl(this.baseUrl + path, { ...init, method, headers });
    if (!response.ok) {
      let code = "internal";
      let message = `HTTP ${response.status}`;
      let details: unknown;
      try {
        const body = await response.json();
        code = body?.error?.code ?? code;
        message = body?.error?.message ?? message;
        details = body?.error?.details;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(message, code, response.status, details);
    }
    return response;
  }

  private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = {};
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    return (await this.request(method, path, init)).json() as Promise<T>;
  }

  async login(username: string, password: string): Promise<void> {
    const data = await this.json<{ token: string }>("POST", "/auth/login",
                                                    { username, password });
    this.token = data.token;
  }

  async logout(): Promise<void> {
    await this.json("POST", "/auth/logout");
    this.token = null;
  }

  options(): Promise<OptionLists> {
    return this.json("GET", "/catalog/options");
  }

  generate(settings: SettingsDocument, seed?: number): Promise<VersionDescriptor> {
    return this.json("POST", "/designs:generate",
                     { settings, seed: seed ?? null });
  }

  edit(slotId: string, req: EditRequest): Promise<VersionDescriptor> {
    return this.json("POST", `/designs/${slotId}/edit`, req);
  }

  versions(slotId: string): Promise<VersionsListing> {
    return this.json("GET", `/designs/${slotId}/versions`);
  }

  version(slotId: string, index: number): Promise<DesignPayload> {
    return this.json("GET", `/designs/${slotId}/versions/${index}`);
  }

  async download(slotId: string, index: number): Promise<string> {
    const response = await this.request(
      "GET", `/designs/${slotId}/versions/${index}/download`);
    return response.text();
  }

  navigate(slotId: string, index: number): Promise<VersionDescriptor> {
    return this.json("PUT", `/designs/${slotId}/current`, { index });
  }

  duplicate(slotId: string): Promise<VersionDescriptor> {
    return this.json("POST", `/designs/${slotId}/duplicate`);
  }

  deleteSlot(slotId: string): Promise<void> {
    return this.json("DELETE", `/designs/${slotId}`);
  }

  async specSheet(slotId: string): Promise<string> {
    return (await this.request("GET", `/designs/${slotId}/spec-sheet`)).text();
  }

  adherence(slotId: string, versionIndex?: number): Promise<unknown> {
    return this.json("POST", `/designs/${slotId}/adherence`,
                     { version_index: versionIndex ?? null });
  }

  saveCanvas(payload: CanvasPayload): Promise<{ id: string }> {
    if (payload.id) {
      return this.json("PUT", `/canvases/${payload.id}`, payload);
    }
    return this.json("POST", "/canvases", payload);
  }

  listCanvases(): Promise<{ id: string; name: string; saved_at: string }[]> {
    return this.json("GET", "/canvases");
  }

  loadCanvas(id: string): Promise<CanvasPayload> {
    return this.json("GET", `/canvases/${id}`);
  }

  deleteCanvas(id: string): Promise<void> {
    return this.json("DELETE", `/canvases/${id}`);
  }

  createFolder(name: string): Promise<{ id: string; name: string }> {
    return this.json("POST", "/folders", { name });
  }

  listFolders(): Promise<{ id: string; name: string; entry_count: number }[]> {
    return this.json("GET", "/folders");
  }

  deleteFolder(id: string): Promise<void> {
    return this.json("DELETE", `/folders/${id}`);
  }

  saveToFavorites(folderId: string, slotId: string, versionIndex?: number): Promise<unknown> {
    return this.json("POST", `/folders/${folderId}/entries`,
                     { slot_id: slotId, version_index: versionIndex ?? null });
  }

  folderEntries(folderId: string): Promise<{ id: string; entries: Record<string, unknown>[] }> {
    return this.json("GET", `/folders/${folderId}`);
  }

  async uploadAsset(data: Blob, filename: string, kind: string): Promise<{ id: string; url: string }> {
    const form = new FormData();
    form.append("file", data, filename);
    form.append("kind", kind);
    return (await this.request("POST", "/assets", { body: form })).json();
  }

  async importSettings(fileText: string): Promise<string> {
    const response = await this.request("POST", "/settings/import", { body: fileText });
    return response.text();
  }

  async exportSettings(settings: SettingsDocument): Promise<string> {
    const response = await this.request("POST", "/settings/export", {
      body: JSON.stringify({ settings }),
      headers: { "Content-Type": "application/json" },
    });
    return response.text();
  }
}
