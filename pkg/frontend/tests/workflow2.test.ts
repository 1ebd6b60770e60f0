// @vitest-environment jsdom
/**
 * Workflow 2 end to end against a fake server that honors the HTTP
 * contract: pick an element in the rendered document, apply a preset
 * edit, regenerate, watch the version indicator, and navigate back to
 * the original document byte-for-byte.
 */
import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { CanvasView } from "../src/canvas.js";
import { PanelState } from "../src/panel.js";
import { computeSelector, elementLabel } from "../src/preview.js";
import { SettingsDocument } from "../src/settings.js";
import { Workspace } from "../src/workspace.js";

interface FakeSlot {
  versions: { html: string; settings: SettingsDocument }[];
  currentIndex: number;
}

/** In-memory stand-in for the ideation service, mirroring its route
 * contract (documented envelope, version-chain semantics). */
class FakeServer {
  slots = new Map<string, FakeSlot>();
  lastGenerateBody: { settings: SettingsDocument; seed: number | null } | null = null;
  private nextSlot = 1;

  private designPayload(slotId: string, index: number) {
    const slot = this.slots.get(slotId)!;
    const version = slot.versions[index];
    return {
      id: `${slotId}-v${index}`,
      html_document: version.html,
      constraints_snapshot: version.settings,
      reference_screen_id: null,
      prompt_fingerprint: `fp-${slotId}-${index}`,
      created_at: "2026-01-01T00:00:00+00:00",
      device_viewport: version.settings.device === "Mobile" ? [390, 844]
        : version.settings.device === "Tablet" ? [768, 1024] : [1440, 900],
    };
  }

  private descriptor(slotId: string) {
    const slot = this.slots.get(slotId)!;
    return {
      slot_id: slotId,
      version_index: slot.currentIndex,
      version_count: slot.versions.length,
      design: this.designPayload(slotId, slot.currentIndex),
    };
  }

  private json(body: unknown, status = 200): Response {
    return new Response(JSON.stringify(body), {
      status, headers: { "Content-Type": "application/json" },
    });
  }

  private error(status: number, code: string, message: string): Response {
    return this.json({ error: { code, message } }, status);
  }

  fetch = async (input: string, init: RequestInit = {}): Promise<Response> => {
    const method = (init.method ?? "GET").toUpperCase();
    const url = input;
    const body = typeof init.body === "string" ? JSON.parse(init.body) : undefined;

    if (method === "POST" && url === "/designs:generate") {
      this.lastGenerateBody = body;
      const slotId = `slot-${this.nextSlot++}`;
      const html = [
        "<!DOCTYPE html>",
        "<html><head><title>generated</title></head><body>",
        `<header><h1>${body.settings.industry || "Untitled"}</h1></header>`,
        "<nav><a>home</a><a>about</a></nav>",
        `<main><p>${body.settings.product_purpose || "purpose"}</p></main>`,
        "</body></html>",
      ].join("\n");
      this.slots.set(slotId, {
        versions: [{ html, settings: body.settings }],
        currentIndex: 0,
      });
      return this.json(this.descriptor(slotId));
    }

    let m = /^\/designs\/([^/]+)\/edit$/.exec(url);
    if (method === "POST" && m) {
      const slot = this.slots.get(m[1]);
      if (!slot) return this.error(404, "not-found", "no such slot");
      const base = slot.versions[slot.currentIndex];
      const ops = [...body.preset_ops, body.free_text].filter(Boolean).join(", ");
      const marker = `<!-- edited: ${body.target_selector} (${ops}) -->`;
      const at = base.html.lastIndexOf("</html>");
      const html = base.html.slice(0, at) + marker + base.html.slice(at);
      slot.versions.push({ html, settings: base.settings });
      slot.currentIndex = slot.versions.length - 1;
      return this.json(this.descriptor(m[1]));
    }

    m = /^\/designs\/([^/]+)\/current$/.exec(url);
    if (method === "PUT" && m) {
      const slot = this.slots.get(m[1]);
      if (!slot) return this.error(404, "not-found", "no such slot");
      if (body.index < 0 || body.index >= slot.versions.length) {
        return this.error(404, "not-found", "version out of range");
      }
      slot.currentIndex = body.index;
      return this.json(this.descriptor(m[1]));
    }

    m = /^\/designs\/([^/]+)\/versions$/.exec(url);
    if (method === "GET" && m) {
      const slot = this.slots.get(m[1]);
      if (!slot) return this.error(404, "not-found", "no such slot");
      return this.json({
        slot_id: m[1],
        current_index: slot.currentIndex,
        versions: slot.versions.map((v, i) => ({
          index: i, id: `${m![1]}-v${i}`,
          created_at: "2026-01-01T00:00:00+00:00",
          prompt_fingerprint: `fp-${m![1]}-${i}`,
        })),
      });
    }

    m = /^\/designs\/([^/]+)\/versions\/(\d+)$/.exec(url);
    if (method === "GET" && m) {
      const slot = this.slots.get(m[1]);
      if (!slot) return this.error(404, "not-found", "no such slot");
      return this.json(this.designPayload(m[1], Number(m[2])));
    }

    return this.error(500, "internal", `unhandled ${method} ${url}`);
  };
}

describe("workflow 2 in the browser harness", () => {
  let server: FakeServer;
  let workspace: Workspace;
  let panel: PanelState;

  beforeEach(() => {
    server = new FakeServer();
    panel = new PanelState();
    workspace = new Workspace(
      new ApiClient("", server.fetch), panel, new CanvasView());
  });

  it("pick, preset edit, regenerate, navigate back to version 1", async () => {
    panel.setField("industry", "News");
    panel.setField("screen_type", "Home Page");
    const first = await workspace.generate();
    expect(first.versionCount).toBe(1);
    expect(first.currentIndex).toBe(0);
    const version1Html = first.displayedHtml;

    // the picker runs inside the sandboxed preview; replicate its walk on
    // the same document the iframe would render
    const dom = new DOMParser().parseFromString(version1Html, "text/html");
    const nav = dom.querySelector("nav")!;
    const selector = computeSelector(nav);
    expect(selector).toBe("body/nav[1]");

    workspace.beginEdit(first.slotId, selector, elementLabel(nav));
    workspace.pendingEdit!.presetOps.add("resize-larger");
    const second = await workspace.regenerate();

    // version indicator increments: displaying version 2 of 2
    expect(second.versionCount).toBe(2);
    expect(second.currentIndex).toBe(1);
    expect(second.displayedHtml).toContain("edited: body/nav[1]");
    expect(second.displayedHtml).toContain("resize-larger");

    // back-navigation restores version 1's exact document
    const back = await workspace.navigateBack(first.slotId);
    expect(back.currentIndex).toBe(0);
    expect(back.displayedHtml).toBe(version1Html);

    // and forward returns to version 2, unchanged
    const forward = await workspace.navigateForward(first.slotId);
    expect(forward.currentIndex).toBe(1);
    expect(forward.displayedHtml).toBe(second.displayedHtml);
  });

  it("regenerate without a picked element is refused", async () => {
    await workspace.generate();
    expect(() => workspace.regenerate()).toThrow(/no element selected/);
  });

  it("regenerate with an empty modification box is refused", async () => {
    const view = await workspace.generate();
    workspace.beginEdit(view.slotId, "body/nav[1]", "nav");
    expect(() => workspace.regenerate()).toThrow(/preset option or describe/);
  });

  it("generate request body preserves locked values end to end", async () => {
    panel.setField("colors", ["#2C3E50", "#18BC9C"]);
    panel.setField("device", "Mobile");
    panel.toggleLock("colors");
    panel.toggleLock("device");
    panel.setField("colors", ["#FFFFFF"]);  // blocked
    panel.setField("device", "Desktop");    // blocked
    panel.setField("target_audience", "students");  // applies

    const view = await workspace.generate();
    const sent = server.lastGenerateBody!.settings;
    expect(sent.colors).toEqual(["#2C3E50", "#18BC9C"]);
    expect(sent.device).toBe("Mobile");
    expect(sent.target_audience).toBe("students");
    expect(view.viewport).toEqual([390, 844]);
  });

  it("invalid form state blocks generation client-side", async () => {
    panel.setField("colors", ["not-a-color"]);
    await expect(workspace.generate()).rejects.toThrow(/fix the form/);
    expect(server.lastGenerateBody).toBeNull();
  });
});
