// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import {
  PICKER_SCRIPT,
  SANDBOX_ATTRIBUTE,
  buildSrcdoc,
  computeSelector,
  elementLabel,
} from "../src/preview.js";

function documentFrom(html: string): Document {
  const parser = new DOMParser();
  return parser.parseFromString(html, "text/html");
}

describe("computeSelector", () => {
  const doc = documentFrom(`
    <html><body>
      <div id="first"><nav id="menu"><a>one</a><a id="second-link">two</a></nav></div>
      <div id="second"><p id="para">text</p></div>
    </body></html>`);

  it("addresses elements by tag + ordinal path from body", () => {
    expect(computeSelector(doc.getElementById("menu")!)).toBe("body/div[1]/nav[1]");
    expect(computeSelector(doc.getElementById("para")!)).toBe("body/div[2]/p[1]");
  });

  it("counts ordinals among same-tag siblings only", () => {
    expect(computeSelector(doc.getElementById("second-link")!))
      .toBe("body/div[1]/nav[1]/a[2]");
  });

  it("labels elements with tag and trimmed text", () => {
    expect(elementLabel(doc.getElementById("para")!)).toBe("p: text");
    const nav = doc.getElementById("menu")!;
    expect(elementLabel(nav).startsWith("nav:")).toBe(true);
  });
});

describe("buildSrcdoc", () => {
  it("injects the picker before the closing body tag", () => {
    const html = "<html><body><h1>hi</h1></body></html>";
    const srcdoc = buildSrcdoc(html);
    expect(srcdoc).toContain("pick-result");
    expect(srcdoc.indexOf("<script>")).toBeLessThan(srcdoc.indexOf("</body>"));
    expect(srcdoc.startsWith("<html><body><h1>hi</h1>")).toBe(true);
  });

  it("appends the picker when no body close tag exists", () => {
    const srcdoc = buildSrcdoc("<div>fragment</div>");
    expect(srcdoc.startsWith("<div>fragment</div>")).toBe(true);
    expect(srcdoc).toContain("pick-request");
  });

  it("uses a script-only sandbox", () => {
    expect(SANDBOX_ATTRIBUTE).toBe("allow-scripts");
    expect(SANDBOX_ATTRIBUTE).not.toContain("allow-same-origin");
  });

  it("bridge protocol covers request, cancel, and result", () => {
    for (const marker of ["pick-request", "pick-cancel", "pick-result"]) {
      expect(PICKER_SCRIPT).toContain(marker);
    }
  });
});
