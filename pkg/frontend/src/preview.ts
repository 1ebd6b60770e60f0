/**
 * Sandboxed design previews and the element-picker bridge.
 *
 * Each design renders inside an iframe with sandbox="allow-scripts" and
 * no allow-same-origin, so generated code cannot reach the app. The picker
 * protocol runs over postMessage:
 *
 *   parent -> iframe: { type: "pick-request" } | { type: "pick-cancel" }
 *   iframe -> parent: { type: "pick-result", selector, label }
 *
 * Selectors address elements by tag + ordinal path from body, e.g.
 * "body/div[1]/nav[1]": stable across re-renders of the same document and
 * meaningful to the edit prompt.
 */

export interface PickResult {
  type: "pick-result";
  selector: string;
  label: string;
}

export const SANDBOX_ATTRIBUTE = "allow-scripts";

/** Tag + ordinal path from body down to the element (1-based ordinals,
 * counted among same-tag siblings). */
export function computeSelector(element: Element): string {
  const parts: string[] = [];
  let node: Element | null = element;
  while (node && node.tagName.toLowerCase() !== "body"
         && node.tagName.toLowerCase() !== "html") {
    const tag = node.tagName.toLowerCase();
    const parent: Element | null = node.parentElement;
    let ordinal = 1;
    if (parent) {
      for (const sibling of Array.from(parent.children)) {
        if (sibling === node) break;
        if (sibling.tagName === node.tagName) ordinal += 1;
      }
    }
    parts.unshift(`${tag}[${ordinal}]`);
    node = parent;
  }
  return "body/" + parts.join("/");
}

export function elementLabel(element: Element): string {
  const text = (element.textContent ?? "").trim().replace(/\s+/g, " ");
  const tag = element.tagName.toLowerCase();
  return text ? `${tag}: ${text.slice(0, 40)}` : tag;
}

/** Script injected into the preview document. Duplicates computeSelector's
 * walk because the sandboxed frame cannot import modules. */
export const PICKER_SCRIPT = `<script>
(function () {
  "use strict";
  var picking = false;
  var lastOutlined = null;

  function selectorFor(el) {
    var parts = [];
    var node = el;
    while (node && node.tagName && node.tagName.toLowerCase() !== "body"
           && node.tagName.toLowerCase() !== "html") {
      var tag = node.tagName.toLowerCase();
      var parent = node.parentElement;
      var ordinal = 1;
      if (parent) {
        var kids = parent.children;
        for (var i = 0; i < kids.length; i++) {
          if (kids[i] === node) break;
          if (kids[i].tagName === node.tagName) ordinal += 1;
        }
      }
      parts.unshift(tag + "[" + ordinal + "]");
      node = parent;
    }
    return "body/" + parts.join("/");
  }

  function labelFor(el) {
    var text = (el.textContent || "").trim().replace(/\\s+/g, " ");
    var tag = el.tagName.toLowerCase();
    return text ? tag + ": " + text.slice(0, 40) : tag;
  }

  function clearOutline() {
    if (lastOutlined) {
      lastOutlined.style.outline = "";
      lastOutlined = null;
    }
  }

  document.addEventListener("mouseover", function (ev) {
    if (!picking) return;
    clearOutline();
    lastOutlined = ev.target;
    lastOutlined.style.outline = "2px solid #2563EB";
  }, true);

  document.addEventListener("click", function (ev) {
    if (!picking) return;
    ev.preventDefault();
    ev.stopPropagation();
    picking = false;
    clearOutline();
    window.parent.postMessage({
      type: "pick-result",
      selector: selectorFor(ev.target),
      label: labelFor(ev.target)
    }, "*");
  }, true);

  window.addEventListener("message", function (ev) {
    if (!ev.data || typeof ev.data !== "object") return;
    if (ev.data.type === "pick-request") picking = true;
    if (ev.data.type === "pick-cancel") { picking = false; clearOutline(); }
  });
})();
</script>`;

/** Build the srcdoc for a preview frame: the design plus the picker. */
export function buildSrcdoc(htmlDocument: string): string {
  const lower = htmlDocument.toLowerCase();
  const at = lower.lastIndexOf("</body>");
  if (at >= 0) {
    return htmlDocument.slice(0, at) + PICKER_SCRIPT + htmlDocument.slice(at);
  }
  return htmlDocument + PICKER_SCRIPT;
}

/** True when a window message is a pick-result from the given frame. */
export function isPickResult(event: MessageEvent, frame: HTMLIFrameElement): event is MessageEvent<PickResult> {
  return event.source === frame.contentWindow
    && typeof event.data === "object" && event.data !== null
    && event.data.type === "pick-result"
    && typeof event.data.selector === "string";
}
