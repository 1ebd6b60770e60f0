"""Structural scan of an HTML document for constraint checking.

A single parse pass collects everything the adherence checks need: inline
style attributes, <style> element contents, class tokens, stylesheet links,
image sources, presentational color attributes, and the style/class info of
the root-level elements (html, body, and body's direct children).

CSS handling is intentionally shallow: declarations are split on ';'/':'
and rules matched with a brace scanner, which is enough for generated
prototype markup. External stylesheets are not fetched.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser

VOID_ELEMENTS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)

# Attributes whose value is a color in legacy/presentational HTML.
COLOR_ATTRS = frozenset(("bgcolor", "color", "text", "link", "alink", "vlink", "fill", "stroke"))

_HEX_TOKEN_RE = re.compile(r"#([0-9a-fA-F]{6}|[0-9a-fA-F]{3})\b")
_RGB_RE = re.compile(
    r"rgba?\(\s*(\d{1,3})\s*[,\s]\s*(\d{1,3})\s*[,\s]\s*(\d{1,3})\s*(?:[,/][^)]*)?\)"
)
_PX_RE = re.compile(r"^(\d+(?:\.\d+)?)px$")
_RULE_RE = re.compile(r"([^{}]+)\{([^{}]*)\}")
_COMMENT_RE = re.compile(r"/\*.*?\*/", re.S)

# Utility-class prefixes that carry a color value (framework CSS resolved
# via the bundled palette table; see adherence module).
COLOR_UTILITY_PREFIXES = (
    "bg", "text", "border", "from", "via", "to", "fill", "stroke", "ring",
    "accent", "caret", "divide", "outline", "decoration", "placeholder", "shadow",
)


@dataclass
class RootElement:
    """html, body, or a direct child of body; carries width-relevant bits."""

    tag: str
    style: str
    classes: list[str]


@dataclass
class ScannedDocument:
    style_attrs: list[str] = field(default_factory=list)
    style_texts: list[str] = field(default_factory=list)
    class_tokens: list[str] = field(default_factory=list)
    link_hrefs: list[str] = field(default_factory=list)
    img_srcs: list[str] = field(default_factory=list)
    attr_colors: list[str] = field(default_factory=list)
    root_elements: list[RootElement] = field(default_factory=list)
    tag_count: int = 0


class _Scanner(HTMLParser):
    def __init__(self, doc: ScannedDocument):
        super().__init__(convert_charrefs=True)
        self.doc = doc
        self._stack: list[str] = []
        self._in_style = False

    def handle_starttag(self, tag, attrs):
        self._collect(tag, dict(attrs))
        if tag not in VOID_ELEMENTS:
            self._stack.append(tag)
        if tag == "style":
            self._in_style = True

    def handle_startendtag(self, tag, attrs):
        self._collect(tag, dict(attrs))

    def handle_endtag(self, tag):
        if tag == "style":
            self._in_style = False
        while self._stack:
            popped = self._stack.pop()
            if popped == tag:
                break

    def handle_data(self, data):
        if self._in_style:
            self.doc.style_texts.append(data)

    def _collect(self, tag, attrs):
        doc = self.doc
        doc.tag_count += 1
        style = attrs.get("style") or ""
        classes = (attrs.get("class") or "").split()
        if style:
            doc.style_attrs.append(style)
        doc.class_tokens.extend(classes)
        if tag == "link" and attrs.get("href"):
            doc.link_hrefs.append(attrs["href"])
        if tag == "img" and attrs.get("src"):
            doc.img_srcs.append(attrs["src"])
        for name, value in attrs.items():
            if name in COLOR_ATTRS and value:
                doc.attr_colors.append(value)
        if tag in ("html", "body") or (self._stack and self._stack[-1] == "body"):
            doc.root_elements.append(RootElement(tag=tag, style=style, classes=classes))


def scan_html(text: str) -> ScannedDocument:
    """Parse a document and collect the constraint-relevant pieces."""
    doc = ScannedDocument()
    scanner = _Scanner(doc)
    scanner.feed(text)
    scanner.close()
    return doc


def normalize_color_token(token: str) -> str | None:
    """Normalize a '#hex' token to uppercase 6-digit form, or None."""
    m = _HEX_TOKEN_RE.match(token)
    if not m:
        return None
    digits = m.group(1)
    if len(digits) == 3:
        digits = "".join(ch * 2 for ch in digits)
    return "#" + digits.upper()


def colors_in_text(fragment: str) -> set[str]:
    """All colors in a CSS/attribute fragment, as normalized 6-digit hex.

    Matches 3- and 6-digit hex in any case plus integer rgb()/rgba() forms.
    """
    found: set[str] = set()
    for m in _HEX_TOKEN_RE.finditer(fragment):
        digits = m.group(1)
        if len(digits) == 3:
            digits = "".join(ch * 2 for ch in digits)
        found.add("#" + digits.upper())
    for m in _RGB_RE.finditer(fragment):
        r, g, b = (int(v) for v in m.groups())
        if max(r, g, b) <= 255:
            found.add(f"#{r:02X}{g:02X}{b:02X}")
    return found


def parse_declarations(css_fragment: str) -> list[tuple[str, str]]:
    """Split 'prop: value; prop: value' into (prop, value) pairs."""
    out = []
    for chunk in css_fragment.split(";"):
        prop, sep, value = chunk.partition(":")
        if sep:
            out.append((prop.strip().lower(), value.strip()))
    return out


def iter_css_rules(style_text: str):
    """Yield (selector, body) pairs from a stylesheet fragment.

    Nested at-rule bodies (e.g. media queries) are not descended into;
    generated prototypes keep rules flat.
    """
    cleaned = _COMMENT_RE.sub("", style_text)
    for m in _RULE_RE.finditer(cleaned):
        yield m.group(1).strip(), m.group(2)


def px_value(value: str) -> float | None:
    """The numeric pixel count of a 'NNNpx' CSS value, else None."""
    m = _PX_RE.match(value.strip())
    return float(m.group(1)) if m else None


def font_families_in(css_fragment: str) -> set[str]:
    """Lower-cased family names from font-family declarations."""
    families: set[str] = set()
    for prop, value in parse_declarations(css_fragment):
        if prop == "font-family":
            for name in value.split(","):
                cleaned = name.strip().strip("'\"").strip()
                if cleaned:
                    families.add(cleaned.lower())
    return families
