"""Scores a generated HTML document against its constraint set.

Adherence per constraint class is
    100 x (correctly implemented instances) / (instances where it applies)
with one instance per specified color, one per specified font, one for the
device, and one for the logo when present. Industry, screen type, theme,
and style are deliberately not scored: there is no objective markup-level
test for them, so the suite emits variation galleries for human review
instead.

Colors reachable only through external stylesheets are not counted; the
bundled utility-class palette covers framework classes and the bracketed
arbitrary-value syntax.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import lru_cache
from importlib import resources
from urllib.parse import parse_qs, unquote_plus, urlsplit

from .assets import asset_url
from .constraints import DEVICE_VIEWPORTS, ConstraintSet
from .errors import EvaluationError
from .htmlscan import (
    COLOR_UTILITY_PREFIXES,
    ScannedDocument,
    colors_in_text,
    font_families_in,
    iter_css_rules,
    parse_declarations,
    px_value,
    scan_html,
)

CONSTRAINT_CLASSES = ("colors", "fonts", "device", "logo")

_UTILITY_ARBITRARY_RE = re.compile(
    r"^(?:%s)-\[(.+)\]$" % "|".join(COLOR_UTILITY_PREFIXES)
)
_UTILITY_NAMED_RE = re.compile(
    r"^(?:%s)-([a-z]+)(?:-(\d{2,3}))?$" % "|".join(COLOR_UTILITY_PREFIXES)
)
_WIDTH_UTILITY_RE = re.compile(r"^(?:w|min-w)-\[(\d+(?:\.\d+)?)px\]$")

_FONT_HOST_MARKER = "fonts."


@lru_cache(maxsize=1)
def _utility_palette() -> dict:
    text = resources.files("briefcanvas").joinpath("data/utility_colors.json").read_text("utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class ClassScore:
    correct: int
    total: int

    @property
    def percent(self) -> float | None:
        """100*correct/total, or None when the class does not apply."""
        if self.total == 0:
            return None
        return 100.0 * self.correct / self.total


@dataclass(frozen=True)
class AdherenceReport:
    per_constraint: dict[str, ClassScore]
    design_id: str | None
    evaluated_at: datetime

    def as_dict(self) -> dict:
        out = {}
        for name, score in self.per_constraint.items():
            pct = score.percent
            out[name] = {
                "correct": score.correct,
                "total": score.total,
                "percent": None if pct is None else round(pct, 1),
            }
        return {
            "design_id": self.design_id,
            "evaluated_at": self.evaluated_at.isoformat(),
            "per_constraint": out,
        }


def document_colors(scan: ScannedDocument) -> set[str]:
    """Every color declared in the document, as normalized 6-digit hex."""
    found: set[str] = set()
    for fragment in scan.style_attrs:
        found |= colors_in_text(fragment)
    for text in scan.style_texts:
        found |= colors_in_text(text)
    for value in scan.attr_colors:
        found |= colors_in_text(value)
    palette = _utility_palette()
    for token in scan.class_tokens:
        token = token.split("/", 1)[0]  # strip opacity suffix
        m = _UTILITY_ARBITRARY_RE.match(token)
        if m:
            found |= colors_in_text(m.group(1))
            continue
        m = _UTILITY_NAMED_RE.match(token)
        if m:
            name, shade = m.groups()
            entry = palette.get(name)
            if isinstance(entry, str) and shade is None:
                found.add(entry)
            elif isinstance(entry, dict) and shade in entry:
                found.add(entry[shade])
    return found


def _family_names_from_href(href: str) -> set[str]:
    names: set[str] = set()
    split = urlsplit(href)
    if _FONT_HOST_MARKER not in split.netloc:
        return names
    for value in parse_qs(split.query).get("family", []):
        # v1 API separates families with '|'; both APIs append ':weights'.
        for part in value.split("|"):
            name = unquote_plus(part).split(":", 1)[0].strip()
            if name:
                names.add(name.lower())
    return names


def imported_fonts(scan: ScannedDocument) -> set[str]:
    """Families made available via fonts-service links or @font-face."""
    names: set[str] = set()
    for href in scan.link_hrefs:
        names |= _family_names_from_href(href)
    for text in scan.style_texts:
        for selector, body in iter_css_rules(text):
            if selector.startswith("@font-face"):
                names |= font_families_in(body)
    return names


def used_fonts(scan: ScannedDocument) -> set[str]:
    """Families appearing in font-family declarations outside @font-face."""
    names: set[str] = set()
    for fragment in scan.style_attrs:
        names |= font_families_in(fragment)
    for text in scan.style_texts:
        for selector, body in iter_css_rules(text):
            if not selector.startswith("@"):
                names |= font_families_in(body)
    return names


def check_colors(scan: ScannedDocument, colors) -> tuple[int, int]:
    declared = document_colors(scan)
    correct = sum(1 for c in colors if c in declared)
    return correct, len(colors)


def check_fonts(scan: ScannedDocument, fonts) -> tuple[int, int]:
    """A font is correct only when it is both imported and actually used."""
    imported = imported_fonts(scan)
    used = used_fonts(scan)
    correct = sum(1 for f in fonts if f.lower() in imported and f.lower() in used)
    return correct, len(fonts)


def _root_width_exceeds(scan: ScannedDocument, viewport_width: int) -> bool:
    def too_wide(value: str) -> bool:
        px = px_value(value)
        return px is not None and px > viewport_width

    for el in scan.root_elements:
        for prop, value in parse_declarations(el.style):
            if prop in ("width", "min-width") and too_wide(value):
                return True
        for token in el.classes:
            m = _WIDTH_UTILITY_RE.match(token)
            if m and float(m.group(1)) > viewport_width:
                return True
    for text in scan.style_texts:
        for selector, body in iter_css_rules(text):
            selectors = {s.strip() for s in selector.split(",")}
            if selectors & {"html", "body"}:
                for prop, value in parse_declarations(body):
                    if prop in ("width", "min-width") and too_wide(value):
                        return True
    return False


def check_device(scan: ScannedDocument, device: str, declared_viewport) -> tuple[int, int]:
    """Viewport must match the device table and no root element may fix a
    pixel width wider than that viewport."""
    expected = DEVICE_VIEWPORTS.get(device)
    if expected is None:
        return 0, 1
    if tuple(declared_viewport) != expected:
        return 0, 1
    return (0 if _root_width_exceeds(scan, expected[0]) else 1), 1


def check_logo(scan: ScannedDocument, logo_url: str | None,
               logo_data_url: str | None = None) -> tuple[int, int]:
    if logo_url is None:
        return 0, 0
    for src in scan.img_srcs:
        if src == logo_url or (logo_data_url is not None and src == logo_data_url):
            return 1, 1
    return 0, 1


def evaluate(html: str, cs: ConstraintSet, declared_viewport=None,
             logo_url: str | None = None, logo_data_url: str | None = None,
             design_id: str | None = None) -> AdherenceReport:
    """Score one document against one constraint set.

    ``declared_viewport`` defaults to the device's table entry (the value a
    freshly generated design carries); pass the stored viewport when
    evaluating a persisted design. ``logo_url`` defaults to the
    constraint set's asset URL.
    """
    if not html or not html.strip():
        raise EvaluationError("empty document")
    scan = scan_html(html)
    if scan.tag_count == 0:
        raise EvaluationError("no HTML elements found")
    if cs.device not in DEVICE_VIEWPORTS:
        raise EvaluationError(f"unknown device {cs.device!r}")
    if declared_viewport is None:
        declared_viewport = DEVICE_VIEWPORTS[cs.device]
    if logo_url is None and cs.logo is not None:
        logo_url = asset_url(cs.logo)

    scores = {
        "colors": ClassScore(*check_colors(scan, cs.colors)),
        "fonts": ClassScore(*check_fonts(scan, cs.fonts)),
        "device": ClassScore(*check_device(scan, cs.device, declared_viewport)),
        "logo": ClassScore(*check_logo(scan, logo_url, logo_data_url)),
    }
    return AdherenceReport(
        per_constraint=scores,
        design_id=design_id,
        evaluated_at=datetime.now(timezone.utc),
    )


@dataclass
class SetResult:
    """Aggregated scores for one brief across its variations."""

    label: str
    counts: dict[str, list[int]]  # class -> [correct, total]
    failures: int = 0

    def percent(self, cls: str) -> float | None:
        correct, total = self.counts[cls]
        if total == 0:
            return None
        return 100.0 * correct / total


@dataclass
class SuiteReport:
    sets: list[SetResult] = field(default_factory=list)

    def overall(self, cls: str) -> float | None:
        """Mean of the per-set percentages, skipping non-applicable sets."""
        values = [s.percent(cls) for s in self.sets if s.percent(cls) is not None]
        if not values:
            return None
        return sum(values) / len(values)

    @staticmethod
    def _fmt(value: float | None) -> str:
        return "n/a" if value is None else f"{value:.1f}"

    def as_text(self) -> str:
        header = f"{'set':<28}" + "".join(f"{c:>10}" for c in CONSTRAINT_CLASSES) + f"{'failed':>10}"
        lines = [header, "-" * len(header)]
        for s in self.sets:
            row = f"{s.label:<28}" + "".join(
                f"{self._fmt(s.percent(c)):>10}" for c in CONSTRAINT_CLASSES
            ) + f"{s.failures:>10}"
            lines.append(row)
        lines.append("-" * len(header))
        lines.append(
            f"{'average':<28}"
            + "".join(f"{self._fmt(self.overall(c)):>10}" for c in CONSTRAINT_CLASSES)
            + f"{sum(s.failures for s in self.sets):>10}"
        )
        return "\n".join(lines)

    def as_csv(self) -> str:
        rows = ["set," + ",".join(CONSTRAINT_CLASSES) + ",failed"]
        for s in self.sets:
            rows.append(
                s.label.replace(",", " ") + ","
                + ",".join(self._fmt(s.percent(c)) for c in CONSTRAINT_CLASSES)
                + f",{s.failures}"
            )
        rows.append(
            "average,"
            + ",".join(self._fmt(self.overall(c)) for c in CONSTRAINT_CLASSES)
            + f",{sum(s.failures for s in self.sets)}"
        )
        return "\n".join(rows) + "\n"


def run_adherence_suite(briefs, provider, catalog=None, seed: int | None = None) -> SuiteReport:
    """Generate and score n variations for each brief.

    ``briefs`` is a list of (ConstraintSet, n_variations). Variations run
    sequentially so a positional defect schedule on the stub provider maps
    one-to-one onto (set, variation) cells. Generation failures are counted
    per set and excluded from every denominator.
    """
    from .engine import DesignEngine  # local import; engine pulls providers

    engine = DesignEngine(provider=provider, catalog=catalog)
    report = SuiteReport()
    for set_index, (cs, n_variations) in enumerate(briefs, start=1):
        counts = {c: [0, 0] for c in CONSTRAINT_CLASSES}
        result = SetResult(label=f"{set_index}: {cs.industry or 'unspecified'}", counts=counts)
        for variation in range(n_variations):
            var_seed = None if seed is None else seed * 10_000 + set_index * 100 + variation
            try:
                design = engine.generate(cs, seed=var_seed)
                evaluation = evaluate(
                    design.html_document, cs,
                    declared_viewport=design.device_viewport,
                    design_id=design.id,
                )
            except Exception:
                result.failures += 1
                continue
            for cls in CONSTRAINT_CLASSES:
                score = evaluation.per_constraint[cls]
                counts[cls][0] += score.correct
                counts[cls][1] += score.total
        report.sets.append(result)
    return report
