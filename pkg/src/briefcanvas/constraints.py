"""Designer constraint bundles: validation, lock-merging, and the canonical
settings document used for import/export and as the request body of the
generation API.

The settings document is byte-deterministic: fixed key order, two-space
indentation, UTF-8, trailing newline. Golden tests depend on those bytes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace

from .errors import ConstraintsInvalid, SettingsParseError

SCHEMA_VERSION = 1

DEVICES = ("Desktop", "Mobile", "Tablet")
STYLES = ("3D", "Neumorphism", "Dark Mode", "Minimalism")
DESIGN_THEMES = ("MaterialDesign", "AppleDesign", "CarbonDesign", "AtlassianDesign")

MAX_COLORS = 5
MAX_FONTS = 3

# Per-device viewport in CSS pixels (width, height). Device adherence and the
# canvas preview frames both key off this table.
DEVICE_VIEWPORTS = {
    "Desktop": (1440, 900),
    "Tablet": (768, 1024),
    "Mobile": (390, 844),
}

# Canonical field order: drives settings-document key order, lock
# serialization order, and the specification block in prompts.
FIELD_ORDER = (
    "industry",
    "product_purpose",
    "target_audience",
    "device",
    "screen_type",
    "colors",
    "fonts",
    "style",
    "design_theme",
    "logo",
    "features_text",
)

_HEX_RE = re.compile(r"^#([0-9a-fA-F]{3}|[0-9a-fA-F]{6})$")


def normalize_hex(color: str) -> str:
    """Normalize a well-formed hex color to uppercase 6-digit form.

    "#2c3e50" -> "#2C3E50", "#ABC" -> "#AABBCC". Strings that are not a
    3- or 6-digit '#'-prefixed hex code are returned unchanged so that
    validation can still report them.
    """
    m = _HEX_RE.match(color)
    if not m:
        return color
    digits = m.group(1)
    if len(digits) == 3:
        digits = "".join(ch * 2 for ch in digits)
    return "#" + digits.upper()


@dataclass(frozen=True)
class ValidationIssue:
    field: str
    code: str  # one of: out-of-range, malformed-color, unknown-enum-value, unknown-lock-target
    message: str


ISSUE_CODES = ("out-of-range", "malformed-color", "unknown-enum-value", "unknown-lock-target")


@dataclass(frozen=True)
class ConstraintSet:
    """The full bundle of designer-specified constraints plus per-field locks.

    Colors are normalized to uppercase 6-digit hex at construction time, so
    any set built through this class round-trips bit-exactly through the
    settings document. Malformed color strings are kept as-is for
    ``validate`` to flag.
    """

    industry: str = ""
    product_purpose: str = ""
    target_audience: str = ""
    device: str = "Desktop"
    screen_type: str = ""
    colors: tuple[str, ...] = ()
    fonts: tuple[str, ...] = ()
    style: str | None = None
    design_theme: str | None = None
    logo: str | None = None
    features_text: str = ""
    locks: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(normalize_hex(c) for c in self.colors))
        object.__setattr__(self, "fonts", tuple(self.fonts))
        object.__setattr__(self, "locks", frozenset(self.locks))

    def value_of(self, field_name: str):
        if field_name not in FIELD_ORDER:
            raise KeyError(field_name)
        return getattr(self, field_name)


def validate(cs: ConstraintSet) -> list[ValidationIssue]:
    """Check every ConstraintSet invariant; one issue per violation.

    Pure and total: never mutates the input, never raises.
    """
    issues: list[ValidationIssue] = []

    if len(cs.colors) > MAX_COLORS:
        issues.append(ValidationIssue(
            "colors", "out-of-range",
            f"at most {MAX_COLORS} colors allowed, got {len(cs.colors)}"))
    for c in cs.colors:
        if not _HEX_RE.match(c):
            issues.append(ValidationIssue(
                "colors", "malformed-color",
                f"{c!r} is not a 3- or 6-digit hex code with leading '#'"))

    if len(cs.fonts) > MAX_FONTS:
        issues.append(ValidationIssue(
            "fonts", "out-of-range",
            f"at most {MAX_FONTS} fonts allowed, got {len(cs.fonts)}"))
    for f in cs.fonts:
        if not f.strip():
            issues.append(ValidationIssue(
                "fonts", "out-of-range", "font names must be non-empty"))

    if cs.device not in DEVICES:
        issues.append(ValidationIssue(
            "device", "unknown-enum-value",
            f"device {cs.device!r} not one of {', '.join(DEVICES)}"))
    if cs.style is not None and cs.style not in STYLES:
        issues.append(ValidationIssue(
            "style", "unknown-enum-value",
            f"style {cs.style!r} not one of {', '.join(STYLES)}"))
    if cs.design_theme is not None and cs.design_theme not in DESIGN_THEMES:
        issues.append(ValidationIssue(
            "design_theme", "unknown-enum-value",
            f"design theme {cs.design_theme!r} not one of {', '.join(DESIGN_THEMES)}"))

    for lock in sorted(cs.locks):
        if lock not in FIELD_ORDER:
            issues.append(ValidationIssue(
                "locks", "unknown-lock-target", f"no such field: {lock!r}"))

    return issues


def _as_document_dict(cs: ConstraintSet) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "industry": cs.industry,
        "product_purpose": cs.product_purpose,
        "target_audience": cs.target_audience,
        "device": cs.device,
        "screen_type": cs.screen_type,
        "colors": list(cs.colors),
        "fonts": list(cs.fonts),
        "style": cs.style,
        "design_theme": cs.design_theme,
        "logo": cs.logo,
        "features_text": cs.features_text,
        # Locks serialize in canonical field order so equal lock sets always
        # produce identical bytes.
        "locks": [f for f in FIELD_ORDER if f in cs.locks],
    }


def export_settings(cs: ConstraintSet) -> bytes:
    """Emit the canonical settings document for a valid constraint set.

    Deterministic: identical input yields identical bytes.

    Raises:
        ConstraintsInvalid: if ``validate(cs)`` is non-empty.
    """
    issues = validate(cs)
    if issues:
        raise ConstraintsInvalid(issues)
    text = json.dumps(_as_document_dict(cs), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def constraint_set_from_mapping(data: dict) -> ConstraintSet:
    """Build a ConstraintSet from a parsed settings object.

    Unknown top-level keys are ignored (forward compatibility). Missing keys
    fall back to the empty defaults. Raises ConstraintsInvalid when the
    result fails validation, and SettingsParseError when a field has the
    wrong JSON type.
    """
    def _expect(key, kinds, default):
        value = data.get(key, default)
        if value is default and key not in data:
            return default
        if not isinstance(value, kinds):
            raise SettingsParseError(f"field {key!r} has wrong type {type(value).__name__}")
        return value

    str_or_none = (str, type(None))
    cs = ConstraintSet(
        industry=_expect("industry", str, ""),
        product_purpose=_expect("product_purpose", str, ""),
        target_audience=_expect("target_audience", str, ""),
        device=_expect("device", str, "Desktop"),
        screen_type=_expect("screen_type", str, ""),
        colors=tuple(_expect("colors", list, [])),
        fonts=tuple(_expect("fonts", list, [])),
        style=_expect("style", str_or_none, None),
        design_theme=_expect("design_theme", str_or_none, None),
        logo=_expect("logo", str_or_none, None),
        features_text=_expect("features_text", str, ""),
        locks=frozenset(_expect("locks", list, [])),
    )
    issues = validate(cs)
    if issues:
        raise ConstraintsInvalid(issues)
    return cs


def import_settings(doc: bytes) -> ConstraintSet:
    """Parse a canonical settings document.

    Raises:
        SettingsParseError: malformed JSON (with byte offset) or wrong shape.
        ConstraintsInvalid: schema-valid content that fails validation.
    """
    try:
        text = doc.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SettingsParseError(f"not valid UTF-8: {exc}", byte_offset=exc.start) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        byte_offset = len(text[:exc.pos].encode("utf-8"))
        raise SettingsParseError(
            f"malformed JSON at byte {byte_offset}: {exc.msg}", byte_offset=byte_offset
        ) from exc
    if not isinstance(data, dict):
        raise SettingsParseError("settings document must be a JSON object")
    return constraint_set_from_mapping(data)


def merge_preserving_locks(current: ConstraintSet, incoming: ConstraintSet) -> ConstraintSet:
    """Take incoming's values except for fields locked in ``current``.

    The result keeps current's lock set, so locked fields survive any number
    of subsequent merges (idempotent).
    """
    kept = {name: current.value_of(name) for name in current.locks}
    return replace(incoming, locks=current.locks, **kept)
