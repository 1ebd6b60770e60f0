"""Reference-screen catalog: grayscale layout exemplars indexed by
(industry, screen type).

Device is stored per screen but is not part of the query key; it is
honored downstream by viewport sizing. The manifest is a plain CSV so a
desk-scale catalog stays hand-editable and diffable.
"""

from __future__ import annotations

import csv
import io
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .constraints import DEVICES
from .errors import CatalogError
from .options import load_options

MANIFEST_NAME = "manifest.csv"
MANIFEST_COLUMNS = ("id", "industry", "screen_type", "device", "image_path", "source_label")
IMAGES_SUBDIR = "images"
MAX_SCREENS_PER_BUCKET = 50


@dataclass(frozen=True)
class ReferenceScreen:
    id: str
    industry: str
    screen_type: str
    device: str
    image_path: str  # relative to the catalog directory
    source_label: str = ""


@dataclass
class Catalog:
    root: Path
    screens: list[ReferenceScreen] = field(default_factory=list)
    index: dict[tuple[str, str], list[ReferenceScreen]] = field(default_factory=dict)

    def resolve_image(self, screen: ReferenceScreen) -> Path:
        return self.root / screen.image_path


def empty_catalog() -> Catalog:
    return Catalog(root=Path("."))


def to_grayscale_png(image_bytes: bytes) -> bytes:
    """Convert raster image bytes to a single-channel grayscale PNG.

    Luma uses the Rec. 601 weights with half-up integer rounding:
    (299*R + 587*G + 114*B + 500) // 1000. The weights sum to exactly
    1000, so already-gray pixels pass through unchanged (idempotent).
    """
    try:
        image = Image.open(io.BytesIO(image_bytes))
        image.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise CatalogError(f"image does not decode: {exc}") from exc
    rgb = np.asarray(image.convert("RGB"), dtype=np.uint32)
    luma = (299 * rgb[..., 0] + 587 * rgb[..., 1] + 114 * rgb[..., 2] + 500) // 1000
    gray = Image.fromarray(luma.astype(np.uint8), mode="L")
    out = io.BytesIO()
    gray.save(out, format="PNG")
    return out.getvalue()


def load_catalog(manifest_path) -> Catalog:
    """Read a manifest CSV and build the (industry, screen_type) index.

    Rejects malformed rows, missing image files, and duplicate
    (industry, screen_type, device, id) tuples, naming the offending entry.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise CatalogError(f"manifest not found: {manifest_path}")
    catalog = Catalog(root=manifest_path.parent)
    seen: set[tuple[str, str, str, str]] = set()
    with manifest_path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != MANIFEST_COLUMNS:
            raise CatalogError(
                f"manifest header must be {','.join(MANIFEST_COLUMNS)}, "
                f"got {reader.fieldnames}")
        for line_no, row in enumerate(reader, start=2):
            if any(row.get(col) in (None, "") for col in MANIFEST_COLUMNS[:5]):
                raise CatalogError(f"malformed manifest row {line_no}: {row}")
            screen = ReferenceScreen(
                id=row["id"], industry=row["industry"], screen_type=row["screen_type"],
                device=row["device"], image_path=row["image_path"],
                source_label=row.get("source_label") or "",
            )
            key = (screen.industry, screen.screen_type, screen.device, screen.id)
            if key in seen:
                raise CatalogError(f"duplicate screen {screen.id!r} in row {line_no}")
            seen.add(key)
            if not catalog.resolve_image(screen).exists():
                raise CatalogError(
                    f"row {line_no} ({screen.id!r}): missing image {screen.image_path}")
            catalog.screens.append(screen)
            catalog.index.setdefault((screen.industry, screen.screen_type), []).append(screen)
    return catalog


def query(catalog: Catalog, industry: str, screen_type: str, rng) -> ReferenceScreen | None:
    """Uniformly pick a screen matching industry and screen type, or None.

    Selection is deterministic under a fixed rng seed; the injected rng is
    the only randomness source.
    """
    bucket = catalog.index.get((industry, screen_type))
    if not bucket:
        return None
    return bucket[rng.randrange(len(bucket))]


def verify_catalog(catalog: Catalog) -> list[str]:
    """Full invariant audit, including per-pixel grayscale checks.

    Returns a list of problem descriptions (empty means clean).
    """
    problems = []
    for screen in catalog.screens:
        path = catalog.resolve_image(screen)
        if not path.exists():
            problems.append(f"{screen.id}: missing image {screen.image_path}")
            continue
        with Image.open(path) as image:
            pixels = np.asarray(image.convert("RGB"), dtype=np.int16)
        if not ((pixels[..., 0] == pixels[..., 1]).all()
                and (pixels[..., 1] == pixels[..., 2]).all()):
            problems.append(f"{screen.id}: image is not grayscale")
    return problems


def ingest_screen(catalog_dir, image_bytes: bytes, industry: str, screen_type: str,
                  device: str, source_label: str = "") -> ReferenceScreen:
    """Store a grayscale copy of an image and append its manifest entry.

    Enforces the per-(industry, screen_type, device) cap of
    MAX_SCREENS_PER_BUCKET screens.
    """
    options = load_options()
    if industry not in options["industries"]:
        raise CatalogError(f"unknown industry: {industry!r}")
    if screen_type not in options["screen_types"]:
        raise CatalogError(f"unknown screen type: {screen_type!r}")
    if device not in DEVICES:
        raise CatalogError(f"unknown device: {device!r}")

    catalog_dir = Path(catalog_dir)
    manifest_path = catalog_dir / MANIFEST_NAME
    (catalog_dir / IMAGES_SUBDIR).mkdir(parents=True, exist_ok=True)

    bucket_count = 0
    if manifest_path.exists():
        existing = load_catalog(manifest_path)
        bucket_count = sum(
            1 for s in existing.screens
            if (s.industry, s.screen_type, s.device) == (industry, screen_type, device))
    if bucket_count >= MAX_SCREENS_PER_BUCKET:
        raise CatalogError(
            f"bucket ({industry}, {screen_type}, {device}) already holds "
            f"{MAX_SCREENS_PER_BUCKET} screens")

    gray_png = to_grayscale_png(image_bytes)
    screen_id = uuid.uuid4().hex[:12]
    image_rel = f"{IMAGES_SUBDIR}/{screen_id}.png"
    (catalog_dir / image_rel).write_bytes(gray_png)

    screen = ReferenceScreen(
        id=screen_id, industry=industry, screen_type=screen_type,
        device=device, image_path=image_rel, source_label=source_label,
    )
    is_new = not manifest_path.exists()
    with manifest_path.open("a", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if is_new:
            writer.writerow(MANIFEST_COLUMNS)
        writer.writerow([screen.id, screen.industry, screen.screen_type,
                         screen.device, screen.image_path, screen.source_label])
    return screen
