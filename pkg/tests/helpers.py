"""Shared test utilities: random valid constraint sets and catalog builders."""

from __future__ import annotations

import io
import random

from PIL import Image

from briefcanvas.catalog import ingest_screen, load_catalog
from briefcanvas.constraints import (
    DESIGN_THEMES,
    FIELD_ORDER,
    STYLES,
    ConstraintSet,
)

INDUSTRIES = (
    "Travel & Transportation", "Education", "News", "Food and Drink", "Health and Fitness",
)
SCREEN_TYPES = (
    "Home Page", "Blog Page", "Settings Preferences", "Account & Profile",
    "Product Detail Page", "Search Page", "Task Manager",
)
FONT_POOL = (
    "Orelega One", "Pacifico", "Montserrat", "Merriweather", "Philosopher",
    "Platypi", "Lato", "Prompt", "Quando", "Revalia", "Playfair", "Roboto",
    "Rubik", "Silkscreen",
)
WORDS = ("swift", "green", "café", "portal", "atlas", "nimbus", "quiet", "spark")


def random_constraint_set(rng: random.Random) -> ConstraintSet:
    """A uniformly messy but valid constraint set."""
    def words(n):
        return " ".join(rng.choice(WORDS) for _ in range(n))

    return ConstraintSet(
        industry=rng.choice(INDUSTRIES),
        product_purpose=words(rng.randrange(4)),
        target_audience=words(rng.randrange(3)),
        device=rng.choice(("Desktop", "Mobile", "Tablet")),
        screen_type=rng.choice(SCREEN_TYPES),
        colors=tuple(f"#{rng.randrange(1 << 24):06X}" for _ in range(rng.randrange(6))),
        fonts=tuple(rng.sample(FONT_POOL, rng.randrange(4))),
        style=rng.choice((None,) + STYLES),
        design_theme=rng.choice((None,) + DESIGN_THEMES),
        logo=None if rng.random() < 0.5 else f"asset-{rng.randrange(10_000)}",
        features_text=words(rng.randrange(5)),
        locks=frozenset(f for f in FIELD_ORDER if rng.random() < 0.25),
    )


def solid_png(color=(200, 40, 40), size=(24, 16)) -> bytes:
    img = Image.new("RGB", size, color)
    out = io.BytesIO()
    img.save(out, format="PNG")
    return out.getvalue()


def build_catalog(catalog_dir, buckets):
    """Create a catalog on disk.

    ``buckets`` maps (industry, screen_type, device) -> screen count.
    Returns the loaded Catalog.
    """
    for (industry, screen_type, device), count in buckets.items():
        for i in range(count):
            ingest_screen(
                catalog_dir,
                solid_png(color=(40 * (i + 1) % 256, 80, 120)),
                industry, screen_type, device, source_label=f"app-{i}",
            )
    return load_catalog(catalog_dir / "manifest.csv")
