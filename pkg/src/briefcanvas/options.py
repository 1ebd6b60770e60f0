"""Dropdown option lists for the constraint side panel.

Industries, screen types, styles, themes, and fonts live in a data file so
new entries require no code change. Consumers treat the lists as opaque
identifiers; only device/style/theme membership is enforced by validation.
"""

import json
from functools import lru_cache
from importlib import resources

_OPTION_KEYS = ("industries", "screen_types", "styles", "design_themes", "fonts")


@lru_cache(maxsize=1)
def load_options() -> dict:
    """Return the option lists, loaded once from the bundled data file."""
    text = resources.files("briefcanvas").joinpath("data/options.json").read_text("utf-8")
    data = json.loads(text)
    missing = [k for k in _OPTION_KEYS if k not in data]
    if missing:
        raise ValueError(f"options data missing keys: {missing}")
    return {k: list(data[k]) for k in _OPTION_KEYS}
