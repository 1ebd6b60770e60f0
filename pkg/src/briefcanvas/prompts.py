"""Deterministic prompt assembly for design generation and editing.

Every prompt is a pure function of its inputs: the fixed system text, a
specification block rendered from the constraint set in a fixed field
order, an optional design-theme expansion (data files under data/themes/),
and an optional reference-screen instruction. No clock, no randomness,
no I/O beyond the cached theme files.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .assets import asset_url
from .constraints import DESIGN_THEMES, ConstraintSet

SYSTEM_PROMPT = """You are an exceptional web designer and developer with millennia of experience in creating cutting-edge website prototypes. Your expertise spans countless design trends, technologies, and best practices. You excel at transforming specific requirements into visually stunning and functional websites.

Carefully analyze the provided specifications, which may include:
1. Industry: The industry or field the website is for
2. Colors: Specific color codes to be used in the design
3. Fonts: Typography choices for the website
4. Device: The primary device the website is designed for (e.g., Desktop, Mobile)
5. Design Theme: Any specified Design Theme to follow
6. Screen Type: The specific page or screen to be designed (e.g., Home, About, Contact)
7. Target Audience: The primary users the website is intended for
8. Product Purpose: The main goal or function of the website

When provided with an example UI screens:
- Focus on the layout and structure of the elements
- Ignore colors, fonts, text, logos, and branding unless they match the given specifications
- Use the reference as a guide for element placement and overall composition

Follow these guidelines when creating the code for the design:
- Generate content for a fictional website or web application based on the given specifications
- Use Tailwind CSS for styling via CDN (cdn.tailwindcss.com)
- Implement custom CSS in a <style> tag when necessary
- Write efficient JavaScript in a <script> tag
- Import any required external dependencies from Unpkg
- Utilize Google Fonts for typography as specified
- Source images from https://placehold.co/ for placeholders (e.g., https://placehold.co/500x500)
- Ensure the prototype is fully responsive and cross-browser compatible

Provide your response as a single HTML file containing the complete, interactive prototype."""

BASE_PROMPT = (
    "Your product manager has just requested a design with the specifications below. "
    "Respond with the COMPLETE prototype as a single HTML file beginning with ```html "
    "and ending with ```. Here is the specification for the design:"
)

REFERENCE_SCREEN_PROMPT = (
    "Here is an example UI screen on which your design should be based. But ignore the "
    "color, font, text, logo, and branding of the screen. Focus on the layout and "
    "structure of the screens and the UI elements on the screen."
)

THEME_DISPLAY_NAMES = {
    "MaterialDesign": "Material Design",
    "AppleDesign": "Apple Design",
    "CarbonDesign": "Carbon Design",
    "AtlassianDesign": "Atlassian Design",
}

_THEME_FILES = {
    "MaterialDesign": "material_design.txt",
    "AppleDesign": "apple_design.txt",
    "CarbonDesign": "carbon_design.txt",
    "AtlassianDesign": "atlassian_design.txt",
}

PRESET_OPS = ("resize-smaller", "resize-larger", "alter-color-scheme", "alter-typography")

PRESET_PHRASES = {
    "resize-smaller": "Make the selected element smaller",
    "resize-larger": "Make the selected element larger",
    "alter-color-scheme": "Change the color scheme of the selected element",
    "alter-typography": "Change the typography of the selected element",
}


@dataclass(frozen=True)
class Attachment:
    """Image reference carried alongside a prompt (reference screen)."""

    id: str
    image_path: str


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    user_text: str
    attachment: Attachment | None = None
    fingerprint: str = field(init=False)

    def __post_init__(self):
        h = hashlib.sha256()
        h.update(self.system_text.encode("utf-8"))
        h.update(self.user_text.encode("utf-8"))
        h.update((self.attachment.id if self.attachment else "").encode("utf-8"))
        object.__setattr__(self, "fingerprint", h.hexdigest())


@dataclass(frozen=True)
class ModificationRequest:
    """Requested edit for one selected element of an existing design."""

    target_selector: str
    preset_ops: frozenset[str] = frozenset()
    free_text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "preset_ops", frozenset(self.preset_ops))
        unknown = self.preset_ops - set(PRESET_OPS)
        if unknown:
            raise ValueError(f"unknown preset ops: {sorted(unknown)}")
        if not self.preset_ops and not self.free_text.strip():
            raise ValueError("a modification request needs preset ops or free text")


def build_system_prompt() -> str:
    """The fixed system prompt, byte-identical on every call."""
    return SYSTEM_PROMPT


@lru_cache(maxsize=None)
def expand_theme(theme: str) -> str:
    """Return the expansion block for a design theme.

    Blocks are data files sharing one template: name, description, color
    palette with role annotations, fonts, button types, text-box types.
    """
    if theme not in DESIGN_THEMES:
        raise ValueError(f"unknown design theme: {theme!r}")
    path = resources.files("briefcanvas").joinpath(f"data/themes/{_THEME_FILES[theme]}")
    return path.read_text("utf-8")


def specification_block(cs: ConstraintSet) -> str:
    """Render the per-field specification lines in their fixed order.

    Free-text fields always get a line (empty value allowed); optional
    structured fields (colors, fonts, style, logo, theme) are omitted when
    absent so the model never sees a blank constraint.
    """
    lines = [
        f"- Industry: {cs.industry}",
        f"- Product Purpose: {cs.product_purpose}",
        f"- Target Audience: {cs.target_audience}",
        f"- Device: {cs.device}",
        f"- Screen Type: {cs.screen_type}",
    ]
    if cs.colors:
        lines.append(f"- Colors: {', '.join(cs.colors)}")
    if cs.fonts:
        lines.append(f"- Fonts: {', '.join(cs.fonts)}")
    if cs.style is not None:
        lines.append(f"- Style: {cs.style}")
    if cs.logo is not None:
        lines.append(f"- Logo URL: Full: {asset_url(cs.logo)}")
    lines.append(f"- Others: {cs.features_text}")
    if cs.design_theme is not None:
        lines.append(f"- Design Theme: {THEME_DISPLAY_NAMES[cs.design_theme]}")
    return "\n".join(line.rstrip() for line in lines)


def build_user_prompt(cs: ConstraintSet, ref=None) -> PromptBundle:
    """Assemble the generation prompt for a constraint set.

    ``ref`` is a reference screen (anything with ``id`` and ``image_path``
    attributes); when present, the structural-guidance instruction is
    appended and the image rides along as the attachment.
    """
    parts = [BASE_PROMPT + "\n" + specification_block(cs)]
    if cs.design_theme is not None:
        parts.append(expand_theme(cs.design_theme))
    attachment = None
    if ref is not None:
        parts.append(REFERENCE_SCREEN_PROMPT)
        attachment = Attachment(id=ref.id, image_path=str(ref.image_path))
    return PromptBundle(
        system_text=build_system_prompt(),
        user_text="\n\n".join(parts),
        attachment=attachment,
    )


def build_edit_prompt(original_html: str, req: ModificationRequest) -> PromptBundle:
    """Assemble the edit prompt for a selected element of an existing design."""
    if not original_html:
        raise ValueError("original design must be non-empty")
    changes = [PRESET_PHRASES[op] for op in PRESET_OPS if op in req.preset_ops]
    if req.free_text.strip():
        changes.append(req.free_text.strip())
    user_text = (
        "Here are changes requested by the user on a specific element in the design:\n"
        "Make the following changes:\n"
        + "\n".join(f"- {change}" for change in changes)
        + f"\n- Selected element: {req.target_selector}"
        + "\n\nThis is the original design\n- "
        + original_html
        + "\n\nPlease update the design accordingly."
    )
    return PromptBundle(system_text=build_system_prompt(), user_text=user_text)
