"""Pipeline orchestration: lock-merged constraints in, versioned HTML
designs out.

generate() runs the full chain (catalog query, prompt assembly, model
call, HTML extraction) and stamps the result with enough provenance to
re-prompt it exactly. Edits always produce a whole new document appended
to the slot's version chain; stored versions are never rewritten.
"""

from __future__ import annotations

import random
import re
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone

from . import catalog as catalog_mod
from .assets import asset_url
from .constraints import (
    DEVICE_VIEWPORTS,
    ConstraintSet,
    constraint_set_from_mapping,
    validate,
)
from .errors import ConstraintsInvalid, GenerationMalformed, ProviderError
from .prompts import (
    ModificationRequest,
    PromptBundle,
    THEME_DISPLAY_NAMES,
    build_edit_prompt,
    build_user_prompt,
)
from .providers import (
    CompletionRequest,
    EDIT_TEMPERATURE,
    GENERATION_TEMPERATURE,
    ImageAttachment,
)

_FENCE_OPEN = "```html"
_FENCE_CLOSE = "```"
_DOC_START_RE = re.compile(r"<!doctype\s+html|<html[\s>]", re.IGNORECASE)
_DOC_END = "</html>"


def extract_html(raw: str) -> str:
    """Pull the HTML document out of a model response.

    Preference order: content of the first ```html fenced block; otherwise
    the span from the first bare '<!DOCTYPE html'/'<html' marker to the
    final closing '</html>'. Surrounding whitespace is trimmed.

    Raises:
        GenerationMalformed: when neither pattern yields a document.
    """
    at = raw.find(_FENCE_OPEN)
    if at >= 0:
        start = at + len(_FENCE_OPEN)
        if raw.startswith("\n", start):
            start += 1
        end = raw.find(_FENCE_CLOSE, start)
        if end >= 0:
            content = raw[start:end].strip()
            if content:
                return content
        # Unterminated or empty fence: fall through to the bare-document scan.
    m = _DOC_START_RE.search(raw)
    if m:
        lowered = raw.lower()
        end = lowered.rfind(_DOC_END)
        if end >= m.start():
            return raw[m.start():end + len(_DOC_END)].strip()
    raise GenerationMalformed("response contains no extractable HTML document")


@dataclass(frozen=True)
class GeneratedDesign:
    id: str
    html_document: str
    constraints_snapshot: ConstraintSet
    reference_screen_id: str | None
    prompt_fingerprint: str
    created_at: datetime
    device_viewport: tuple[int, int]


@dataclass
class VersionChain:
    """Append-only edit history of one design slot."""

    slot_id: str
    versions: list[GeneratedDesign]
    current_index: int = 0

    @property
    def current(self) -> GeneratedDesign:
        return self.versions[self.current_index]

    def navigate(self, index: int) -> GeneratedDesign:
        if not 0 <= index < len(self.versions):
            raise IndexError(f"version index {index} outside 0..{len(self.versions) - 1}")
        self.current_index = index
        return self.current


def design_to_dict(design: GeneratedDesign) -> dict:
    from .constraints import _as_document_dict  # canonical field set

    return {
        "id": design.id,
        "html_document": design.html_document,
        "constraints_snapshot": _as_document_dict(design.constraints_snapshot),
        "reference_screen_id": design.reference_screen_id,
        "prompt_fingerprint": design.prompt_fingerprint,
        "created_at": design.created_at.isoformat(),
        "device_viewport": list(design.device_viewport),
    }


def design_from_dict(data: dict) -> GeneratedDesign:
    return GeneratedDesign(
        id=data["id"],
        html_document=data["html_document"],
        constraints_snapshot=constraint_set_from_mapping(data["constraints_snapshot"]),
        reference_screen_id=data.get("reference_screen_id"),
        prompt_fingerprint=data["prompt_fingerprint"],
        created_at=datetime.fromisoformat(data["created_at"]),
        device_viewport=tuple(data["device_viewport"]),
    )


def chain_to_dict(chain: VersionChain) -> dict:
    return {
        "slot_id": chain.slot_id,
        "current_index": chain.current_index,
        "versions": [design_to_dict(d) for d in chain.versions],
    }


def chain_from_dict(data: dict) -> VersionChain:
    return VersionChain(
        slot_id=data["slot_id"],
        versions=[design_from_dict(d) for d in data["versions"]],
        current_index=data["current_index"],
    )


class DesignEngine:
    """Binds a completion provider, a reference catalog, and an optional
    asset loader into the generation/edit pipeline.

    ``asset_loader(asset_id) -> (media_type, bytes) | None`` supplies logo
    bytes for multimodal attachment; absent loaders simply skip the image.
    """

    def __init__(self, provider, catalog=None, asset_loader=None):
        self.provider = provider
        self.catalog = catalog
        self.asset_loader = asset_loader

    def generate(self, cs: ConstraintSet, seed: int | None = None) -> GeneratedDesign:
        """Run the full pipeline for one constraint set.

        Fresh randomness picks the reference screen on every call unless a
        seed is given, in which case selection is reproducible.
        """
        issues = validate(cs)
        if issues:
            raise ConstraintsInvalid(issues)
        rng = random.Random(seed)
        ref = None
        if self.catalog is not None:
            ref = catalog_mod.query(self.catalog, cs.industry, cs.screen_type, rng)
        bundle = build_user_prompt(cs, ref)

        attachments: list[ImageAttachment] = []
        if ref is not None:
            image_path = self.catalog.resolve_image(ref)
            attachments.append(ImageAttachment(
                id=ref.id, media_type="image/png", data=image_path.read_bytes()))
        if cs.logo is not None and self.asset_loader is not None:
            loaded = self.asset_loader(cs.logo)
            if loaded is not None:
                media_type, data = loaded
                attachments.append(ImageAttachment(
                    id=cs.logo, media_type=media_type, data=data))

        raw = self._complete(bundle, attachments, GENERATION_TEMPERATURE)
        html = extract_html(raw)
        return GeneratedDesign(
            id=str(uuid.uuid4()),
            html_document=html,
            constraints_snapshot=cs,
            reference_screen_id=ref.id if ref is not None else None,
            prompt_fingerprint=bundle.fingerprint,
            created_at=datetime.now(timezone.utc),
            device_viewport=DEVICE_VIEWPORTS[cs.device],
        )

    def _complete(self, bundle: PromptBundle, attachments, temperature: float) -> str:
        request = CompletionRequest(
            system_text=bundle.system_text,
            user_text=bundle.user_text,
            image_attachments=tuple(attachments),
            model_id=getattr(self.provider, "default_model_id", "default"),
            temperature=temperature,
        )
        try:
            return self.provider.complete(request).raw_text
        except ProviderError as exc:
            exc.stage = exc.stage or "completion"
            raise

    def new_chain(self, design: GeneratedDesign) -> VersionChain:
        return VersionChain(slot_id=str(uuid.uuid4()), versions=[design])

    def regenerate_with_edit(self, chain: VersionChain, req: ModificationRequest) -> VersionChain:
        """Append an edited version built from the currently displayed one.

        The chain is mutated only after the provider call and extraction
        both succeed, so failures leave it untouched.
        """
        base = chain.current
        bundle = build_edit_prompt(base.html_document, req)
        raw = self._complete(bundle, [], EDIT_TEMPERATURE)
        html = extract_html(raw)
        design = GeneratedDesign(
            id=str(uuid.uuid4()),
            html_document=html,
            constraints_snapshot=base.constraints_snapshot,
            reference_screen_id=base.reference_screen_id,
            prompt_fingerprint=bundle.fingerprint,
            created_at=datetime.now(timezone.utc),
            device_viewport=base.device_viewport,
        )
        chain.versions.append(design)
        chain.current_index = len(chain.versions) - 1
        return chain

    def duplicate(self, chain: VersionChain) -> VersionChain:
        """Copy the displayed version into a fresh single-version slot."""
        copy = replace(chain.current, id=str(uuid.uuid4()))
        return VersionChain(slot_id=str(uuid.uuid4()), versions=[copy])


def design_specifications(design: GeneratedDesign) -> str:
    """Human-readable sheet of a design's constraints and provenance."""
    cs = design.constraints_snapshot
    width, height = design.device_viewport
    lines = [
        f"Design {design.id}",
        f"Created: {design.created_at.isoformat()}",
        f"Viewport: {width}x{height} ({cs.device})",
        "",
        f"Industry: {cs.industry}",
        f"Product Purpose: {cs.product_purpose}",
        f"Target Audience: {cs.target_audience}",
        f"Device: {cs.device}",
        f"Screen Type: {cs.screen_type}",
    ]
    if cs.colors:
        lines.append(f"Colors: {', '.join(cs.colors)}")
    if cs.fonts:
        lines.append(f"Fonts: {', '.join(cs.fonts)}")
    if cs.style is not None:
        lines.append(f"Style: {cs.style}")
    if cs.logo is not None:
        lines.append(f"Logo: {asset_url(cs.logo)}")
    if cs.features_text:
        lines.append(f"Others: {cs.features_text}")
    if cs.design_theme is not None:
        lines.append(f"Design Theme: {THEME_DISPLAY_NAMES[cs.design_theme]}")
    if cs.locks:
        from .constraints import FIELD_ORDER
        locked = [f for f in FIELD_ORDER if f in cs.locks]
        lines.append(f"Locked fields: {', '.join(locked)}")
    lines.extend([
        "",
        f"Reference screen: {design.reference_screen_id or 'none'}",
        f"Prompt fingerprint: {design.prompt_fingerprint}",
    ])
    return "\n".join(line.rstrip() for line in lines)
