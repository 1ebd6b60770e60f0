"""Chat-completion providers.

Two implementations behind one ``complete(request)`` surface: an HTTP
client speaking the common chat-completion JSON protocol (configurable
endpoint/model, images as data-URL parts), and a deterministic stub that
synthesizes a constraint-compliant HTML document straight from the
specification block in the prompt. Every test runs against the stub; no
test needs network egress.
"""

from __future__ import annotations

import base64
import hashlib
import os
import re
import threading
import time
from dataclasses import dataclass

import httpx

from .constraints import DEVICE_VIEWPORTS
from .errors import ProviderError

DEFAULT_TIMEOUT_S = 120.0
DEFAULT_MAX_IN_FLIGHT = 4
DEFAULT_MAX_OUTPUT_TOKENS = 8192

GENERATION_TEMPERATURE = 0.9
EDIT_TEMPERATURE = 0.2


@dataclass(frozen=True)
class ImageAttachment:
    id: str
    media_type: str
    data: bytes


@dataclass(frozen=True)
class CompletionRequest:
    system_text: str
    user_text: str
    image_attachments: tuple[ImageAttachment, ...] = ()
    model_id: str = "stub"
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    temperature: float = GENERATION_TEMPERATURE

    def __post_init__(self):
        object.__setattr__(self, "image_attachments", tuple(self.image_attachments))
        if not self.model_id:
            raise ValueError("model_id must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature {self.temperature} outside [0, 2]")
        if len(self.image_attachments) > 2:
            raise ValueError("at most two image attachments supported")


@dataclass(frozen=True)
class CompletionResult:
    raw_text: str
    provider_label: str
    latency_ms: float


_SPEC_LINE_RE = re.compile(r"^- ([A-Za-z ]+?): ?(.*)$", re.MULTILINE)
_EDIT_MARKER = "Here are changes requested by the user"
_ORIGINAL_HEADER = "This is the original design\n- "
_CLOSING_INSTRUCTION = "\n\nPlease update the design accordingly."


def _parse_specification(user_text: str) -> dict[str, str]:
    """Pull the '- Field: value' lines back out of a generation prompt.

    Only the block before any theme expansion is relevant; theme blocks use
    the same '- Name: value' shape, so later duplicates never override the
    first occurrence of a field.
    """
    fields: dict[str, str] = {}
    for m in _SPEC_LINE_RE.finditer(user_text):
        key = m.group(1).strip()
        if key not in fields:
            fields[key] = m.group(2).strip()
    return fields


class StubProvider:
    """Deterministic model substitute.

    For a generation prompt it synthesizes a single-file HTML document that
    satisfies every parsed constraint by construction: all colors appear in
    inline styles, all fonts are both imported and used, the root container
    is sized to the device viewport, and the logo URL is embedded when one
    was specified. For an edit prompt it returns the original document with
    a deterministic revision marker.

    ``font_defects`` drops the last k fonts (import and usage alike):
    either a fixed int applied to every call or a schedule consumed one
    entry per generation call, enabling chosen font-adherence percentages.
    """

    label = "stub"
    default_model_id = "stub"

    def __init__(self, font_defects=None):
        self._schedule = None
        self._fixed_drop = 0
        if isinstance(font_defects, int):
            self._fixed_drop = font_defects
        elif font_defects is not None:
            self._schedule = list(font_defects)
        self._call_index = 0
        self._lock = threading.Lock()

    def _next_drop(self) -> int:
        with self._lock:
            if self._schedule is None:
                return self._fixed_drop
            index = self._call_index
            self._call_index += 1
            if index >= len(self._schedule):
                return 0
            return self._schedule[index]

    def complete(self, req: CompletionRequest) -> CompletionResult:
        start = time.perf_counter()
        if req.user_text.startswith(_EDIT_MARKER):
            document = self._apply_edit(req.user_text)
        else:
            document = self._synthesize(req.user_text, self._next_drop())
        raw = f"```html\n{document}\n```"
        latency_ms = (time.perf_counter() - start) * 1000.0
        return CompletionResult(raw_text=raw, provider_label=self.label, latency_ms=latency_ms)

    def _apply_edit(self, user_text: str) -> str:
        head, sep, rest = user_text.partition(_ORIGINAL_HEADER)
        if not sep:
            raise ProviderError("edit prompt carries no original design")
        original = rest
        if original.endswith(_CLOSING_INSTRUCTION):
            original = original[: -len(_CLOSING_INSTRUCTION)]
        digest = hashlib.sha256(head.encode("utf-8")).hexdigest()[:12]
        marker = f"<!-- revision {digest} -->"
        lowered = original.lower()
        at = lowered.rfind("</html>")
        if at >= 0:
            return original[:at] + marker + original[at:]
        return original + marker

    def _synthesize(self, user_text: str, drop_fonts: int) -> str:
        spec = _parse_specification(user_text)
        industry = spec.get("Industry", "Untitled")
        screen = spec.get("Screen Type", "Screen")
        purpose = spec.get("Product Purpose", "")
        audience = spec.get("Target Audience", "")
        device = spec.get("Device", "Desktop")
        colors = [c.strip() for c in spec.get("Colors", "").split(",") if c.strip()]
        fonts = [f.strip() for f in spec.get("Fonts", "").split(",") if f.strip()]
        logo_url = None
        if "Logo URL" in spec:
            logo_url = spec["Logo URL"].removeprefix("Full:").strip() or None
        if drop_fonts > 0:
            fonts = fonts[:-drop_fonts] if drop_fonts < len(fonts) else []

        width, height = DEVICE_VIEWPORTS.get(device, DEVICE_VIEWPORTS["Desktop"])
        background = colors[-1] if colors else "#FFFFFF"
        accent = colors[0] if colors else "#333333"
        body_font = f"'{fonts[0]}', sans-serif" if fonts else "sans-serif"

        head_lines = [
            "<head>",
            '<meta charset="utf-8">',
            '<meta name="viewport" content="width=device-width, initial-scale=1">',
            f"<title>{industry} - {screen}</title>",
        ]
        if fonts:
            families = "&".join(
                "family=" + font.replace(" ", "+") for font in fonts
            )
            head_lines.append(
                f'<link rel="stylesheet" href="https://fonts.googleapis.com/css2?{families}&display=swap">'
            )
        head_lines.append(
            "<style>\nbody { margin: 0; font-family: %s; }\n</style>" % body_font
        )
        head_lines.append("</head>")

        body_lines = [
            "<body>",
            f'<main style="width: {width}px; min-height: {height}px; '
            f'margin: 0 auto; background-color: {background};">',
            f'<header style="background-color: {accent}; padding: 24px;">',
        ]
        if logo_url:
            body_lines.append(f'<img src="{logo_url}" alt="logo" height="40">')
        body_lines.append(f'<h1 style="color: {background};">{industry}: {screen}</h1>')
        body_lines.append("</header>")
        if purpose:
            body_lines.append(f"<p>{purpose}</p>")
        if audience:
            body_lines.append(f"<p>Made for {audience}.</p>")
        for i, color in enumerate(colors):
            body_lines.append(
                f'<section style="background-color: {color}; padding: 16px;">'
                f"Palette swatch {i + 1}</section>"
            )
        for i, font in enumerate(fonts):
            body_lines.append(
                f'<p style="font-family: \'{font}\';">Sample text in {font}.</p>'
            )
        body_lines.append(
            f'<img src="https://placehold.co/{width}x300" alt="hero placeholder">'
        )
        body_lines.append("</main>")
        body_lines.append("</body>")

        return "\n".join(
            ['<!DOCTYPE html>', '<html lang="en">'] + head_lines + body_lines + ["</html>"]
        )


class HttpProvider:
    """Client for any service speaking the chat-completion JSON protocol.

    Sends one system message and one user message whose parts are the user
    text plus data-URL image parts. Failures surface as ProviderError with
    status and body excerpt; nothing is retried automatically.
    """

    label = "http"

    def __init__(self, endpoint: str, api_key: str | None, model_id: str,
                 timeout_s: float = DEFAULT_TIMEOUT_S,
                 max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
                 client: httpx.Client | None = None):
        if not endpoint:
            raise ProviderError("provider endpoint not configured")
        if not model_id:
            raise ProviderError("provider model id not configured")
        self.endpoint = endpoint.rstrip("/")
        self.api_key = api_key
        self.model_id = model_id
        self.default_model_id = model_id
        self.timeout_s = timeout_s
        self._slots = threading.Semaphore(max_in_flight)
        self._client = client or httpx.Client(timeout=timeout_s)

    def _user_content(self, req: CompletionRequest):
        parts = [{"type": "text", "text": req.user_text}]
        for attachment in req.image_attachments:
            encoded = base64.b64encode(attachment.data).decode("ascii")
            parts.append({
                "type": "image_url",
                "image_url": {"url": f"data:{attachment.media_type};base64,{encoded}"},
            })
        return parts

    def complete(self, req: CompletionRequest) -> CompletionResult:
        if not self.api_key:
            raise ProviderError("provider credential missing")
        payload = {
            "model": req.model_id,
            "messages": [
                {"role": "system", "content": req.system_text},
                {"role": "user", "content": self._user_content(req)},
            ],
            "max_tokens": req.max_output_tokens,
            "temperature": req.temperature,
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        start = time.perf_counter()
        with self._slots:
            try:
                response = self._client.post(
                    f"{self.endpoint}/chat/completions",
                    json=payload, headers=headers, timeout=self.timeout_s,
                )
            except httpx.TimeoutException as exc:
                raise ProviderError(f"provider timed out after {self.timeout_s}s") from exc
            except httpx.HTTPError as exc:
                raise ProviderError(f"provider request failed: {exc}") from exc
        latency_ms = (time.perf_counter() - start) * 1000.0
        if response.status_code < 200 or response.status_code >= 300:
            excerpt = response.text[:200]
            raise ProviderError(
                f"provider returned HTTP {response.status_code}: {excerpt}",
                status=response.status_code,
            )
        try:
            text = response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise ProviderError(f"unexpected provider response shape: {exc}") from exc
        return CompletionResult(raw_text=text or "", provider_label=self.label,
                                latency_ms=latency_ms)


def provider_from_env(name: str | None = None):
    """Build a provider from BRIEFCANVAS_* environment configuration.

    Secrets come only from the environment, never from CLI flags.
    """
    name = name or os.environ.get("BRIEFCANVAS_PROVIDER", "stub")
    if name == "stub":
        return StubProvider()
    if name == "http":
        return HttpProvider(
            endpoint=os.environ.get("BRIEFCANVAS_LLM_ENDPOINT", ""),
            api_key=os.environ.get("BRIEFCANVAS_LLM_API_KEY"),
            model_id=os.environ.get("BRIEFCANVAS_LLM_MODEL", ""),
            timeout_s=float(os.environ.get("BRIEFCANVAS_LLM_TIMEOUT", DEFAULT_TIMEOUT_S)),
            max_in_flight=int(os.environ.get("BRIEFCANVAS_LLM_CONCURRENCY", DEFAULT_MAX_IN_FLIGHT)),
        )
    raise ProviderError(f"unknown provider {name!r} (expected 'stub' or 'http')")
