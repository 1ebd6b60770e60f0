"""briefcanvas: constraint-driven UI ideation.

Turns structured design constraints into generated HTML prototypes through
a templated prompt pipeline, manages edit version chains, organizes results
into canvases and favorites, and scores each artifact's adherence to its
constraints.
"""

__version__ = "0.1.0"

from .constraints import (
    ConstraintSet,
    ValidationIssue,
    export_settings,
    import_settings,
    merge_preserving_locks,
    validate,
)
from .engine import DesignEngine, GeneratedDesign, VersionChain, extract_html
from .prompts import (
    ModificationRequest,
    PromptBundle,
    build_edit_prompt,
    build_system_prompt,
    build_user_prompt,
    expand_theme,
)
from .providers import HttpProvider, StubProvider, provider_from_env
from .adherence import AdherenceReport, evaluate, run_adherence_suite
from .store import WorkspaceStore
from .service import create_app

__all__ = [
    "AdherenceReport",
    "ConstraintSet",
    "DesignEngine",
    "GeneratedDesign",
    "HttpProvider",
    "ModificationRequest",
    "PromptBundle",
    "StubProvider",
    "ValidationIssue",
    "VersionChain",
    "WorkspaceStore",
    "build_edit_prompt",
    "build_system_prompt",
    "build_user_prompt",
    "create_app",
    "evaluate",
    "expand_theme",
    "export_settings",
    "extract_html",
    "import_settings",
    "merge_preserving_locks",
    "provider_from_env",
    "run_adherence_suite",
    "validate",
]
