"""HTTP facade over the whole pipeline.

Every route except login requires a bearer session token. All inner errors
map onto one machine code each; anything unmapped surfaces as code
"internal" so clients never see a bare 500. Generation is synchronous:
at ~20 s per provider call there is no need for a polling mode.
"""

from __future__ import annotations

import base64
import threading
from typing import Optional

from fastapi import Depends, FastAPI, File, Form, Header, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from pydantic import BaseModel

from . import __version__
from .adherence import evaluate
from .constraints import constraint_set_from_mapping, export_settings, import_settings
from .engine import (
    DesignEngine,
    chain_from_dict,
    chain_to_dict,
    design_specifications,
    design_to_dict,
)
from .errors import (
    AssetError,
    BriefcanvasError,
    ConflictError,
    ConstraintsInvalid,
    EvaluationError,
    GenerationMalformed,
    NotFoundError,
    ProviderError,
    SettingsParseError,
    UnauthorizedError,
)
from .options import load_options
from .prompts import ModificationRequest
from .store import WorkspaceStore

_ERROR_MAP = [
    (ConstraintsInvalid, 422, "validation-failed"),
    (SettingsParseError, 422, "validation-failed"),
    (AssetError, 422, "validation-failed"),
    (EvaluationError, 422, "validation-failed"),
    (NotFoundError, 404, "not-found"),
    (GenerationMalformed, 502, "generation-malformed"),
    (ProviderError, 502, "provider-error"),
    (UnauthorizedError, 401, "unauthorized"),
    (ConflictError, 409, "conflict"),
]


class LoginBody(BaseModel):
    username: str
    password: str


class GenerateBody(BaseModel):
    settings: dict
    seed: Optional[int] = None


class EditBody(BaseModel):
    target_selector: str
    preset_ops: list[str] = []
    free_text: str = ""


class NavigateBody(BaseModel):
    index: int


class CanvasBody(BaseModel):
    model_config = {"extra": "allow"}
    name: str


class FolderBody(BaseModel):
    name: str


class FavoriteBody(BaseModel):
    slot_id: str
    version_index: Optional[int] = None


class AdherenceBody(BaseModel):
    version_index: Optional[int] = None


class ExportBody(BaseModel):
    settings: dict


def create_app(data_dir, provider, catalog=None, renderer=None) -> FastAPI:
    store = WorkspaceStore(data_dir, renderer=renderer)
    engine = DesignEngine(provider=provider, catalog=catalog,
                          asset_loader=store.load_asset_internal)
    app = FastAPI(title="briefcanvas", version=__version__)
    app.state.store = store
    app.state.engine = engine

    slot_locks: dict[str, threading.Lock] = {}
    locks_mutex = threading.Lock()

    def slot_lock(slot_id: str) -> threading.Lock:
        with locks_mutex:
            return slot_locks.setdefault(slot_id, threading.Lock())

    def error_response(exc: Exception) -> JSONResponse:
        for exc_type, status, code in _ERROR_MAP:
            if isinstance(exc, exc_type):
                details = None
                if isinstance(exc, ConstraintsInvalid):
                    details = [
                        {"field": i.field, "code": i.code, "message": i.message}
                        for i in exc.issues
                    ]
                elif isinstance(exc, SettingsParseError):
                    details = {"byte_offset": exc.byte_offset}
                body = {"error": {"code": code, "message": str(exc)}}
                if details is not None:
                    body["error"]["details"] = details
                return JSONResponse(status_code=status, content=body)
        return JSONResponse(
            status_code=500,
            content={"error": {"code": "internal", "message": str(exc)}})

    @app.exception_handler(BriefcanvasError)
    async def _domain_error(request: Request, exc: BriefcanvasError):
        return error_response(exc)

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "validation-failed", "message": str(exc)}})

    @app.exception_handler(RequestValidationError)
    async def _body_shape_error(request: Request, exc: RequestValidationError):
        details = [
            {"loc": [str(part) for part in err.get("loc", ())],
             "msg": err.get("msg", ""), "type": err.get("type", "")}
            for err in exc.errors()
        ]
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "validation-failed",
                               "message": "request body failed validation",
                               "details": details}})

    @app.exception_handler(Exception)
    async def _unmapped(request: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"error": {"code": "internal", "message": str(exc)}})

    def current_user(authorization: str = Header(default="")) -> str:
        scheme, _, token = authorization.partition(" ")
        if scheme.lower() != "bearer" or not token:
            raise UnauthorizedError("missing bearer token")
        return store.resolve_session(token.strip())

    def load_chain(owner: str, slot_id: str):
        return chain_from_dict(store.load_chain(owner, slot_id))

    def version_descriptor(chain) -> dict:
        return {
            "slot_id": chain.slot_id,
            "version_index": chain.current_index,
            "version_count": len(chain.versions),
            "design": design_to_dict(chain.current),
        }

    # -- auth ----------------------------------------------------------------

    @app.post("/auth/login")
    def auth_login(body: LoginBody):
        token, expires = store.login(body.username, body.password)
        return {"token": token, "expires_at": expires.isoformat()}

    @app.post("/auth/logout")
    def auth_logout(authorization: str = Header(default=""),
                    user: str = Depends(current_user)):
        store.logout(authorization.partition(" ")[2].strip())
        return {"ok": True}

    # -- options ---------------------------------------------------------------

    @app.get("/catalog/options")
    def catalog_options(user: str = Depends(current_user)):
        return load_options()

    # -- designs -----------------------------------------------------------------

    @app.post("/designs:generate")
    def designs_generate(body: GenerateBody, user: str = Depends(current_user)):
        cs = constraint_set_from_mapping(body.settings)
        design = engine.generate(cs, seed=body.seed)
        chain = engine.new_chain(design)
        store.save_chain(user, chain_to_dict(chain))
        return version_descriptor(chain)

    @app.post("/designs/{slot_id}/edit")
    def designs_edit(slot_id: str, body: EditBody, user: str = Depends(current_user)):
        req = ModificationRequest(
            target_selector=body.target_selector,
            preset_ops=frozenset(body.preset_ops),
            free_text=body.free_text,
        )
        with slot_lock(slot_id):
            chain = load_chain(user, slot_id)
            engine.regenerate_with_edit(chain, req)
            store.save_chain(user, chain_to_dict(chain))
        return version_descriptor(chain)

    @app.get("/designs/{slot_id}/versions")
    def designs_versions(slot_id: str, user: str = Depends(current_user)):
        chain = load_chain(user, slot_id)
        return {
            "slot_id": chain.slot_id,
            "current_index": chain.current_index,
            "versions": [
                {"index": i, "id": d.id, "created_at": d.created_at.isoformat(),
                 "prompt_fingerprint": d.prompt_fingerprint}
                for i, d in enumerate(chain.versions)
            ],
        }

    @app.get("/designs/{slot_id}/versions/{index}")
    def designs_version(slot_id: str, index: int, user: str = Depends(current_user)):
        chain = load_chain(user, slot_id)
        if not 0 <= index < len(chain.versions):
            raise NotFoundError(f"version {index} not found")
        return design_to_dict(chain.versions[index])

    @app.get("/designs/{slot_id}/versions/{index}/download")
    def designs_download(slot_id: str, index: int, user: str = Depends(current_user)):
        chain = load_chain(user, slot_id)
        if not 0 <= index < len(chain.versions):
            raise NotFoundError(f"version {index} not found")
        design = chain.versions[index]
        return Response(
            content=design.html_document.encode("utf-8"),
            media_type="text/html",
            headers={"Content-Disposition": f'attachment; filename="{design.id}.html"'},
        )

    @app.put("/designs/{slot_id}/current")
    def designs_navigate(slot_id: str, body: NavigateBody,
                         user: str = Depends(current_user)):
        with slot_lock(slot_id):
            chain = load_chain(user, slot_id)
            try:
                chain.navigate(body.index)
            except IndexError as exc:
                raise NotFoundError(str(exc)) from exc
            store.save_chain(user, chain_to_dict(chain))
        return version_descriptor(chain)

    @app.post("/designs/{slot_id}/duplicate")
    def designs_duplicate(slot_id: str, user: str = Depends(current_user)):
        chain = load_chain(user, slot_id)
        fresh = engine.duplicate(chain)
        store.save_chain(user, chain_to_dict(fresh))
        return version_descriptor(fresh)

    @app.delete("/designs/{slot_id}")
    def designs_delete(slot_id: str, user: str = Depends(current_user)):
        store.delete_chain(user, slot_id)
        return {"ok": True}

    @app.get("/designs/{slot_id}/spec-sheet")
    def designs_spec_sheet(slot_id: str, user: str = Depends(current_user)):
        chain = load_chain(user, slot_id)
        return PlainTextResponse(design_specifications(chain.current))

    @app.post("/designs/{slot_id}/adherence")
    def designs_adherence(slot_id: str, body: Optional[AdherenceBody] = None,
                          user: str = Depends(current_user)):
        chain = load_chain(user, slot_id)
        index = chain.current_index
        if body is not None and body.version_index is not None:
            index = body.version_index
        if not 0 <= index < len(chain.versions):
            raise NotFoundError(f"version {index} not found")
        design = chain.versions[index]
        cs = design.constraints_snapshot
        logo_data_url = None
        if cs.logo is not None:
            loaded = store.load_asset_internal(cs.logo)
            if loaded is not None:
                media_type, data = loaded
                encoded = base64.b64encode(data).decode("ascii")
                logo_data_url = f"data:{media_type};base64,{encoded}"
        report = evaluate(
            design.html_document, cs,
            declared_viewport=design.device_viewport,
            logo_data_url=logo_data_url,
            design_id=design.id,
        )
        return report.as_dict()

    # -- canvases --------------------------------------------------------------

    @app.post("/canvases")
    def canvases_create(body: CanvasBody, user: str = Depends(current_user)):
        return store.save_canvas(user, body.model_dump())

    @app.get("/canvases")
    def canvases_list(user: str = Depends(current_user)):
        return store.list_canvases(user)

    @app.get("/canvases/{canvas_id}")
    def canvases_get(canvas_id: str, user: str = Depends(current_user)):
        return store.load_canvas(user, canvas_id)

    @app.put("/canvases/{canvas_id}")
    def canvases_update(canvas_id: str, body: CanvasBody,
                        user: str = Depends(current_user)):
        payload = body.model_dump()
        payload["id"] = canvas_id
        return store.save_canvas(user, payload)

    @app.delete("/canvases/{canvas_id}")
    def canvases_delete(canvas_id: str, user: str = Depends(current_user)):
        store.delete_canvas(user, canvas_id)
        return {"ok": True}

    # -- favorites ----------------------------------------------------------------

    @app.post("/folders")
    def folders_create(body: FolderBody, user: str = Depends(current_user)):
        return store.create_folder(user, body.name)

    @app.get("/folders")
    def folders_list(user: str = Depends(current_user)):
        return store.list_folders(user)

    @app.delete("/folders/{folder_id}")
    def folders_delete(folder_id: str, user: str = Depends(current_user)):
        store.delete_folder(user, folder_id)
        return {"ok": True}

    @app.post("/folders/{folder_id}/entries")
    def folders_add_entry(folder_id: str, body: FavoriteBody,
                          user: str = Depends(current_user)):
        chain = load_chain(user, body.slot_id)
        index = chain.current_index if body.version_index is None else body.version_index
        if not 0 <= index < len(chain.versions):
            raise NotFoundError(f"version {index} not found")
        design = chain.versions[index]
        snapshot = {
            "design_id": design.id,
            "slot_id": chain.slot_id,
            "version_index": index,
            "html": design.html_document,
            "constraints": design_to_dict(design)["constraints_snapshot"],
            "viewport": list(design.device_viewport),
        }
        return store.save_to_favorites(user, folder_id, snapshot)

    @app.get("/folders/{folder_id}")
    def folders_get(folder_id: str, user: str = Depends(current_user)):
        return {"id": folder_id, "entries": store.list_folder(user, folder_id)}

    # -- assets ------------------------------------------------------------------

    @app.post("/assets")
    def assets_upload(file: UploadFile = File(...), kind: str = Form("logo"),
                      user: str = Depends(current_user)):
        data = file.file.read()
        asset_id, url = store.store_asset(user, data, kind)
        return {"id": asset_id, "url": url}

    @app.get("/assets/{asset_id}")
    def assets_get(asset_id: str, user: str = Depends(current_user)):
        content_type, data = store.get_asset(user, asset_id)
        return Response(content=data, media_type=content_type)

    # -- settings ------------------------------------------------------------------

    @app.post("/settings/import")
    async def settings_import(request: Request, user: str = Depends(current_user)):
        cs = import_settings(await request.body())
        # Hand back the normalized canonical form.
        return Response(content=export_settings(cs), media_type="application/json")

    @app.post("/settings/export")
    def settings_export(body: ExportBody, user: str = Depends(current_user)):
        cs = constraint_set_from_mapping(body.settings)
        return Response(content=export_settings(cs), media_type="application/json")

    return app
