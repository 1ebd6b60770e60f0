"""Persistence for users, canvases, design slots, favorites, and assets.

Backed by an embedded sqlite database plus an assets/ directory; the whole
data directory is the backup unit. A single process owns a data directory
at a time (advisory flock). Every mutating call commits before returning,
so a restart after save yields identical state.

Favorites entries are immutable snapshots of a design version: later edits,
regenerations, or canvas deletions never touch them.
"""

from __future__ import annotations

import fcntl
import io
import json
import math
import secrets
import sqlite3
import threading
import uuid
from datetime import datetime, timedelta, timezone
from hashlib import scrypt
from pathlib import Path

from PIL import Image, UnidentifiedImageError

from .assets import asset_url
from .errors import AssetError, ConflictError, NotFoundError, UnauthorizedError

MAX_ASSET_BYTES = 5 * 1024 * 1024
SESSION_TTL = timedelta(hours=24)
ASSET_KINDS = ("logo", "thumbnail", "reference-image")

_SCRYPT_N = 2 ** 14
_SCRYPT_R = 8
_SCRYPT_P = 1

_SCHEMA = """
CREATE TABLE IF NOT EXISTS users (
    id TEXT PRIMARY KEY, login TEXT UNIQUE NOT NULL,
    pw_hash BLOB NOT NULL, salt BLOB NOT NULL, created_at TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS sessions (
    token TEXT PRIMARY KEY, user_id TEXT NOT NULL, expires_at TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS canvases (
    id TEXT PRIMARY KEY, owner TEXT NOT NULL, name TEXT NOT NULL,
    payload TEXT NOT NULL, saved_at TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS slots (
    slot_id TEXT PRIMARY KEY, owner TEXT NOT NULL,
    payload TEXT NOT NULL, updated_at TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS folders (
    id TEXT PRIMARY KEY, owner TEXT NOT NULL, name TEXT NOT NULL,
    created_at TEXT NOT NULL, UNIQUE(owner, name));
CREATE TABLE IF NOT EXISTS folder_entries (
    id TEXT PRIMARY KEY, folder_id TEXT NOT NULL,
    payload TEXT NOT NULL, saved_at TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS assets (
    id TEXT PRIMARY KEY, owner TEXT NOT NULL, kind TEXT NOT NULL,
    content_type TEXT NOT NULL, path TEXT NOT NULL, created_at TEXT NOT NULL);
"""

_FORMAT_TYPES = {"PNG": "image/png", "JPEG": "image/jpeg", "GIF": "image/gif",
                 "WEBP": "image/webp"}


def _now() -> datetime:
    return datetime.now(timezone.utc)


def _hash_password(password: str, salt: bytes) -> bytes:
    return scrypt(password.encode("utf-8"), salt=salt,
                  n=_SCRYPT_N, r=_SCRYPT_R, p=_SCRYPT_P, dklen=32)


def placeholder_thumbnail() -> bytes:
    """Neutral preview used when no HTML renderer is configured."""
    img = Image.new("RGB", (160, 100), (229, 231, 235))
    out = io.BytesIO()
    img.save(out, format="PNG")
    return out.getvalue()


class WorkspaceStore:
    """All operations are transactional and safe under concurrent callers;
    per-canvas writes are last-writer-wins."""

    def __init__(self, data_dir, renderer=None):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.assets_dir = self.data_dir / "assets"
        self.assets_dir.mkdir(exist_ok=True)
        self.renderer = renderer  # optional: (html, viewport) -> png bytes

        # Single-process guard: two service instances over one data dir are
        # unsupported, so fail fast instead of corrupting state.
        self._lock_file = (self.data_dir / ".lock").open("w")
        try:
            fcntl.flock(self._lock_file, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError as exc:
            raise ConflictError(f"data directory {self.data_dir} is already in use") from exc

        self._db = sqlite3.connect(self.data_dir / "workspace.db", check_same_thread=False)
        self._db.row_factory = sqlite3.Row
        self._mutex = threading.RLock()
        with self._mutex:
            self._db.executescript(_SCHEMA)
            self._db.commit()

    def close(self):
        with self._mutex:
            self._db.close()
        fcntl.flock(self._lock_file, fcntl.LOCK_UN)
        self._lock_file.close()

    # -- users and sessions ------------------------------------------------

    def create_user(self, login: str, password: str) -> str:
        if not login or not password:
            raise ValueError("login and password must be non-empty")
        salt = secrets.token_bytes(16)
        user_id = uuid.uuid4().hex
        with self._mutex:
            try:
                self._db.execute(
                    "INSERT INTO users (id, login, pw_hash, salt, created_at) VALUES (?,?,?,?,?)",
                    (user_id, login, _hash_password(password, salt), salt,
                     _now().isoformat()))
                self._db.commit()
            except sqlite3.IntegrityError as exc:
                raise ConflictError(f"login {login!r} already exists") from exc
        return user_id

    def login(self, login: str, password: str) -> tuple[str, datetime]:
        with self._mutex:
            row = self._db.execute(
                "SELECT id, pw_hash, salt FROM users WHERE login = ?", (login,)).fetchone()
        if row is None or _hash_password(password, row["salt"]) != row["pw_hash"]:
            raise UnauthorizedError("unknown login or wrong password")
        token = secrets.token_hex(32)
        expires = _now() + SESSION_TTL
        with self._mutex:
            self._db.execute(
                "INSERT INTO sessions (token, user_id, expires_at) VALUES (?,?,?)",
                (token, row["id"], expires.isoformat()))
            self._db.commit()
        return token, expires

    def logout(self, token: str):
        with self._mutex:
            self._db.execute("DELETE FROM sessions WHERE token = ?", (token,))
            self._db.commit()

    def resolve_session(self, token: str) -> str:
        """Map a bearer token to a user id; expired tokens are purged."""
        with self._mutex:
            row = self._db.execute(
                "SELECT user_id, expires_at FROM sessions WHERE token = ?", (token,)).fetchone()
            if row is None:
                raise UnauthorizedError("invalid session token")
            if datetime.fromisoformat(row["expires_at"]) < _now():
                self._db.execute("DELETE FROM sessions WHERE token = ?", (token,))
                self._db.commit()
                raise UnauthorizedError("session expired")
        return row["user_id"]

    # -- canvases ----------------------------------------------------------

    @staticmethod
    def _check_canvas(payload: dict):
        if not str(payload.get("name", "")).strip():
            raise ValueError("canvas name must be non-empty")
        seen = set()
        for slot in payload.get("slots", []):
            sid = slot.get("slot_id")
            if sid in seen:
                raise ValueError(f"duplicate slot {sid!r} on canvas")
            seen.add(sid)
            for axis in ("x", "y", "w", "h"):
                value = slot.get(axis, 0)
                if not isinstance(value, (int, float)) or not math.isfinite(value):
                    raise ValueError(f"slot {sid!r} has non-finite {axis}")

    def save_canvas(self, owner: str, payload: dict) -> dict:
        """Upsert the full canvas (slots + panel state). Returns metadata."""
        self._check_canvas(payload)
        canvas_id = payload.get("id") or uuid.uuid4().hex
        saved_at = _now().isoformat()
        stored = dict(payload, id=canvas_id, saved_at=saved_at)
        with self._mutex:
            existing = self._db.execute(
                "SELECT owner FROM canvases WHERE id = ?", (canvas_id,)).fetchone()
            if existing is not None and existing["owner"] != owner:
                raise NotFoundError(f"canvas {canvas_id} not found")
            self._db.execute(
                "INSERT INTO canvases (id, owner, name, payload, saved_at) VALUES (?,?,?,?,?) "
                "ON CONFLICT(id) DO UPDATE SET name=excluded.name, "
                "payload=excluded.payload, saved_at=excluded.saved_at",
                (canvas_id, owner, stored["name"], json.dumps(stored), saved_at))
            self._db.commit()
        return {"id": canvas_id, "name": stored["name"], "saved_at": saved_at}

    def load_canvas(self, owner: str, canvas_id: str) -> dict:
        with self._mutex:
            row = self._db.execute(
                "SELECT payload FROM canvases WHERE id = ? AND owner = ?",
                (canvas_id, owner)).fetchone()
        if row is None:
            raise NotFoundError(f"canvas {canvas_id} not found")
        return json.loads(row["payload"])

    def list_canvases(self, owner: str) -> list[dict]:
        with self._mutex:
            rows = self._db.execute(
                "SELECT id, name, saved_at, payload FROM canvases WHERE owner = ? "
                "ORDER BY saved_at DESC, id", (owner,)).fetchall()
        out = []
        for row in rows:
            payload = json.loads(row["payload"])
            out.append({"id": row["id"], "name": row["name"], "saved_at": row["saved_at"],
                        "slot_count": len(payload.get("slots", []))})
        return out

    def delete_canvas(self, owner: str, canvas_id: str):
        """Removes the canvas only; favorites snapshots are untouched."""
        with self._mutex:
            cur = self._db.execute(
                "DELETE FROM canvases WHERE id = ? AND owner = ?", (canvas_id, owner))
            self._db.commit()
        if cur.rowcount == 0:
            raise NotFoundError(f"canvas {canvas_id} not found")

    # -- design slots --------------------------------------------------------

    def save_chain(self, owner: str, chain_payload: dict):
        with self._mutex:
            existing = self._db.execute(
                "SELECT owner FROM slots WHERE slot_id = ?",
                (chain_payload["slot_id"],)).fetchone()
            if existing is not None and existing["owner"] != owner:
                raise NotFoundError(f"design slot {chain_payload['slot_id']} not found")
            self._db.execute(
                "INSERT INTO slots (slot_id, owner, payload, updated_at) VALUES (?,?,?,?) "
                "ON CONFLICT(slot_id) DO UPDATE SET payload=excluded.payload, "
                "updated_at=excluded.updated_at",
                (chain_payload["slot_id"], owner, json.dumps(chain_payload),
                 _now().isoformat()))
            self._db.commit()

    def load_chain(self, owner: str, slot_id: str) -> dict:
        with self._mutex:
            row = self._db.execute(
                "SELECT payload FROM slots WHERE slot_id = ? AND owner = ?",
                (slot_id, owner)).fetchone()
        if row is None:
            raise NotFoundError(f"design slot {slot_id} not found")
        return json.loads(row["payload"])

    def delete_chain(self, owner: str, slot_id: str):
        with self._mutex:
            cur = self._db.execute(
                "DELETE FROM slots WHERE slot_id = ? AND owner = ?", (slot_id, owner))
            self._db.commit()
        if cur.rowcount == 0:
            raise NotFoundError(f"design slot {slot_id} not found")

    # -- favorites -----------------------------------------------------------

    def create_folder(self, owner: str, name: str) -> dict:
        if not name.strip():
            raise ValueError("folder name must be non-empty")
        folder_id = uuid.uuid4().hex
        with self._mutex:
            try:
                self._db.execute(
                    "INSERT INTO folders (id, owner, name, created_at) VALUES (?,?,?,?)",
                    (folder_id, owner, name, _now().isoformat()))
                self._db.commit()
            except sqlite3.IntegrityError as exc:
                raise ConflictError(f"folder {name!r} already exists") from exc
        return {"id": folder_id, "name": name}

    def list_folders(self, owner: str) -> list[dict]:
        with self._mutex:
            rows = self._db.execute(
                "SELECT id, name, created_at FROM folders WHERE owner = ? ORDER BY name",
                (owner,)).fetchall()
            out = []
            for row in rows:
                count = self._db.execute(
                    "SELECT COUNT(*) AS n FROM folder_entries WHERE folder_id = ?",
                    (row["id"],)).fetchone()["n"]
                out.append({"id": row["id"], "name": row["name"],
                            "created_at": row["created_at"], "entry_count": count})
        return out

    def delete_folder(self, owner: str, folder_id: str):
        with self._mutex:
            cur = self._db.execute(
                "DELETE FROM folders WHERE id = ? AND owner = ?", (folder_id, owner))
            if cur.rowcount:
                self._db.execute(
                    "DELETE FROM folder_entries WHERE folder_id = ?", (folder_id,))
            self._db.commit()
        if cur.rowcount == 0:
            raise NotFoundError(f"folder {folder_id} not found")

    def _require_folder(self, owner: str, folder_id: str):
        row = self._db.execute(
            "SELECT id FROM folders WHERE id = ? AND owner = ?",
            (folder_id, owner)).fetchone()
        if row is None:
            raise NotFoundError(f"folder {folder_id} not found")

    def save_to_favorites(self, owner: str, folder_id: str, snapshot: dict) -> dict:
        """Store an immutable snapshot of the design version being viewed."""
        entry_id = uuid.uuid4().hex
        saved_at = _now().isoformat()
        thumb_id = None
        png = None
        if self.renderer is not None:
            try:
                png = self.renderer(snapshot.get("html", ""), snapshot.get("viewport"))
            except Exception:
                png = None  # previews are best-effort, never blocking
        if png is None:
            png = placeholder_thumbnail()
        thumb_id, _ = self.store_asset(owner, png, "thumbnail")
        entry = dict(snapshot, id=entry_id, thumbnail=thumb_id, saved_at=saved_at)
        with self._mutex:
            self._require_folder(owner, folder_id)
            self._db.execute(
                "INSERT INTO folder_entries (id, folder_id, payload, saved_at) VALUES (?,?,?,?)",
                (entry_id, folder_id, json.dumps(entry), saved_at))
            self._db.commit()
        return entry

    def list_folder(self, owner: str, folder_id: str) -> list[dict]:
        with self._mutex:
            self._require_folder(owner, folder_id)
            rows = self._db.execute(
                "SELECT payload FROM folder_entries WHERE folder_id = ? ORDER BY saved_at, id",
                (folder_id,)).fetchall()
        return [json.loads(row["payload"]) for row in rows]

    # -- assets ----------------------------------------------------------------

    def store_asset(self, owner: str, data: bytes, kind: str) -> tuple[str, str]:
        """Persist an uploaded image; returns (asset id, served URL)."""
        if kind not in ASSET_KINDS:
            raise ValueError(f"unknown asset kind {kind!r}")
        if len(data) > MAX_ASSET_BYTES:
            raise AssetError(f"asset exceeds {MAX_ASSET_BYTES} bytes")
        try:
            with Image.open(io.BytesIO(data)) as img:
                img.load()
                content_type = _FORMAT_TYPES.get(img.format or "", "image/png")
        except (UnidentifiedImageError, OSError) as exc:
            raise AssetError(f"asset does not decode as an image: {exc}") from exc
        asset_id = uuid.uuid4().hex
        path = self.assets_dir / asset_id
        path.write_bytes(data)
        with self._mutex:
            self._db.execute(
                "INSERT INTO assets (id, owner, kind, content_type, path, created_at) "
                "VALUES (?,?,?,?,?,?)",
                (asset_id, owner, kind, content_type, str(path), _now().isoformat()))
            self._db.commit()
        return asset_id, asset_url(asset_id)

    def get_asset(self, owner: str, asset_id: str) -> tuple[str, bytes]:
        with self._mutex:
            row = self._db.execute(
                "SELECT content_type, path FROM assets WHERE id = ? AND owner = ?",
                (asset_id, owner)).fetchone()
        if row is None:
            raise NotFoundError(f"asset {asset_id} not found")
        return row["content_type"], Path(row["path"]).read_bytes()

    def load_asset_internal(self, asset_id: str) -> tuple[str, bytes] | None:
        """Owner-agnostic lookup for server-internal use (prompt logo bytes).

        Ownership is enforced at the HTTP boundary, not here.
        """
        with self._mutex:
            row = self._db.execute(
                "SELECT content_type, path FROM assets WHERE id = ?", (asset_id,)).fetchone()
        if row is None:
            return None
        return row["content_type"], Path(row["path"]).read_bytes()
