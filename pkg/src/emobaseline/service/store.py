"""File-backed persistence: everything is a JSON/CSV file under one root.

Writes are atomic (write-temp-then-rename) and the whole state is
reconstructible by scanning the directory tree; content-addressed artifacts
(datasets, models, reports) carry sha256 sidecars verified on read.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path

from ..errors import StoreError
from ..protocol.clips import StimulusClip, load_pool
from ..protocol.planner import SessionPlan
from ..protocol.profile import SubjectProfile


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def short_hash(doc) -> str:
    """Stable 12-hex id from a JSON-serializable descriptor."""
    blob = json.dumps(doc, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


class Store:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "subjects").mkdir(exist_ok=True)
        (self.root / "idempotency").mkdir(exist_ok=True)
        self._global_lock = threading.Lock()
        self._subject_locks: dict[str, threading.Lock] = {}

    # -- locking ---------------------------------------------------------

    def subject_lock(self, subject_id: str) -> threading.Lock:
        with self._global_lock:
            if subject_id not in self._subject_locks:
                self._subject_locks[subject_id] = threading.Lock()
            return self._subject_locks[subject_id]

    # -- atomic primitives -----------------------------------------------

    def atomic_write_bytes(self, path: Path, data: bytes) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(f".{path.name}.tmp")
        tmp.write_bytes(data)
        os.replace(tmp, path)

    def atomic_write_text(self, path: Path, text: str) -> None:
        self.atomic_write_bytes(path, text.encode())

    def write_json(self, path: Path, doc) -> None:
        self.atomic_write_text(path, json.dumps(doc, indent=2))

    def read_json(self, path: Path):
        try:
            return json.loads(path.read_text())
        except OSError as exc:
            raise StoreError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise StoreError(f"corrupt JSON in {path}: {exc}") from exc

    def write_verified(self, path: Path, data: bytes) -> str:
        """Write an artifact plus its sha256 sidecar; returns the digest."""
        digest = sha256_bytes(data)
        self.atomic_write_bytes(path, data)
        self.write_json(path.with_suffix(path.suffix + ".meta.json"), {"sha256": digest})
        return digest

    def read_verified(self, path: Path) -> bytes:
        data = path.read_bytes()
        meta_path = path.with_suffix(path.suffix + ".meta.json")
        if meta_path.exists():
            expected = self.read_json(meta_path).get("sha256")
            actual = sha256_bytes(data)
            if expected != actual:
                raise StoreError(
                    f"content hash mismatch for {path}: expected {expected}, got {actual}"
                )
        return data

    # -- pool --------------------------------------------------------------

    @property
    def pool_path(self) -> Path:
        return self.root / "pool.json"

    def load_pool(self) -> list[StimulusClip]:
        if not self.pool_path.exists():
            raise StoreError(f"no stimulus pool at {self.pool_path}")
        return load_pool(self.pool_path)

    # -- subjects ----------------------------------------------------------

    def subject_dir(self, subject_id: str) -> Path:
        return self.root / "subjects" / subject_id

    def list_subjects(self) -> list[str]:
        return sorted(p.name for p in (self.root / "subjects").iterdir() if p.is_dir())

    def next_subject_id(self) -> str:
        existing = self.list_subjects()
        n = len(existing) + 1
        while f"sub-{n:04d}" in existing:
            n += 1
        return f"sub-{n:04d}"

    def has_subject(self, subject_id: str) -> bool:
        return (self.subject_dir(subject_id) / "profile.json").exists()

    def save_profile(self, profile: SubjectProfile) -> None:
        path = self.subject_dir(profile.subject_id) / "profile.json"
        self.write_json(path, profile.to_dict())

    def load_profile(self, subject_id: str) -> SubjectProfile:
        path = self.subject_dir(subject_id) / "profile.json"
        if not path.exists():
            raise StoreError(f"unknown subject {subject_id!r}")
        return SubjectProfile.from_dict(self.read_json(path))

    # -- plans and rankings --------------------------------------------------

    def save_plan(self, subject_id: str, plan: SessionPlan) -> None:
        path = self.subject_dir(subject_id) / "plans" / f"{plan.session_id}.json"
        self.write_json(path, plan.to_dict())

    def load_plan(self, subject_id: str, session_id: str) -> SessionPlan:
        path = self.subject_dir(subject_id) / "plans" / f"{session_id}.json"
        if not path.exists():
            raise StoreError(f"no plan {session_id!r} for subject {subject_id!r}")
        return SessionPlan.from_dict(self.read_json(path))

    def list_plans(self, subject_id: str) -> list[str]:
        plans_dir = self.subject_dir(subject_id) / "plans"
        if not plans_dir.exists():
            return []
        return sorted(p.stem for p in plans_dir.glob("*.json"))

    def save_rankings(self, subject_id: str, session_id: str, docs: list[dict]) -> None:
        path = self.subject_dir(subject_id) / "rankings" / f"{session_id}.json"
        self.write_json(path, docs)

    # -- recordings ------------------------------------------------------------

    def recordings_dir(self, subject_id: str) -> Path:
        return self.subject_dir(subject_id) / "recordings"

    def save_recording_file(
        self, subject_id: str, session_id: str, filename: str, data: bytes
    ) -> Path:
        safe = Path(filename).name
        path = self.recordings_dir(subject_id) / session_id / safe
        self.atomic_write_bytes(path, data)
        return path

    def list_recording_sessions(self, subject_id: str) -> list[Path]:
        root = self.recordings_dir(subject_id)
        if not root.exists():
            return []
        return sorted(p.parent for p in root.glob("*/manifest.json"))

    # -- datasets, models, reports ---------------------------------------------

    def dataset_path(self, subject_id: str, dataset_id: str) -> Path:
        return self.subject_dir(subject_id) / "datasets" / f"{dataset_id}.csv"

    def model_path(self, subject_id: str, model_id: str) -> Path:
        return self.subject_dir(subject_id) / "models" / f"{model_id}.json"

    def report_path(self, subject_id: str, run_id: str) -> Path:
        return self.subject_dir(subject_id) / "reports" / f"{run_id}.json"

    def find_model(self, model_id: str) -> tuple[str, Path]:
        """Resolve a model id to (subject_id, path) by directory scan."""
        for subject_id in self.list_subjects():
            path = self.model_path(subject_id, model_id)
            if path.exists():
                return subject_id, path
        raise StoreError(f"unknown model {model_id!r}")

    def find_dataset(self, subject_id: str, dataset_id: str | None) -> Path:
        ds_dir = self.subject_dir(subject_id) / "datasets"
        if dataset_id is not None:
            path = self.dataset_path(subject_id, dataset_id)
            if not path.exists():
                raise StoreError(f"unknown dataset {dataset_id!r}")
            return path
        candidates = sorted(ds_dir.glob("*.csv")) if ds_dir.exists() else []
        if not candidates:
            raise StoreError(f"subject {subject_id!r} has no datasets")
        return max(candidates, key=lambda p: p.stat().st_mtime)

    # -- idempotency -------------------------------------------------------------

    def idempotent_replay(self, key: str):
        path = self.root / "idempotency" / f"{key}.json"
        if path.exists():
            return self.read_json(path)
        return None

    def idempotent_record(self, key: str, status_code: int, body: dict) -> None:
        path = self.root / "idempotency" / f"{key}.json"
        self.write_json(path, {"status_code": status_code, "body": body})
