"""Interactive expansion sessions: state machine, persistence, registry.

A session alternates between two states: ready-to-expand (the engine may
propose a batch) and awaiting-labels (a human owes labels for exactly
the pending batch).  There is never more than one batch in flight.
Sessions persist as one JSON file each, written atomically after every
accepted mutation, so a restart never loses an accepted label.

Per-session locks serialize mutating calls; a second writer gets a busy
error instead of blocking.  Models are loaded once and shared read-only.
"""

from __future__ import annotations

import dataclasses
import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path

from .embeddings import EmbeddingModel, load_word2vec_text, normalize_unit_l2
from .errors import NotFoundError, StateError, ValidationError
from .expansion import CLASSIFIER_METHODS, ExpansionConfig, propose_candidates
from .labeled import LabeledTermSet, update_labeled_set
from . import svm as _svm

SESSION_SCHEMA_VERSION = 1

STATUS_READY = "ready-to-expand"
STATUS_AWAITING = "awaiting-labels"
STATUS_CLOSED = "closed"

EXPORT_LABELED = "labeled-positives"
EXPORT_CLASSIFIER = "classifier-expanded"


@dataclass(frozen=True)
class Session:
    id: str
    model_id: str
    config: ExpansionConfig
    labeled: LabeledTermSet
    pending: tuple[str, ...]
    iteration: int
    history: tuple[int, ...]
    status: str

    def __post_init__(self):
        if self.status not in (STATUS_READY, STATUS_AWAITING, STATUS_CLOSED):
            raise ValidationError(f"unknown session status {self.status!r}")
        if bool(self.pending) != (self.status == STATUS_AWAITING):
            raise ValidationError("pending batch must exist exactly when awaiting labels")
        overlap = set(self.pending) & set(self.labeled.terms())
        if overlap:
            raise ValidationError(f"pending terms already labeled: {sorted(overlap)}")

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SESSION_SCHEMA_VERSION,
            "id": self.id,
            "model": self.model_id,
            "config": {
                "method": self.config.method,
                "k": self.config.k,
                "svm_c": self.config.svm_c,
                "rbf_gamma": self.config.rbf_gamma,
                "snr_epsilon": self.config.snr_epsilon,
            },
            "labeled": self.labeled.to_json_dict(),
            "pending": list(self.pending),
            "iteration": self.iteration,
            "history": list(self.history),
            "status": self.status,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "Session":
        try:
            version = payload["schema_version"]
        except (KeyError, TypeError):
            raise ValidationError("session document lacks schema_version") from None
        if version != SESSION_SCHEMA_VERSION:
            raise ValidationError(
                f"unsupported session schema {version!r} "
                f"(expected {SESSION_SCHEMA_VERSION})"
            )
        try:
            cfg = payload["config"]
            return cls(
                id=payload["id"],
                model_id=payload["model"],
                config=ExpansionConfig(
                    method=cfg["method"],
                    k=cfg["k"],
                    svm_c=cfg.get("svm_c", 1.0),
                    rbf_gamma=cfg.get("rbf_gamma"),
                    snr_epsilon=cfg.get("snr_epsilon", 1e-6),
                ),
                labeled=LabeledTermSet.from_json_dict(payload["labeled"]),
                pending=tuple(payload["pending"]),
                iteration=int(payload["iteration"]),
                history=tuple(int(h) for h in payload["history"]),
                status=payload["status"],
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed session document: {exc}") from None


def load_model_manifest(path) -> dict[str, EmbeddingModel]:
    """Load models from a JSON manifest: {id: path | {path, normalize}}.

    Vectors are unit-L2 normalized unless a per-model "normalize": false
    is given.
    """
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict) or not raw:
        raise ValidationError("manifest must be a non-empty JSON object")
    base = Path(path).parent
    models = {}
    for model_id, entry in raw.items():
        if isinstance(entry, str):
            vector_path, normalize = entry, True
        elif isinstance(entry, dict) and "path" in entry:
            vector_path = entry["path"]
            normalize = bool(entry.get("normalize", True))
        else:
            raise ValidationError(f"manifest entry {model_id!r} must be a path or object")
        resolved = Path(vector_path)
        if not resolved.is_absolute():
            resolved = base / resolved
        model = load_word2vec_text(resolved)
        models[model_id] = normalize_unit_l2(model) if normalize else model
    return models


class SessionService:
    """Registry of models and live sessions, with optional persistence."""

    def __init__(self, models: dict[str, EmbeddingModel], data_dir=None):
        if not models:
            raise ValidationError("service needs at least one registered model")
        self._models = dict(models)
        self._data_dir = Path(data_dir) if data_dir is not None else None
        if self._data_dir is not None:
            self._data_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    # -- registry ---------------------------------------------------------

    def list_models(self) -> list[dict]:
        return [
            {"id": model_id, "dim": model.dim, "vocab_size": len(model)}
            for model_id, model in sorted(self._models.items())
        ]

    def model(self, model_id: str) -> EmbeddingModel:
        try:
            return self._models[model_id]
        except KeyError:
            raise NotFoundError(f"unknown model {model_id!r}") from None

    # -- session lifecycle -------------------------------------------------

    def create_session(
        self,
        model_id: str,
        config: ExpansionConfig,
        seed_positives: list[str],
        seed_negatives: list[str],
    ) -> Session:
        model = self.model(model_id)
        if not seed_positives:
            raise ValidationError("need at least one positive seed")
        conflict = set(seed_positives) & set(seed_negatives)
        if conflict:
            raise ValidationError(f"terms seeded with both labels: {sorted(conflict)}")
        for term in list(seed_positives) + list(seed_negatives):
            if term not in model:
                raise ValidationError(f"seed term {term!r} not in vocabulary")
        labeled = LabeledTermSet.from_seeds(seed_positives, seed_negatives)
        session = Session(
            id=uuid.uuid4().hex,
            model_id=model_id,
            config=config,
            labeled=labeled,
            pending=(),
            iteration=0,
            history=(),
            status=STATUS_READY,
        )
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        self._persist(session)
        return session

    def get_session(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is None:
            session = self._load_from_disk(session_id)
        if session is None:
            raise NotFoundError(f"unknown session {session_id!r}")
        return session

    def request_candidates(self, session_id: str) -> list[str]:
        with self._writer(session_id):
            session = self.get_session(session_id)
            if session.status != STATUS_READY:
                raise StateError(
                    f"session {session_id} has labels outstanding; submit them first"
                )
            model = self.model(session.model_id)
            proposal = propose_candidates(model, session.labeled, session.config)
            if not proposal.candidates:
                raise StateError(
                    f"session {session_id}: vocabulary exhausted, nothing to label"
                )
            updated = dataclasses.replace(
                session,
                pending=tuple(proposal.candidates),
                status=STATUS_AWAITING,
            )
            self._install(updated)
            return list(updated.pending)

    def submit_labels(self, session_id: str, labels: dict[str, bool]) -> Session:
        with self._writer(session_id):
            session = self.get_session(session_id)
            if session.status != STATUS_AWAITING:
                raise StateError(
                    f"session {session_id} has no pending candidates to label"
                )
            pending = set(session.pending)
            got = set(labels)
            missing = sorted(pending - got)
            extra = sorted(got - pending)
            if missing or extra:
                parts = []
                if missing:
                    parts.append(f"missing: {missing}")
                if extra:
                    parts.append(f"unexpected: {extra}")
                raise ValidationError("; ".join(parts))
            ordered = [bool(labels[t]) for t in session.pending]
            grown = update_labeled_set(
                session.labeled, list(session.pending), ordered, session.iteration + 1
            )
            updated = dataclasses.replace(
                session,
                labeled=grown,
                pending=(),
                iteration=session.iteration + 1,
                history=session.history + (int(sum(ordered)),),
                status=STATUS_READY,
            )
            self._install(updated)
            return updated

    def export_lexicon(
        self, session_id: str, mode: str, threshold: float = 0.0
    ) -> list[dict]:
        if mode == EXPORT_LABELED:
            session = self.get_session(session_id)
            return [
                {"term": e.term, "provenance": e.provenance}
                for e in session.labeled.entries
                if e.label
            ]
        if mode != EXPORT_CLASSIFIER:
            raise ValidationError(f"unknown export mode {mode!r}")
        with self._writer(session_id):
            session = self.get_session(session_id)
            model = self.model(session.model_id)
            kernel = self._export_kernel(session.config, model.dim)
            trained = _svm.train_svm(
                session.labeled, model, kernel, c=session.config.svm_c
            )
            inferred = [
                {"term": term, "provenance": "inferred", "score": score}
                for term, score in _svm.classify_all(trained, model, session.labeled)
                if score > threshold
            ]
            annotated = [
                {"term": e.term, "provenance": e.provenance}
                for e in session.labeled.entries
                if e.label
            ]
            return annotated + inferred

    # -- persistence --------------------------------------------------------

    def restore(self, session_id: str) -> Session:
        session = self._load_from_disk(session_id)
        if session is None:
            raise NotFoundError(f"no persisted session {session_id!r}")
        return session

    def _session_path(self, session_id: str) -> Path:
        return self._data_dir / f"{session_id}.json"

    def _persist(self, session: Session) -> None:
        if self._data_dir is None:
            return
        path = self._session_path(session.id)
        payload = json.dumps(session.to_json_dict(), indent=2, sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=self._data_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def _load_from_disk(self, session_id: str) -> Session | None:
        if self._data_dir is None:
            return None
        path = self._session_path(session_id)
        if not path.exists():
            return None
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"corrupt session file {path.name}: {exc}") from None
        session = Session.from_json_dict(payload)
        with self._registry_lock:
            self._sessions[session_id] = session
            self._locks.setdefault(session_id, threading.Lock())
        return session

    # -- internals ----------------------------------------------------------

    def _install(self, session: Session) -> None:
        self._persist(session)
        self._sessions[session.id] = session

    def _writer(self, session_id: str):
        with self._registry_lock:
            lock = self._locks.get(session_id)
        if lock is None:
            # Unknown id: let get_session produce the not-found error
            # inside a fresh lock so the path stays uniform.
            self.get_session(session_id)
            with self._registry_lock:
                lock = self._locks[session_id]
        return _NonBlockingWriter(lock, session_id)

    @staticmethod
    def _export_kernel(config: ExpansionConfig, dim: int):
        if config.method in CLASSIFIER_METHODS:
            return _svm.kernel_for(config, dim)
        gamma = config.rbf_gamma if config.rbf_gamma is not None else 1.0 / dim
        return _svm.KernelSpec(_svm.KERNEL_RBF, gamma=gamma)


class _NonBlockingWriter:
    """Context manager turning lock contention into a busy error."""

    def __init__(self, lock: threading.Lock, session_id: str):
        self._lock = lock
        self._session_id = session_id

    def __enter__(self):
        if not self._lock.acquire(blocking=False):
            raise StateError(
                f"session {self._session_id} is busy with another request"
            )
        return self

    def __exit__(self, *exc_info):
        self._lock.release()
        return False
