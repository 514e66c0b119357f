"""HTTP/JSON facade over the pipeline: subjects, sessions, rankings,
recordings, datasets, training runs, predictions, convergence."""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, File, Header, Request, UploadFile
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .. import __version__
from ..errors import (
    PipelineError,
    PlanError,
    PoolExhaustedError,
    QuestionnaireError,
    StoreError,
    ValidationError,
)
from ..features.dataset import read_dataset_csv, write_dataset_csv
from ..features.extract import DEFAULT_FEATURE_MASK, FEATURE_NAMES, extract_features
from ..features.windows import Window
from ..labels import Channel, EmotionLabel
from ..learn import make_classifier, model_from_dict, model_to_dict, variable_importance
from ..learn.forest import RandomForestClassifier
from ..eval.crossval import cross_validate, oob_evaluate
from ..eval.metrics import binarize_dataset
from ..pipeline import IngestParams, dataset_from_signals, ingest_session_dir
from ..protocol.clips import Ranking, pool_by_id
from ..protocol.convergence import check_convergence
from ..protocol.planner import PlanConstraints, generate_session
from ..protocol.profile import QuestionnaireAnswer, ingest_ranking, seed_profile
from ..protocol.validate import validate_plan
from .store import Store, sha256_bytes, short_hash

import json


@dataclass
class ServiceConfig:
    store_root: str = "./store"
    cors_origin: str | None = None
    constraints: PlanConstraints = field(default_factory=PlanConstraints)


class QuestionnaireItem(BaseModel):
    emotion: int
    tag: str
    affinity: int


class SubjectCreate(BaseModel):
    questionnaire: list[QuestionnaireItem]
    subject_id: str | None = None


class RankingItem(BaseModel):
    clip_id: str
    score: int
    evoked_emotion: int | None = None
    effective_span: tuple[float, float] | None = None
    notes: str = ""


class RankingsSubmit(BaseModel):
    rankings: list[RankingItem]


class DatasetBuild(BaseModel):
    w: int = 32
    min_rank: int | None = None
    with_skt: bool = False
    trim_s: float = 15.0


class TrainRequest(BaseModel):
    classifier: str = "rf"
    seed: int = 0
    dataset_id: str | None = None
    binary: bool = False
    cv_folds: int | None = None
    params: dict = {}


class PredictRequest(BaseModel):
    features: list[float] | None = None
    window: dict[str, list[float]] | None = None


_ERROR_STATUS = {
    ValidationError: 422,
    QuestionnaireError: 422,
    PoolExhaustedError: 409,
    PlanError: 409,
    StoreError: 404,
}


def create_app(config: ServiceConfig) -> FastAPI:
    store = Store(config.store_root)
    app = FastAPI(title="emobaseline", version=__version__)

    if config.cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(PipelineError)
    async def pipeline_error_handler(request: Request, exc: PipelineError):
        status = 500
        for cls, code in _ERROR_STATUS.items():
            if isinstance(exc, cls):
                status = code
                break
        return JSONResponse(
            status_code=status,
            content={"code": type(exc).__name__, "message": str(exc)},
        )

    def replay_or(key: str | None, producer):
        """Idempotent retry support: same key returns the recorded response."""
        if key:
            stored = store.idempotent_replay(key)
            if stored is not None:
                return JSONResponse(
                    status_code=stored["status_code"], content=stored["body"]
                )
        status_code, body = producer()
        if key:
            store.idempotent_record(key, status_code, body)
        return JSONResponse(status_code=status_code, content=body)

    # -- subjects -----------------------------------------------------------

    @app.post("/subjects")
    def create_subject(
        payload: SubjectCreate, idempotency_key: str | None = Header(default=None)
    ):
        def run():
            answers = [
                QuestionnaireAnswer(
                    emotion=EmotionLabel(item.emotion), tag=item.tag, affinity=item.affinity
                )
                for item in payload.questionnaire
            ]
            with store._global_lock:
                subject_id = payload.subject_id or store.next_subject_id()
                if store.has_subject(subject_id):
                    raise ValidationError(f"subject {subject_id!r} already exists")
                profile = seed_profile(answers, subject_id=subject_id)
                store.save_profile(profile)
            return 201, {"subject_id": subject_id}

        return replay_or(idempotency_key, run)

    @app.get("/subjects/{subject_id}")
    def get_subject(subject_id: str):
        profile = store.load_profile(subject_id)
        return {
            "subject_id": subject_id,
            "planned_sessions": profile.planned_sessions,
            "completed_sessions": profile.completed_sessions,
            "shown_clips": sorted(profile.shown_clips),
            "excluded_pairs": sorted(
                [tag, EmotionLabel(e).display_name] for tag, e in profile.excluded
            ),
            "rankings": len(profile.ranking_log),
        }

    # -- session planning ------------------------------------------------------

    def _pending_plan(profile, subject_id):
        for session_id in store.list_plans(subject_id):
            if session_id not in profile.completed_sessions:
                return store.load_plan(subject_id, session_id)
        return None

    @app.get("/subjects/{subject_id}/sessions/next")
    def next_session(subject_id: str):
        with store.subject_lock(subject_id):
            profile = store.load_profile(subject_id)
            pool = store.load_pool()
            pending = _pending_plan(profile, subject_id)
            if pending is not None:
                return pending.to_dict()
            cap = config.constraints.session_cap
            done = len(profile.completed_sessions)
            if done >= cap:
                raise PlanError(f"session cap of {cap} sessions reached")
            personalized = done == cap - 1
            plan = generate_session(
                profile,
                pool,
                config.constraints,
                personalized=personalized,
            )
            violations = validate_plan(
                plan, pool, profile, config.constraints,
                history=profile.shown_clips,
            )
            if violations:
                raise PlanError("generated plan failed validation: " + "; ".join(violations))
            profile.record_plan(
                plan.session_id,
                [b.clip_id for b in plan.clip_blocks],
                plan.emotions_covered,
                plan.majority_negative,
            )
            store.save_profile(profile)
            store.save_plan(subject_id, plan)
            return plan.to_dict()

    @app.post("/subjects/{subject_id}/sessions/{session_id}/rankings")
    def submit_rankings(
        subject_id: str,
        session_id: str,
        payload: RankingsSubmit,
        idempotency_key: str | None = Header(default=None),
    ):
        def run():
            with store.subject_lock(subject_id):
                profile = store.load_profile(subject_id)
                pool = store.load_pool()
                index = pool_by_id(pool)
                plan = store.load_plan(subject_id, session_id)
                plan_clips = {b.clip_id for b in plan.clip_blocks}
                for item in payload.rankings:
                    if item.clip_id not in plan_clips:
                        raise ValidationError(
                            f"clip {item.clip_id!r} is not part of session {session_id!r}"
                        )
                    ranking = Ranking(
                        clip_id=item.clip_id,
                        session_id=session_id,
                        score=item.score,
                        evoked_emotion=(
                            None
                            if item.evoked_emotion is None
                            else EmotionLabel(item.evoked_emotion)
                        ),
                        effective_span=item.effective_span,
                        notes=item.notes,
                    )
                    ingest_ranking(profile, ranking, index[ranking.clip_id])
                profile.mark_session_complete(session_id)
                store.save_profile(profile)
                store.save_rankings(
                    subject_id, session_id, [r.model_dump() for r in payload.rankings]
                )
                convergence = check_convergence(
                    profile, pool, session_cap=config.constraints.session_cap
                )
            return 200, {
                "accepted": len(payload.rankings),
                "convergence": convergence.to_dict(),
            }

        return replay_or(idempotency_key, run)

    @app.get("/subjects/{subject_id}/convergence")
    def convergence(subject_id: str):
        profile = store.load_profile(subject_id)
        pool = store.load_pool()
        return check_convergence(
            profile, pool, session_cap=config.constraints.session_cap
        ).to_dict()

    # -- recordings and datasets -------------------------------------------------

    @app.post("/subjects/{subject_id}/recordings")
    async def upload_recordings(
        subject_id: str,
        session_id: str,
        files: list[UploadFile] = File(...),
        idempotency_key: str | None = Header(default=None),
    ):
        contents = [(f.filename, await f.read()) for f in files]

        def run():
            if not store.has_subject(subject_id):
                raise StoreError(f"unknown subject {subject_id!r}")
            names = [name for name, _ in contents]
            if "manifest.json" not in names and not any(
                n.endswith("manifest.json") for n in names
            ):
                raise ValidationError("upload must include a manifest.json")
            with store.subject_lock(subject_id):
                saved = []
                for name, data in contents:
                    path = store.save_recording_file(subject_id, session_id, name, data)
                    saved.append(path.name)
            return 201, {"session_id": session_id, "files": sorted(saved)}

        return replay_or(idempotency_key, run)

    @app.post("/subjects/{subject_id}/datasets")
    def build_dataset_endpoint(
        subject_id: str,
        payload: DatasetBuild,
        idempotency_key: str | None = Header(default=None),
    ):
        def run():
            with store.subject_lock(subject_id):
                profile = store.load_profile(subject_id)
                session_dirs = store.list_recording_sessions(subject_id)
                if not session_dirs:
                    raise StoreError(f"subject {subject_id!r} has no recordings")
                source_hash = sha256_bytes(
                    b"".join(
                        sha256_bytes(p.read_bytes()).encode()
                        for d in session_dirs
                        for p in sorted(d.iterdir())
                    )
                )
                mask = (
                    tuple(FEATURE_NAMES) if payload.with_skt else DEFAULT_FEATURE_MASK
                )
                descriptor = {
                    "w": payload.w,
                    "min_rank": payload.min_rank,
                    "mask": list(mask),
                    "trim_s": payload.trim_s,
                    "source": source_hash,
                }
                dataset_id = short_hash(descriptor)
                path = store.dataset_path(subject_id, dataset_id)
                if not path.exists():
                    signals = [
                        ingest_session_dir(d, IngestParams(trim_s=payload.trim_s))
                        for d in session_dirs
                    ]
                    rankings = None
                    if payload.min_rank is not None:
                        rankings = {
                            entry.ranking.clip_id: entry.ranking.score
                            for entry in profile.ranking_log.values()
                        }
                    data = dataset_from_signals(
                        signals,
                        w=payload.w,
                        mask=mask,
                        min_rank=payload.min_rank,
                        rankings=rankings,
                    )
                    buf = io.StringIO()
                    write_dataset_csv_to(buf, data)
                    store.write_verified(path, buf.getvalue().encode())
                    store.write_json(
                        path.with_suffix(".descriptor.json"), descriptor
                    )
                    n, counts = len(data), data.class_counts()
                else:
                    data = read_dataset_csv(path, feature_mask=mask)
                    n, counts = len(data), data.class_counts()
            return 201, {
                "dataset_id": dataset_id,
                "n_instances": n,
                "class_counts": {str(k): v for k, v in sorted(counts.items())},
            }

        return replay_or(idempotency_key, run)

    # -- training and prediction ---------------------------------------------------

    @app.post("/subjects/{subject_id}/train")
    def train(
        subject_id: str,
        payload: TrainRequest,
        idempotency_key: str | None = Header(default=None),
    ):
        def run():
            with store.subject_lock(subject_id):
                ds_path = store.find_dataset(subject_id, payload.dataset_id)
                csv_bytes = store.read_verified(ds_path)
                descriptor_path = ds_path.with_suffix(".descriptor.json")
                mask = DEFAULT_FEATURE_MASK
                if descriptor_path.exists():
                    mask = tuple(store.read_json(descriptor_path)["mask"])
                data = read_dataset_csv(ds_path, feature_mask=mask)
                if payload.binary:
                    data = binarize_dataset(data)

                run_descriptor = {
                    "classifier": payload.classifier,
                    "seed": payload.seed,
                    "binary": payload.binary,
                    "params": payload.params,
                    "cv_folds": payload.cv_folds,
                    "dataset": sha256_bytes(csv_bytes),
                }
                model_id = short_hash(run_descriptor)
                model_path = store.model_path(subject_id, model_id)
                report_path = store.report_path(subject_id, model_id)
                if model_path.exists():
                    return 201, store.read_json(report_path)["body"]

                t0 = time.perf_counter()
                trainer = make_classifier(
                    payload.classifier, seed=payload.seed, **payload.params
                )
                report: dict = {}
                model = trainer.fit(data.X, data.y, feature_names=data.feature_names)
                if isinstance(model, RandomForestClassifier):
                    report["oob_error"] = model.oob_error_
                if payload.cv_folds:
                    cv = cross_validate(
                        data,
                        make_classifier(
                            payload.classifier, seed=payload.seed, **payload.params
                        ),
                        k=payload.cv_folds,
                        seed=payload.seed,
                    )
                    report["cv_error"] = cv.mean_error
                    report["confusion"] = cv.confusion.to_dict()
                train_error = float(np.mean(model.predict(data.X) != data.y))
                report["train_error"] = train_error
                body = {
                    "model_id": model_id,
                    "run": {
                        "run_id": model_id,
                        "params": run_descriptor,
                        "status": "done",
                        "timing_s": time.perf_counter() - t0,
                    },
                    "report": report,
                }
                store.write_verified(
                    model_path, json.dumps(model_to_dict(model)).encode()
                )
                store.write_json(report_path, {"body": body})
            return 201, body

        return replay_or(idempotency_key, run)

    def _load_model(model_id: str):
        _, path = store.find_model(model_id)
        return model_from_dict(json.loads(store.read_verified(path).decode()))

    @app.get("/models/{model_id}/importance")
    def importance(model_id: str):
        model = _load_model(model_id)
        if not hasattr(model, "importances_"):
            raise ValidationError(
                f"model {model_id!r} is a {type(model).__name__}; "
                "Gini importance requires a random forest"
            )
        ranked = variable_importance(model)
        return {
            "model_id": model_id,
            "importance": [
                {"rank": i + 1, "feature": name, "score": score}
                for i, (name, score) in enumerate(ranked)
            ],
        }

    @app.post("/models/{model_id}/predict")
    def predict(model_id: str, payload: PredictRequest):
        model = _load_model(model_id)
        if (payload.features is None) == (payload.window is None):
            raise ValidationError("provide exactly one of 'features' or 'window'")
        if payload.features is not None:
            vector = np.asarray(payload.features, dtype=np.float64)
        else:
            try:
                channels = {
                    Channel(name): np.asarray(vals, dtype=np.float64)
                    for name, vals in payload.window.items()
                }
            except ValueError as exc:
                raise ValidationError(f"unknown channel in window: {exc}") from exc
            window = Window(
                channels=channels,
                label=EmotionLabel.REST,
                session_id="live",
                window_start_s=0.0,
            )
            full = extract_features(window)
            names = getattr(model, "feature_names_in_", None)
            if names is None:
                raise ValidationError("model carries no feature names; send 'features'")
            idx = {name: i for i, name in enumerate(FEATURE_NAMES)}
            vector = full[[idx[str(n)] for n in names]]
        label = int(model.predict(vector.reshape(1, -1))[0])
        try:
            name = EmotionLabel(label).display_name
        except ValueError:
            name = {0: "Negative", 1: "Positive"}.get(label, str(label))
        return {"model_id": model_id, "label": label, "label_name": name}

    return app


def write_dataset_csv_to(buf, dataset) -> None:
    """write_dataset_csv against a text buffer instead of a path."""
    import csv as _csv

    from ..features.dataset import DATASET_HEADER

    w = _csv.writer(buf)
    w.writerow(DATASET_HEADER)
    for inst in dataset.instances:
        row = [
            inst.session_id,
            repr(float(inst.window_start_s)),
            int(inst.label),
            inst.clip_id or "",
        ]
        row += [repr(float(v)) for v in inst.features]
        w.writerow(row)
