"""Command-line interface.

Exit codes: 0 success, 1 pipeline/invariant violation, 2 bad arguments.
Every subcommand accepts --seed and is deterministic given its inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import PipelineError
from .eval.crossval import cross_validate, oob_evaluate
from .eval.experiments import ablation_skt, compare_classifiers, sweep_text, window_sweep
from .eval.metrics import binarize_dataset
from .eval.synthetic import (
    SyntheticSpec,
    block_schedule,
    generate_synthetic_subject,
    protocol_schedule,
    table_shape_schedule,
)
from .features.dataset import read_dataset_csv, write_dataset_csv
from .features.extract import DEFAULT_FEATURE_MASK, FEATURE_NAMES
from .learn import CLASSIFIERS, make_classifier, save_model, load_model, variable_importance
from .learn.forest import RandomForestClassifier
from .pipeline import IngestParams, dataset_from_signals, ingest_recordings_root
from .protocol.clips import load_pool
from .protocol.planner import SessionPlan
from .protocol.profile import SubjectProfile
from .protocol.validate import validate_plan
from .signal.io import read_labeled_csv, write_labeled_csv


def _add_seed(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="deterministic seed")


def _cmd_synth(args) -> int:
    spec = SyntheticSpec.gaussian(
        separability=args.separability,
        seed=args.seed,
        skt_mode=args.skt_mode,
        wrist_offset_ms=args.wrist_offset_ms,
    )
    if args.shape == "table1":
        schedules = [table_shape_schedule()]
    elif args.shape == "blocks":
        schedules = block_schedule(
            n_sessions=args.sessions, emotion_block_s=args.block_s
        )
    else:
        schedules = protocol_schedule(seed=args.seed, n_sessions=args.sessions)
    subject = generate_synthetic_subject(spec, schedules, seed=args.seed)
    dirs = subject.write(args.out)
    print(f"wrote {len(dirs)} session(s) under {args.out}")
    return 0


def _cmd_ingest(args) -> int:
    params = IngestParams(trim_s=args.trim_s, median_order=args.median_order)
    signals = ingest_recordings_root(args.recordings, params)
    write_labeled_csv(args.out, signals)
    total = sum(len(s) for s in signals)
    print(f"ingested {len(signals)} session(s), {total} samples -> {args.out}")
    return 0


def _load_rankings_file(path: str | None):
    if path is None:
        return None
    doc = json.loads(Path(path).read_text())
    return {str(k): int(v) for k, v in doc.items()}


def _cmd_features(args) -> int:
    signals = read_labeled_csv(args.signals)
    mask = tuple(FEATURE_NAMES) if args.with_skt else DEFAULT_FEATURE_MASK
    data = dataset_from_signals(
        signals,
        w=args.w,
        mask=mask,
        min_rank=args.min_rank,
        rankings=_load_rankings_file(args.rankings),
    )
    write_dataset_csv(args.out, data)
    print(f"built {len(data)} instances x {len(data.feature_mask)} features -> {args.out}")
    return 0


def _read_dataset(args):
    mask = tuple(FEATURE_NAMES) if getattr(args, "with_skt", False) else DEFAULT_FEATURE_MASK
    data = read_dataset_csv(args.dataset, feature_mask=mask)
    if getattr(args, "binary", False):
        data = binarize_dataset(data)
    return data


def _cmd_train(args) -> int:
    data = _read_dataset(args)
    params = json.loads(args.params) if args.params else {}
    model = make_classifier(args.clf, seed=args.seed, **params)
    model.fit(data.X, data.y, feature_names=data.feature_names)
    save_model(model, args.out)
    print(f"trained {args.clf} on {len(data)} instances -> {args.out}")
    if isinstance(model, RandomForestClassifier):
        print(f"oob error: {100 * model.oob_error_:.1f}%")
        if args.importance:
            for rank, (name, score) in enumerate(variable_importance(model), start=1):
                print(f"{rank:>3}  {name:<20} {score:.5f}")
    return 0


def _cmd_eval(args) -> int:
    params = json.loads(args.params) if args.params else {}
    trainer = make_classifier(args.clf, seed=args.seed, **params)
    out = {}
    if args.sweep:
        signals = read_labeled_csv(args.signals)
        sizes = [int(s) for s in args.sweep.split(",")]
        points = window_sweep(
            signals, sizes, trainer, method=args.method, k=args.k, seed=args.seed
        )
        print(sweep_text(points))
        out["sweep"] = [
            {"w": p.w, "six_class": p.six_class.to_dict(), "binary": p.binary.to_dict()}
            for p in points
        ]
    elif args.ablation_skt:
        data = _read_dataset(args).with_mask(tuple(FEATURE_NAMES))
        seeds = [args.seed + i for i in range(args.ablation_seeds)]
        ablation = ablation_skt(data, trainer, seeds=seeds, method=args.method, k=args.k)
        print(ablation.to_text())
        out["ablation"] = ablation.to_dict()
    elif args.compare:
        data = _read_dataset(args)
        trainers = {
            name: make_classifier(name, seed=args.seed) for name in CLASSIFIERS
        }
        comparison = compare_classifiers(data, trainers, k=args.k, seed=args.seed)
        print(comparison.to_text())
        out["comparison"] = comparison.to_dict()
    else:
        data = _read_dataset(args)
        if args.method == "oob":
            report = oob_evaluate(data, trainer, seed=args.seed)
        else:
            report = cross_validate(data, trainer, k=args.k, seed=args.seed)
        print(report.to_text())
        out["report"] = report.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(out, indent=2))
        print(f"report -> {args.out}")
    return 0


def _cmd_validate_plan(args) -> int:
    plan = SessionPlan.from_dict(json.loads(Path(args.plan).read_text()))
    pool = load_pool(args.pool)
    profile = None
    if args.profile:
        profile = SubjectProfile.from_dict(json.loads(Path(args.profile).read_text()))
    history = None
    if args.history:
        history = set(json.loads(Path(args.history).read_text()))
    violations = validate_plan(plan, pool, profile=profile, history=history)
    if violations:
        for v in violations:
            print(f"VIOLATION: {v}")
        return 1
    print(f"plan {plan.session_id} is valid ({plan.planned_total_s / 60:.1f} min)")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import ServiceConfig, create_app

    app = create_app(ServiceConfig(store_root=args.store, cors_origin=args.cors_origin))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emobaseline",
        description="Personalized emotion-baseline pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic subject's recordings")
    p.add_argument("--out", required=True)
    p.add_argument("--separability", type=float, default=0.6)
    p.add_argument("--skt-mode", choices=["noise", "leak", "informative"], default="noise")
    p.add_argument("--shape", choices=["table1", "blocks", "protocol"], default="blocks")
    p.add_argument("--sessions", type=int, default=9)
    p.add_argument("--block-s", type=int, default=320)
    p.add_argument("--wrist-offset-ms", type=int, default=500)
    _add_seed(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("ingest", help="recordings + manifests -> labeled signals CSV")
    p.add_argument("--recordings", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--trim-s", type=float, default=15.0)
    p.add_argument("--median-order", type=int, default=10)
    _add_seed(p)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("features", help="labeled signals -> dataset CSV")
    p.add_argument("--signals", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--w", type=int, default=32)
    p.add_argument("--with-skt", action="store_true")
    p.add_argument("--min-rank", type=int, default=None)
    p.add_argument("--rankings", default=None, help="JSON file {clip_id: score}")
    _add_seed(p)
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("train", help="dataset CSV -> model JSON")
    p.add_argument("--dataset", required=True)
    p.add_argument("--clf", choices=sorted(CLASSIFIERS), default="rf")
    p.add_argument("--out", required=True)
    p.add_argument("--binary", action="store_true")
    p.add_argument("--with-skt", action="store_true")
    p.add_argument("--params", default=None, help="JSON dict of classifier params")
    p.add_argument("--importance", action="store_true")
    _add_seed(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="cross-validation, sweeps, ablations, comparisons")
    p.add_argument("--dataset")
    p.add_argument("--signals", help="labeled signals CSV (required for --sweep)")
    p.add_argument("--clf", choices=sorted(CLASSIFIERS), default="rf")
    p.add_argument("--method", choices=["cv", "oob"], default="cv")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--binary", action="store_true")
    p.add_argument("--with-skt", action="store_true")
    p.add_argument("--sweep", help="comma-separated window sizes, e.g. 16,32,64")
    p.add_argument("--ablation-skt", action="store_true")
    p.add_argument("--ablation-seeds", type=int, default=10)
    p.add_argument("--compare", action="store_true", help="all four classifiers")
    p.add_argument("--params", default=None)
    p.add_argument("--out", default=None, help="write JSON report here")
    _add_seed(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("validate-plan", help="check a session plan against the protocol")
    p.add_argument("--plan", required=True)
    p.add_argument("--pool", required=True)
    p.add_argument("--profile", default=None)
    p.add_argument("--history", default=None, help="JSON list of already-shown clip ids")
    _add_seed(p)
    p.set_defaults(func=_cmd_validate_plan)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--store", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8410)
    p.add_argument("--cors-origin", default=None)
    _add_seed(p)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
