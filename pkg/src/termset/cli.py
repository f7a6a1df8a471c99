"""Command-line entry point.

Subcommands wire the library for batch use: build-model runs the
count → weight → factorize pipeline, evaluate runs the comparison
protocol, expand prints an oracle-labeled expansion transcript, serve
starts the annotation HTTP service.

Every run echoes its fully resolved configuration on stdout and writes
a JSON copy next to its primary output, so any result can be reproduced
from its logs alone.  Exit codes: 0 success, 1 bad input, 2 solver or
trial failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import counts as _counts
from . import evaluation as _evaluation
from .embeddings import load_word2vec_text, normalize_unit_l2, save_word2vec_text
from .errors import (
    ConvergenceError,
    CorpusError,
    NotFoundError,
    TermSetError,
    ValidationError,
    VectorFileError,
)
from .expansion import ALL_METHODS, CLASSIFIER_METHODS, ExpansionConfig
from .labeled import LabeledTermSet

DATA_DIR_ENV = "TERMSET_DATA_DIR"
DEFAULT_DATA_DIR = "termset-sessions"

SCHEME_PPMI = "ppmi"
SCHEME_SPPMI = "sppmi"


class _Parser(argparse.ArgumentParser):
    """argparse, but flag mistakes exit 1 (validation) instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _echo_config(resolved: dict, log_path=None) -> None:
    print("config: " + json.dumps(resolved, sort_keys=True))
    if log_path is not None:
        Path(log_path).write_text(
            json.dumps(resolved, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except TermSetError as exc:
        raise type(exc)(f"{name}: {exc}") from exc


# -- build-model -------------------------------------------------------------


def cmd_build_model(args) -> int:
    resolved = {
        "command": "build-model",
        "corpus": str(args.corpus),
        "scheme": args.scheme,
        "alpha": args.alpha,
        "window": args.window,
        "dim": args.dim,
        "sv_exponent": args.sv_exponent,
        "min_count": args.min_count,
        "seed": args.seed,
        "out": str(args.out),
    }
    _echo_config(resolved, log_path=str(args.out) + ".meta.json")

    sentences = _stage("reading corpus", lambda: list(_counts.read_corpus(args.corpus)))
    cooc = _stage(
        "counting",
        _counts.count_cooccurrences,
        sentences,
        window=args.window,
        min_count=args.min_count,
    )
    print(f"counted: {len(cooc.terms)} terms, {cooc.counts.nnz} nonzero cells")
    if args.scheme == SCHEME_PPMI:
        weighted = _stage("weighting", _counts.ppmi, cooc)
    else:
        weighted = _stage("weighting", _counts.smoothed_ppmi, cooc, alpha=args.alpha)
    factor_config = _counts.FactorizationConfig(
        dim=args.dim, sv_exponent=args.sv_exponent, seed=args.seed
    )
    model = _stage("factorization", _counts.factorize, weighted, factor_config)
    _stage("saving", save_word2vec_text, model, args.out)
    print(f"wrote {len(model)} vectors of dimension {model.dim} to {args.out}")
    return 0


# -- evaluate ----------------------------------------------------------------


def _parse_model_arg(spec: str):
    if "=" not in spec:
        raise ValidationError(
            f"model argument {spec!r} must look like name=path/to/vectors.txt"
        )
    name, path = spec.split("=", 1)
    if not name or not path:
        raise ValidationError(f"model argument {spec!r} has an empty name or path")
    return name, path


def cmd_evaluate(args) -> int:
    methods = args.methods
    unknown = sorted(set(methods) - ALL_METHODS)
    if unknown:
        raise ValidationError(f"unknown methods: {unknown}")
    resolved = {
        "command": "evaluate",
        "models": list(args.models),
        "term_sets": [str(p) for p in args.term_sets],
        "methods": methods,
        "inits": args.inits,
        "steps": args.steps,
        "k": args.k,
        "seed_base": args.seed_base,
        "workers": args.workers,
        "normalize": not args.no_normalize,
        "out": str(args.out) if args.out else None,
        "out_table": str(args.out_table) if args.out_table else None,
    }
    _echo_config(
        resolved, log_path=str(args.out) + ".meta.json" if args.out else None
    )

    models = []
    for spec in args.models:
        name, path = _parse_model_arg(spec)
        model = load_word2vec_text(path)
        if not args.no_normalize:
            model = normalize_unit_l2(model)
        models.append((name, model))
    golds = [_evaluation.load_term_set(p) for p in args.term_sets]
    configs = [ExpansionConfig(method=m, k=args.k) for m in methods]

    report = _evaluation.run_experiment(
        models,
        configs,
        golds,
        n_inits=args.inits,
        steps=args.steps,
        k=args.k,
        seed_base=args.seed_base,
        max_workers=args.workers,
    )
    table = _evaluation.render_report_text(report)
    print(table, end="")
    if args.out:
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
        print(f"wrote report to {args.out}")
    if args.out_table:
        Path(args.out_table).write_text(table, encoding="utf-8")

    failed = [
        f"{gold}/{method}/{model}: {cell.error}"
        for (gold, method, model), cell in sorted(report.cells.items())
        if cell.error is not None
    ]
    if failed:
        for line in failed:
            print(f"failed cell {line}", file=sys.stderr)
        return 2
    return 0


# -- expand ------------------------------------------------------------------


def _transcript_rows(record: _evaluation.TrialRecord, steps: int):
    by_iteration = {i: [] for i in range(1, steps + 1)}
    for entry in record.final_set.entries:
        if entry.iteration is not None:
            by_iteration[entry.iteration].append((entry.term, entry.label))
    return by_iteration


def cmd_expand(args) -> int:
    resolved = {
        "command": "expand",
        "model": str(args.model),
        "term_set": str(args.term_set),
        "oracle": str(args.oracle),
        "method": args.method,
        "k": args.k,
        "steps": args.steps,
        "seed": args.seed,
        "out": str(args.out) if args.out else None,
    }
    _echo_config(resolved, log_path=str(args.out) + ".meta.json" if args.out else None)

    model = normalize_unit_l2(load_word2vec_text(args.model))
    seeds = _evaluation.load_term_set(args.term_set)
    gold = _evaluation.load_term_set(args.oracle)
    for term in sorted(seeds.terms):
        if term not in model:
            raise ValidationError(f"seed term {term!r} not in vocabulary")
        if term not in gold.terms:
            raise ValidationError(f"seed term {term!r} missing from the oracle set")

    positives = sorted(seeds.terms)
    negatives = []
    if args.method in CLASSIFIER_METHODS:
        pool = sorted(t for t in model.terms if t not in gold.terms)
        if len(pool) < _evaluation.SEED_NEGATIVES:
            raise ValidationError(
                "not enough non-gold terms to draw negative seeds for an SVM method"
            )
        rng = np.random.default_rng(args.seed)
        negatives = [
            str(t)
            for t in rng.choice(pool, size=_evaluation.SEED_NEGATIVES, replace=False)
        ]
    initial = LabeledTermSet.from_seeds(positives, negatives)

    config = ExpansionConfig(method=args.method, k=args.k)
    record = _evaluation.run_trial(
        model,
        config,
        gold,
        seed=args.seed,
        steps=args.steps,
        initial_set=initial,
        model_id=str(args.model),
    )

    print(f"seeds (+): {' '.join(positives)}")
    if negatives:
        print(f"seeds (-): {' '.join(negatives)}")
    rows = _transcript_rows(record, args.steps)
    for iteration in range(1, args.steps + 1):
        entries = rows[iteration]
        found = sum(1 for _, label in entries if label)
        header = f"iteration {iteration:2d}  (+{found}/{len(entries)})"
        if not entries:
            print(f"{header}  (exhausted)")
            continue
        marked = " ".join(f"{t}{'+' if label else '-'}" for t, label in entries)
        print(f"{header}  {marked}")
    total = sum(record.per_iteration_positives)
    print(
        f"total: {total} positives in {args.steps} iterations "
        f"(mean {record.mean_positives:.2f}/iteration)"
    )
    if args.out:
        Path(args.out).write_text(
            json.dumps(record.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        print(f"wrote transcript to {args.out}")
    return 0


# -- serve -------------------------------------------------------------------


def resolve_data_dir(flag_value) -> Path:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        return Path(env)
    return Path(DEFAULT_DATA_DIR)


def cmd_serve(args) -> int:
    from . import api as _api
    from . import service as _service

    data_dir = resolve_data_dir(args.data_dir)
    resolved = {
        "command": "serve",
        "models": str(args.models),
        "data_dir": str(data_dir),
        "host": args.host,
        "port": args.port,
    }
    models = _service.load_model_manifest(args.models)
    service = _service.SessionService(models, data_dir=data_dir)
    _echo_config(resolved, log_path=data_dir / "server-config.json")
    for row in service.list_models():
        print(f"model {row['id']}: {row['vocab_size']} terms, dim {row['dim']}")

    import uvicorn

    app = _api.create_app(service)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="termset", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build-model", help="corpus -> factorized vector file")
    build.add_argument("--corpus", required=True)
    build.add_argument("--scheme", choices=[SCHEME_PPMI, SCHEME_SPPMI], default=SCHEME_PPMI)
    build.add_argument("--alpha", type=float, default=_counts.DEFAULT_ALPHA)
    build.add_argument("--window", type=int, default=2)
    build.add_argument("--dim", type=int, default=200)
    build.add_argument("--sv-exponent", type=float, default=0.5)
    build.add_argument("--min-count", type=int, default=5)
    build.add_argument("--seed", type=int, default=0)
    build.add_argument("--out", required=True)
    build.set_defaults(func=cmd_build_model)

    evaluate = sub.add_parser("evaluate", help="run the comparison protocol")
    evaluate.add_argument(
        "--models", nargs="+", required=True, metavar="NAME=PATH",
        help="vector files to compare, as name=path",
    )
    evaluate.add_argument("--term-sets", nargs="+", required=True)
    evaluate.add_argument("--methods", nargs="+", default=sorted(ALL_METHODS))
    evaluate.add_argument("--inits", type=int, default=_evaluation.DEFAULT_INITS)
    evaluate.add_argument("--steps", type=int, default=_evaluation.DEFAULT_STEPS)
    evaluate.add_argument("--k", type=int, default=10)
    evaluate.add_argument("--seed-base", type=int, default=0)
    evaluate.add_argument("--workers", type=int, default=None)
    evaluate.add_argument("--no-normalize", action="store_true")
    evaluate.add_argument("--out", default=None, help="JSON report path")
    evaluate.add_argument("--out-table", default=None, help="text table path")
    evaluate.set_defaults(func=cmd_evaluate)

    expand = sub.add_parser("expand", help="oracle-labeled expansion transcript")
    expand.add_argument("--model", required=True)
    expand.add_argument("--term-set", required=True, help="seed positives, one per line")
    expand.add_argument("--oracle", required=True, help="full gold set, one per line")
    expand.add_argument("--method", default="centroid", choices=sorted(ALL_METHODS))
    expand.add_argument("--k", type=int, default=10)
    expand.add_argument("--steps", type=int, default=_evaluation.DEFAULT_STEPS)
    expand.add_argument("--seed", type=int, default=0)
    expand.add_argument("--out", default=None, help="JSON transcript path")
    expand.set_defaults(func=cmd_expand)

    serve = sub.add_parser("serve", help="start the annotation HTTP service")
    serve.add_argument("--models", required=True, help="model manifest JSON")
    serve.add_argument(
        "--data-dir", default=None,
        help=f"session directory (default ${DATA_DIR_ENV} or ./{DEFAULT_DATA_DIR})",
    )
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValidationError, CorpusError, VectorFileError, NotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TermSetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
