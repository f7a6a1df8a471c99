"""Experimental protocol: oracle labeling, trials, grids, reports.

A trial seeds a labeled set with 5 gold and 5 non-gold terms, then runs
the expand/label loop for a fixed number of steps with membership in the
gold set standing in for the annotator.  The reported score is the mean
number of gold terms among the k candidates per iteration.

Experiments grid trials over (gold set, method, model) with the same
seeds everywhere, so initial sets are shared across methods, and across
models whenever vocabularies coincide.  Trials may run in parallel;
assembly is keyed and ordered, so a parallel run produces byte-identical
reports to a sequential one.
"""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .embeddings import EmbeddingModel
from .errors import TermSetError, ValidationError
from .expansion import ExpansionConfig, propose_candidates
from .labeled import LabeledTermSet, update_labeled_set

DEFAULT_STEPS = 20
DEFAULT_INITS = 10
SEED_POSITIVES = 5
SEED_NEGATIVES = 5
RNG_NAME = "pcg64"


@dataclass(frozen=True)
class GoldTermSet:
    """The predefined reference set the oracle answers from."""

    name: str
    terms: frozenset[str]

    def __post_init__(self):
        if not self.terms:
            raise ValidationError(f"gold set {self.name!r} is empty")


def load_term_set(path, name: str | None = None) -> GoldTermSet:
    """One term per line, lowercased; blank lines and # comments ignored."""
    terms = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            terms.add(stripped.lower())
    if not terms:
        raise ValidationError(f"term-set file {path} contains no terms")
    if name is None:
        name = str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return GoldTermSet(name=name, terms=frozenset(terms))


def oracle_label(term: str, gold: GoldTermSet) -> bool:
    """Positive iff the term belongs to the gold set."""
    return term in gold.terms


def gold_in_vocab(gold: GoldTermSet, model: EmbeddingModel) -> list[str]:
    return sorted(t for t in gold.terms if t in model)


def make_initial_set(
    gold: GoldTermSet, model: EmbeddingModel, seed: int
) -> LabeledTermSet:
    """5 positives from gold ∩ Vocab, 5 negatives from Vocab ∖ gold.

    Sampling is uniform without replacement over sorted pools, so the
    result depends only on (gold, vocabulary, seed) and is shared across
    methods and across models with the same vocabulary.
    """
    pos_pool = gold_in_vocab(gold, model)
    neg_pool = sorted(t for t in model.terms if t not in gold.terms)
    if len(pos_pool) < SEED_POSITIVES:
        raise ValidationError(
            f"gold set {gold.name!r} has only {len(pos_pool)} in-vocabulary "
            f"terms; need {SEED_POSITIVES}"
        )
    if len(neg_pool) < SEED_NEGATIVES:
        raise ValidationError(
            f"vocabulary has only {len(neg_pool)} non-gold terms; "
            f"need {SEED_NEGATIVES}"
        )
    rng = np.random.default_rng(seed)
    positives = [str(t) for t in rng.choice(pos_pool, SEED_POSITIVES, replace=False)]
    negatives = [str(t) for t in rng.choice(neg_pool, SEED_NEGATIVES, replace=False)]
    return LabeledTermSet.from_seeds(positives, negatives)


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    initial_set: LabeledTermSet
    final_set: LabeledTermSet
    per_iteration_positives: list[int]
    fallback_iterations: list[int]
    exhausted_iterations: list[int]
    config: dict

    @property
    def mean_positives(self) -> float:
        return float(np.mean(self.per_iteration_positives))

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "config": self.config,
            "per_iteration_positives": list(self.per_iteration_positives),
            "mean_positives": self.mean_positives,
            "fallback_iterations": list(self.fallback_iterations),
            "exhausted_iterations": list(self.exhausted_iterations),
            "initial_set": self.initial_set.to_json_dict(),
            "final_set": self.final_set.to_json_dict(),
        }


def run_trial(
    model: EmbeddingModel,
    config: ExpansionConfig,
    gold: GoldTermSet,
    seed: int,
    steps: int = DEFAULT_STEPS,
    k: int | None = None,
    initial_set: LabeledTermSet | None = None,
    model_id: str = "model",
) -> TrialRecord:
    """One expansion run of `steps` iterations against the oracle.

    `initial_set` overrides protocol seeding for replay and fixtures;
    `k` (when given) overrides config.k.  Expansion errors are re-raised
    with the failing iteration prefixed.
    """
    if steps < 1:
        raise ValidationError("steps must be >= 1")
    if k is not None:
        config = dataclasses.replace(config, k=k)
    labeled = (
        initial_set
        if initial_set is not None
        else make_initial_set(gold, model, seed)
    )
    initial = labeled
    per_iteration: list[int] = []
    fallbacks: list[int] = []
    exhausted: list[int] = []
    for step in range(1, steps + 1):
        try:
            proposal = propose_candidates(model, labeled, config)
        except TermSetError as exc:
            raise type(exc)(f"iteration {step}: {exc}") from exc
        if proposal.fallback:
            fallbacks.append(step)
        if len(proposal.candidates) < config.k:
            exhausted.append(step)
        labels = [oracle_label(t, gold) for t in proposal.candidates]
        per_iteration.append(int(sum(labels)))
        labeled = update_labeled_set(labeled, proposal.candidates, labels, step)
    echo = {
        "model": model_id,
        "method": config.method,
        "k": config.k,
        "steps": steps,
        "svm_c": config.svm_c,
        "rbf_gamma": config.rbf_gamma,
        "snr_epsilon": config.snr_epsilon,
        "seed": seed,
        "rng": RNG_NAME,
    }
    return TrialRecord(
        seed=seed,
        initial_set=initial,
        final_set=labeled,
        per_iteration_positives=per_iteration,
        fallback_iterations=fallbacks,
        exhausted_iterations=exhausted,
        config=echo,
    )


@dataclass(frozen=True)
class CellResult:
    mean: float | None
    std: float | None
    n_trials: int
    intersection: int
    per_trial_means: list[float]
    error: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "n_trials": self.n_trials,
            "intersection": self.intersection,
            "per_trial_means": list(self.per_trial_means),
            "error": self.error,
        }


@dataclass(frozen=True)
class ExperimentReport:
    golds: list[str]
    methods: list[str]
    models: list[str]
    steps: int
    k: int
    n_inits: int
    seed_base: int
    cells: dict = field(repr=False)
    # (gold, method, model, seed) -> TrialRecord; in-memory only, not
    # part of the serialized grid.
    records: dict = field(repr=False, default_factory=dict, compare=False)

    def cell(self, gold: str, method: str, model: str) -> CellResult:
        return self.cells[(gold, method, model)]

    def to_json_dict(self) -> dict:
        grid = {}
        for gold in self.golds:
            grid[gold] = {}
            for method in self.methods:
                grid[gold][method] = {}
                for model in self.models:
                    grid[gold][method][model] = self.cell(gold, method, model).to_json_dict()
        return {
            "steps": self.steps,
            "k": self.k,
            "n_inits": self.n_inits,
            "seed_base": self.seed_base,
            "golds": list(self.golds),
            "methods": list(self.methods),
            "models": list(self.models),
            "grid": grid,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json_dict(cls, payload: dict) -> "ExperimentReport":
        cells = {}
        for gold, by_method in payload["grid"].items():
            for method, by_model in by_method.items():
                for model, cell in by_model.items():
                    cells[(gold, method, model)] = CellResult(
                        mean=cell["mean"],
                        std=cell["std"],
                        n_trials=cell["n_trials"],
                        intersection=cell["intersection"],
                        per_trial_means=list(cell["per_trial_means"]),
                        error=cell.get("error"),
                    )
        return cls(
            golds=list(payload["golds"]),
            methods=list(payload["methods"]),
            models=list(payload["models"]),
            steps=payload["steps"],
            k=payload["k"],
            n_inits=payload["n_inits"],
            seed_base=payload["seed_base"],
            cells=cells,
        )


def run_experiment(
    models: list[tuple[str, EmbeddingModel]],
    configs: list[ExpansionConfig],
    golds: list[GoldTermSet],
    n_inits: int = DEFAULT_INITS,
    steps: int = DEFAULT_STEPS,
    k: int | None = None,
    seed_base: int = 0,
    max_workers: int | None = None,
) -> ExperimentReport:
    """Grid of trials; same seeds for every (model, method) pair.

    max_workers None runs sequentially; any integer > 1 runs trials in a
    thread pool.  Both schedules produce identical reports.  A failing
    trial marks its whole cell failed (error recorded, mean None) rather
    than being dropped.
    """
    if n_inits < 1:
        raise ValidationError("n_inits must be >= 1")
    if k is not None:
        configs = [dataclasses.replace(cfg, k=k) for cfg in configs]
    else:
        ks = {cfg.k for cfg in configs}
        if len(ks) != 1:
            raise ValidationError("configs disagree on k; pass an explicit k")
        k = ks.pop()
    method_names = [cfg.method for cfg in configs]
    if len(set(method_names)) != len(method_names):
        raise ValidationError("duplicate methods in the grid")
    model_names = [name for name, _ in models]
    if len(set(model_names)) != len(model_names):
        raise ValidationError("duplicate model names in the grid")
    seeds = [seed_base + i for i in range(n_inits)]

    tasks = [
        (gold, cfg, name, mod, seed)
        for gold in golds
        for cfg in configs
        for (name, mod) in models
        for seed in seeds
    ]

    def run(task):
        gold, cfg, name, mod, seed = task
        return run_trial(mod, cfg, gold, seed, steps=steps, model_id=name)

    results: dict[tuple, TrialRecord | Exception] = {}
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            futures = {
                pool.submit(run, task): (task[0].name, task[1].method, task[2], task[4])
                for task in tasks
            }
            for future, key in futures.items():
                try:
                    results[key] = future.result()
                except TermSetError as exc:
                    results[key] = exc
    else:
        for task in tasks:
            key = (task[0].name, task[1].method, task[2], task[4])
            try:
                results[key] = run(task)
            except TermSetError as exc:
                results[key] = exc

    cells = {}
    for gold in golds:
        for cfg in configs:
            for name, mod in models:
                records = []
                error = None
                for seed in seeds:
                    outcome = results[(gold.name, cfg.method, name, seed)]
                    if isinstance(outcome, Exception):
                        if error is None:
                            error = f"seed {seed}: {outcome}"
                    else:
                        records.append(outcome)
                intersection = len(gold_in_vocab(gold, mod))
                if error is not None:
                    cells[(gold.name, cfg.method, name)] = CellResult(
                        mean=None,
                        std=None,
                        n_trials=len(records),
                        intersection=intersection,
                        per_trial_means=[],
                        error=error,
                    )
                    continue
                means = [r.mean_positives for r in records]
                std = float(np.std(means, ddof=1)) if len(means) > 1 else 0.0
                cells[(gold.name, cfg.method, name)] = CellResult(
                    mean=float(np.mean(means)),
                    std=std,
                    n_trials=len(records),
                    intersection=intersection,
                    per_trial_means=means,
                )
    records = {
        key: outcome
        for key, outcome in results.items()
        if isinstance(outcome, TrialRecord)
    }
    return ExperimentReport(
        golds=[g.name for g in golds],
        methods=method_names,
        models=model_names,
        steps=steps,
        k=k,
        n_inits=n_inits,
        seed_base=seed_base,
        cells=cells,
        records=records,
    )


def render_report_text(report: ExperimentReport) -> str:
    """Text table: methods as rows, models as columns, a block per gold set."""
    lines = [
        f"Average positives per iteration "
        f"(k={report.k}, steps={report.steps}, inits={report.n_inits})"
    ]

    def cell_text(gold, method, model):
        cell = report.cell(gold, method, model)
        if cell.error is not None:
            return "ERR"
        if cell.mean is None:
            return "-"
        return f"{cell.mean:.2f}"

    method_width = max(len("method"), *(len(m) for m in report.methods))
    for gold in report.golds:
        widths = {
            model: max(
                len(model),
                *(len(cell_text(gold, method, model)) for method in report.methods),
            )
            for model in report.models
        }
        lines.append("")
        lines.append(f"== {gold} ==")
        header = "method".ljust(method_width)
        for model in report.models:
            header += "  " + model.rjust(widths[model])
        lines.append(header)
        for method in report.methods:
            row = method.ljust(method_width)
            for model in report.models:
                row += "  " + cell_text(gold, method, model).rjust(widths[model])
            lines.append(row)
    return "\n".join(lines) + "\n"
