"""Synthetic models with known geometry, for tests and benchmarks.

These builders exist so correctness claims can be checked against
constructions where the right answer is known by design: orthonormal
vocabularies, perfectly separated clusters, and a noisy multi-cluster
benchmark whose gold labels disagree with geometry for a controlled
fraction of terms.
"""

from __future__ import annotations

import numpy as np

from .embeddings import EmbeddingModel, NORM_UNIT_L2, normalize_unit_l2
from .errors import ValidationError


def orthonormal_model(n: int, prefix: str = "t") -> EmbeddingModel:
    """n terms mapped to the n standard basis vectors."""
    if n < 1:
        raise ValidationError("need at least one term")
    terms = [f"{prefix}{i:03d}" for i in range(n)]
    return EmbeddingModel(terms=terms, vectors=np.eye(n), norm_scheme=NORM_UNIT_L2)


def cluster_model(
    seed: int,
    n_clusters: int,
    per_cluster: int,
    dim: int,
    center_scale: float = 1.0,
    spread: float = 0.05,
    prefix: str = "w",
):
    """Unit-normalized Gaussian clusters around random unit centers.

    Returns (model, assignment) where assignment maps term -> cluster id.
    Smaller spread/center_scale ratios give cleaner separation.
    """
    rng = np.random.default_rng(seed)
    centers = rng.standard_normal((n_clusters, dim))
    centers /= np.linalg.norm(centers, axis=1)[:, None]
    centers *= center_scale
    terms = []
    rows = []
    assignment = {}
    for c in range(n_clusters):
        offsets = rng.standard_normal((per_cluster, dim)) * spread
        for i in range(per_cluster):
            term = f"{prefix}{c}_{i:04d}"
            terms.append(term)
            rows.append(centers[c] + offsets[i])
            assignment[term] = c
    model = normalize_unit_l2(
        EmbeddingModel(terms=terms, vectors=np.vstack(rows))
    )
    return model, assignment


def perfect_cluster_model(n_gold: int, n_other: int, seed: int = 0):
    """A gold cluster orthogonal to all remaining terms.

    Gold vectors live in the span of the first two axes with positive
    coordinates, the rest in the span of the last two, so any positive
    combination of gold vectors has similarity 0 to every non-gold term
    and > 0 to every gold term.  Returns (model, gold_terms).
    """
    rng = np.random.default_rng(seed)
    dim = 4

    def block(count, axes, prefix):
        out = []
        for i in range(count):
            weights = rng.uniform(0.2, 1.0, size=2)
            vec = np.zeros(dim)
            vec[axes[0]], vec[axes[1]] = weights
            out.append((f"{prefix}{i:04d}", vec))
        return out

    entries = block(n_gold, (0, 1), "g") + block(n_other, (2, 3), "x")
    terms = [t for t, _ in entries]
    vectors = np.vstack([v for _, v in entries])
    model = normalize_unit_l2(EmbeddingModel(terms=terms, vectors=vectors))
    return model, [t for t, _ in entries[:n_gold]]


def make_cluster_benchmark(
    seed: int,
    n_terms: int = 2000,
    dim: int = 50,
    n_clusters: int = 5,
    gold_size: int = 200,
    noise_frac: float = 0.2,
    stable_dims: int = 30,
    mode_dims: int = 12,
    jitter: float = 0.12,
    mean_shift: float = 0.5,
    mode_scale: float = 1.0,
    n_modes: int = 6,
    mimic_overlap: float = 0.6,
    clump_frac: float = 0.75,
    clump_spread: float = 0.05,
    clump_mix: float = 0.6,
    wide_spread: float = 1.2,
    far_match: float = 0.5,
):
    """Multi-cluster benchmark where gold membership needs a flexible boundary.

    Coordinates split into three blocks.  A stable block carries a shared
    profile with tiny jitter; a mode block holds the gold mean plus one of
    `n_modes` prototype offsets per member, so the gold cluster is a union
    of tight sub-modes with high per-coordinate variance; the remaining
    coordinates are identity space for far distractor clusters.

    One distractor cluster mimics the gold profile: it matches the stable
    block exactly and differs only inside the mode block, where its offset
    runs against the gold mean by `mimic_overlap`.  Rankers that keep the
    mode-block mean separate gold from the mimic; rankers that discount
    high-variance coordinates cannot tell them apart.  A `noise_frac`
    share of gold sits off-profile: most in a tight satellite clump
    between the gold mean and the mimic (a coherent direction that is not
    the mean), the rest as wide outliers.

    Returns (model, gold_terms as a sorted list).
    """
    if n_clusters < 3:
        raise ValidationError("need a mimic cluster and at least one far cluster")
    if gold_size >= n_terms:
        raise ValidationError("gold_size must leave room for distractors")
    n_rest = n_terms - gold_size
    if n_rest % (n_clusters - 1):
        raise ValidationError("distractor terms must split evenly across clusters")
    if stable_dims + mode_dims >= dim:
        raise ValidationError("stable and mode blocks must leave identity coordinates")
    if n_modes < 1:
        raise ValidationError("need at least one mode")
    per_distractor = n_rest // (n_clusters - 1)
    n_far = n_clusters - 2
    n_ident = dim - stable_dims - mode_dims
    ident_width = n_ident // n_far
    if ident_width < 1:
        raise ValidationError("identity coordinates must cover every far cluster")

    rng = np.random.default_rng(seed)
    stable = slice(0, stable_dims)
    mode = slice(stable_dims, stable_dims + mode_dims)

    s_pat = rng.standard_normal(stable_dims)
    s_pat /= np.linalg.norm(s_pat)
    g_mode = rng.standard_normal(mode_dims)
    g_mode /= np.linalg.norm(g_mode)
    g_mode *= mean_shift
    g_hat = g_mode / np.linalg.norm(g_mode)
    protos = []
    for _ in range(n_modes):
        v = rng.standard_normal(mode_dims)
        v -= (v @ g_hat) * g_hat
        v /= np.linalg.norm(v)
        protos.append(v * mode_scale)
    q = rng.standard_normal(mode_dims)
    q -= (q @ g_hat) * g_hat
    for v in protos:
        u = v / np.linalg.norm(v)
        q -= (q @ u) * u
    q /= np.linalg.norm(q)
    q = (-mimic_overlap * g_hat + np.sqrt(1.0 - mimic_overlap**2) * q) * mode_scale

    gold_mean = np.zeros(dim)
    gold_mean[stable] = s_pat
    gold_mean[mode] = g_mode
    mimic_center = np.zeros(dim)
    mimic_center[stable] = s_pat
    mimic_center[mode] = g_mode + q
    clump_center = clump_mix * gold_mean + (1.0 - clump_mix) * mimic_center

    n_noise = int(round(gold_size * noise_frac))
    n_clump = int(round(n_noise * clump_frac))
    n_wide = n_noise - n_clump
    n_core = gold_size - n_noise

    terms = []
    rows = []
    for i in range(n_core):
        v = rng.standard_normal(dim) * jitter
        v[stable] += s_pat
        v[mode] += g_mode + protos[i % n_modes]
        terms.append(f"w0_{i:04d}")
        rows.append(v)
    for i in range(n_core, n_core + n_clump):
        terms.append(f"w0_{i:04d}")
        rows.append(clump_center + rng.standard_normal(dim) * clump_spread)
    for i in range(n_core + n_clump, gold_size):
        terms.append(f"w0_{i:04d}")
        rows.append(gold_mean + rng.standard_normal(dim) * wide_spread)
    for i in range(per_distractor):
        terms.append(f"w1_{i:04d}")
        rows.append(mimic_center + rng.standard_normal(dim) * jitter)
    for c in range(2, n_clusters):
        ident = np.zeros(dim)
        idx = stable_dims + mode_dims + (c - 2) * ident_width
        ident[idx:idx + ident_width] = rng.standard_normal(ident_width)
        ident /= max(np.linalg.norm(ident), 1e-12)
        center = far_match * gold_mean + ident
        for i in range(per_distractor):
            terms.append(f"w{c}_{i:04d}")
            rows.append(center + rng.standard_normal(dim) * jitter)

    model = normalize_unit_l2(EmbeddingModel(terms=terms, vectors=np.vstack(rows)))
    gold = sorted(t for t in terms if t.startswith("w0_"))
    return model, gold
