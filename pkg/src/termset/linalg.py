"""Iterative numerical cores: power iteration and randomized truncated SVD.

Both solvers are deterministic given their inputs (fixed start vectors,
seeded test matrices) and raise ConvergenceError when the iteration
budget runs out, carrying the last residual for diagnostics.  Tests
check them against dense numpy decompositions.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ConvergenceError, ValidationError


def power_iteration(
    matvec: Callable[[np.ndarray], np.ndarray],
    v0: np.ndarray,
    tol: float = 1e-10,
    max_iters: int = 10_000,
) -> np.ndarray:
    """Dominant eigenvector of a symmetric PSD operator given by `matvec`.

    Convergence is measured on the cosine between successive normalized
    iterates (PSD keeps it nonnegative, so no sign chatter).  The start
    vector is the caller's responsibility and fixes the result's sign.
    """
    v = np.asarray(v0, dtype=np.float64)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise ValidationError("power iteration start vector is zero")
    v = v / nv
    residual = 1.0
    for _ in range(max_iters):
        w = matvec(v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # v is in the null space; it is trivially an eigenvector (eigenvalue 0).
            return v
        w = w / nw
        residual = 1.0 - float(np.dot(v, w))
        v = w
        if residual <= tol:
            return v
    raise ConvergenceError(
        f"power iteration did not converge in {max_iters} iterations",
        residual=residual,
    )


def truncated_svd(
    matrix,
    dim: int,
    oversample: int = 10,
    max_iters: int = 100,
    tol: float = 1e-10,
    seed: int = 0,
):
    """Truncated SVD by randomized subspace iteration.

    Returns (U, s, Vt) with s[:dim] non-increasing and nonnegative.
    `matrix` may be a numpy array or any scipy.sparse matrix supporting
    ``@``.  The sketch uses a seeded Gaussian test matrix and the power
    loop repeats until the leading `dim` singular values stabilize to
    `tol` relative to the largest, or the budget is exhausted.

    At full rank (dim + oversample >= min(shape)) the sketch spans the
    whole column space and the first pass is already exact.
    """
    n_rows, n_cols = matrix.shape
    if dim < 1:
        raise ValidationError("dim must be >= 1")
    if dim > min(n_rows, n_cols):
        raise ValidationError(
            f"dim {dim} exceeds min(matrix dimensions) = {min(n_rows, n_cols)}"
        )
    sketch = min(dim + oversample, min(n_rows, n_cols))
    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((n_cols, sketch))

    q, _ = np.linalg.qr(_densify(matrix @ omega))
    s_prev = None
    residual = np.inf
    for _ in range(max_iters):
        c = _densify(matrix.T @ q)           # (n_cols, sketch)
        u_b, s, vt = np.linalg.svd(c.T, full_matrices=False)
        s_lead = s[:dim]
        if s_prev is not None:
            scale = max(float(s[0]), np.finfo(np.float64).tiny)
            residual = float(np.max(np.abs(s_lead - s_prev))) / scale
            if residual <= tol:
                u = q @ u_b[:, :dim]
                return u, s_lead.copy(), vt[:dim].copy()
        s_prev = s_lead.copy()
        # One power step A A^T q, reusing c = A^T q.
        q, _ = np.linalg.qr(_densify(matrix @ c))
    raise ConvergenceError(
        f"truncated SVD did not stabilize in {max_iters} subspace iterations",
        residual=residual,
    )


def _densify(x) -> np.ndarray:
    return np.asarray(x.todense()) if hasattr(x, "todense") else np.asarray(x)
