"""Frame families that are injective by construction, plus random frames.

The staircase constructions fill coordinate blocks ``i..n`` with linearly
independent vectors whose ``i``-th coordinate is nonzero; the tilde vectors
are then triangular by blocks and span the embedding space.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .core import Field, Frame

__all__ = [
    "EigenvalueSchedule",
    "ShiftFrameConfig",
    "sum_pairs",
    "staircase_real",
    "staircase_complex",
    "parseval_staircase",
    "shift_frame",
    "boundedize",
    "random_frame",
    "leading_reflection",
]


def sum_pairs(n: int) -> Frame:
    """``{e_i} U {e_i + e_j : i < j}``, the smallest textbook injective real frame."""
    if n < 1:
        raise ValueError("n must be >= 1")
    I = np.eye(n)
    pairs = [I[i] + I[j] for i in range(n) for j in range(i + 1, n)]
    return Frame(np.vstack([I] + pairs) if pairs else I, Field.REAL)


def _lead_basis(r: int, rng: np.random.Generator | None) -> np.ndarray:
    """``r`` linearly independent rows in ``R^r``, each with a nonzero first entry."""
    if rng is None:
        B = np.eye(r)
        B[1:, 0] = 1.0
        return B
    while True:
        B = rng.standard_normal((r, r))
        if np.min(np.abs(B[:, 0])) > 1e-3 and np.linalg.cond(B) < 1e8:
            return B


def staircase_real(n: int, seed: int | None = None) -> Frame:
    """Blocks of ``n, n-1, ..., 1`` vectors; ``n(n+1)/2`` vectors in total.

    Without a seed block ``i`` is ``{e_i} U {e_i + e_j : j > i}``; with a seed
    each block is a random basis of its coordinate subspace.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = None if seed is None else np.random.default_rng(seed)
    rows = []
    for i in range(n):
        B = _lead_basis(n - i, rng)
        block = np.zeros((n - i, n))
        block[:, i:] = B
        rows.append(block)
    return Frame(np.vstack(rows), Field.REAL)


def _realified_to_complex(w: np.ndarray, start: int, n: int) -> np.ndarray:
    """Map rows ``(u_s, u_{s+1}, v_{s+1}, ...)`` to ``(0.., u_s, u_{s+1} + i v_{s+1}, ...)``."""
    z = np.zeros((w.shape[0], n), dtype=complex)
    z[:, start] = w[:, 0]
    z[:, start + 1:] = w[:, 1::2] + 1j * w[:, 2::2]
    return z


def staircase_complex(n: int, seed: int | None = None) -> Frame:
    """Blocks of ``2n-1, 2n-3, ..., 1`` vectors; ``n^2`` vectors in ``C^n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = None if seed is None else np.random.default_rng(seed)
    rows = [_realified_to_complex(_lead_basis(2 * (n - s) - 1, rng), s, n) for s in range(n)]
    return Frame(np.vstack(rows), Field.COMPLEX)


@dataclass(frozen=True, eq=False)
class EigenvalueSchedule:
    """Upper-triangular ``n x n`` weights with unit column sums.

    ``lam[i, j]`` is the eigenvalue of block ``i``'s frame operator on ``e_j``;
    it must vanish exactly when ``j < i``.
    """

    lam: np.ndarray

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        if lam.ndim != 2 or lam.shape[0] != lam.shape[1] or lam.shape[0] < 1:
            raise ValueError("schedule must be a non-empty square array")
        n = lam.shape[0]
        lower = np.tril(np.ones((n, n), dtype=bool), -1)
        if np.any(lam[lower] != 0) or np.any(lam[~lower] <= 0):
            raise ValueError("schedule entries must be zero exactly below the diagonal and positive elsewhere")
        if not np.allclose(lam.sum(axis=0), 1.0, rtol=0, atol=1e-12):
            raise ValueError("every column of the schedule must sum to 1")
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    @property
    def n(self) -> int:
        return self.lam.shape[0]

    @classmethod
    def uniform(cls, n: int) -> "EigenvalueSchedule":
        """Column ``j`` split evenly among its ``j + 1`` admissible blocks."""
        lam = np.triu(np.ones((n, n))) / np.arange(1, n + 1)
        return cls(lam)


def leading_reflection(r: int) -> np.ndarray:
    """Householder reflection whose first row is ``(1, ..., 1) / sqrt(r)``.

    Its columns form an orthonormal basis of ``R^r`` with every first
    coordinate nonzero.
    """
    target = np.full(r, 1 / np.sqrt(r))
    v = np.zeros(r)
    v[0] = 1.0
    v -= target
    nv = v @ v
    if nv < 1e-30:
        return np.eye(r)
    return np.eye(r) - 2 * np.outer(v, v) / nv


def _lead_orthogonal(r: int, rng: np.random.Generator | None) -> np.ndarray:
    if rng is None:
        return leading_reflection(r)
    while True:
        Q, R = np.linalg.qr(rng.standard_normal((r, r)))
        Q = Q * np.sign(np.diagonal(R))
        if np.min(np.abs(Q[0])) > 1e-3:
            return Q


def parseval_staircase(n: int, schedule: EigenvalueSchedule | None = None,
                       field: Field | str = Field.REAL, seed: int | None = None) -> Frame:
    """An injective Parseval frame whose block ``i`` has frame operator ``diag(lam[i])``.

    Block ``i`` is ``{Lambda_i^{1/2} q_k}`` for an orthonormal basis ``{q_k}``
    of the block's coordinate subspace with all leading coordinates nonzero.
    In the complex case the basis lives in the realified space
    ``(u_i, u_{i+1}, v_{i+1}, ...)``, whose non-leading coordinates pick up a
    factor ``1/sqrt(2)`` so that real and imaginary parts share the weight.
    """
    field = Field(field)
    schedule = EigenvalueSchedule.uniform(n) if schedule is None else schedule
    if schedule.n != n:
        raise ValueError(f"schedule is for n={schedule.n}, not n={n}")
    rng = None if seed is None else np.random.default_rng(seed)
    lam = schedule.lam
    rows = []
    for i in range(n):
        if field is Field.REAL:
            Q = _lead_orthogonal(n - i, rng)
            block = np.zeros((n - i, n))
            block[:, i:] = Q.T * np.sqrt(lam[i, i:])
        else:
            Q = _lead_orthogonal(2 * (n - i) - 1, rng)
            scale = np.concatenate([[lam[i, i]], np.repeat(lam[i, i + 1:] / 2, 2)])
            block = _realified_to_complex(Q.T * np.sqrt(scale), i, n)
        rows.append(block)
    return Frame(np.vstack(rows), field)


def _default_coefficients(N: int) -> np.ndarray:
    return 2.0 ** -np.arange(1, N)


@dataclass(frozen=True, eq=False)
class ShiftFrameConfig:
    """Truncation ``N`` of the shifted family ``2^{-i} L^i a_k (e_1 + e_{k+1})``.

    ``a[k-1]`` is the coefficient ``a_k``; only the first ``N - 1`` are used.
    Complex frames add the branch ``2^{-i} L^i b_k (e_1 + i e_{k+1})``.
    """

    N: int
    a: np.ndarray | None = None
    field: Field = Field.REAL
    b: np.ndarray | None = None
    _coef: tuple = dc_field(init=False, repr=False, default=())

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("truncation N must be >= 2")
        object.__setattr__(self, "field", Field(self.field))
        a = _default_coefficients(self.N) if self.a is None else np.asarray(self.a, dtype=float)[: self.N - 1]
        b = a if self.b is None else np.asarray(self.b, dtype=float)[: self.N - 1]
        for name, c in (("a", a), ("b", b)):
            if c.size < self.N - 1:
                raise ValueError(f"need {self.N - 1} coefficients in {name}, got {c.size}")
            if np.any(c == 0) or not np.all(np.isfinite(c)):
                raise ValueError(f"coefficients {name} must be finite and nonzero")
        object.__setattr__(self, "_coef", (a, b))


def shift_frame(config: ShiftFrameConfig | int) -> Frame:
    """Canonical basis of ``R^N`` (``C^N``) plus ``2^{-i} a_k (e_{1+i} + e_{1+i+k})``.

    The real family has exactly ``N(N+1)/2`` vectors and the complex one
    ``N^2``, the minimal injective counts.
    """
    if not isinstance(config, ShiftFrameConfig):
        config = ShiftFrameConfig(int(config))
    N = config.N
    a, b = config._coef
    complex_ = config.field is Field.COMPLEX
    dtype = complex if complex_ else float
    rows = [np.eye(N, dtype=dtype)]
    for i in range(N - 1):
        for k in range(1, N - i):
            v = np.zeros(N, dtype=dtype)
            v[i] = v[i + k] = a[k - 1] / 2**i
            rows.append(v[None])
            if complex_:
                w = np.zeros(N, dtype=dtype)
                w[i] = b[k - 1] / 2**i
                w[i + k] = 1j * b[k - 1] / 2**i
                rows.append(w[None])
    return Frame(np.vstack(rows), config.field)


def _is_basis_vector(v: np.ndarray) -> bool:
    nz = np.flatnonzero(v)
    return nz.size == 1 and v[nz[0]] == 1


def boundedize(frame: Frame, N: int | None = None) -> Frame:
    """Replace every non-basis vector ``x_k`` by ``x_k + e_{n_k}`` and ``x_k - e_{n_k}``.

    The fresh indices are ``n_k = S + k`` where ``S`` is the input dimension,
    so ``n_1 < n_2 < ...`` all lie beyond the support of every input vector.
    The output lives in ``N`` coordinates (default ``S + K`` for ``K``
    replaced vectors); the canonical basis vectors of all ``N`` coordinates
    are included, and every output vector has norm at least 1.

    Raises
    ------
    ValueError
        If ``N`` leaves no room for the fresh indices.
    """
    X = frame.vectors
    S = frame.n
    basis = {int(np.flatnonzero(v)[0]) for v in X if _is_basis_vector(v)}
    others = [v for v in X if not _is_basis_vector(v)]
    K = len(others)
    if N is None:
        N = S + K
    if N < S + K:
        raise ValueError(f"truncation N={N} too small: need at least {S + K} coordinates")
    dtype = X.dtype
    rows = []
    for idx in range(N):
        if idx >= S or idx in basis:
            e = np.zeros(N, dtype=dtype)
            e[idx] = 1
            rows.append(e)
    for k, v in enumerate(others):
        base = np.zeros(N, dtype=dtype)
        base[:S] = v
        fresh = S + k
        for sign in (1, -1):
            y = base.copy()
            y[fresh] = sign
            rows.append(y)
    return Frame(np.vstack(rows), frame.field)


def random_frame(m: int, n: int, field: Field | str = Field.REAL,
                 seed: int | np.random.Generator | None = None) -> Frame:
    """``m`` i.i.d. standard Gaussian vectors (independent real and imaginary parts)."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    rng = np.random.default_rng(seed)
    field = Field(field)
    X = rng.standard_normal((m, n))
    if field is Field.COMPLEX:
        X = X + 1j * rng.standard_normal((m, n))
    return Frame(X, field)
