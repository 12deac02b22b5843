"""Recovering a Hermitian operator from measurements ``a_k = <T x_k, x_k>``.

The unknowns are the tilde coefficients of ``T``, so every mode reduces to
the real linear system ``A t = a`` with ``A`` the tilde matrix of the frame.
No positivity or trace constraint is imposed while solving;
:func:`validate_state` reports how far the answer is from being a state.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .core import Field, Frame, SelfAdjoint, ShapeError, as_operator, numerical_rank
from .tilde import Variant, operator_from_dual, tilde_matrix

__all__ = [
    "EstimationResult",
    "StateValidation",
    "Unsolvable",
    "solvability",
    "estimate_state",
    "validate_state",
    "simulate_measurements",
    "random_state",
    "project_to_state",
    "random_hermitian",
    "MAX_SUBSETS",
]

MAX_SUBSETS = 100_000
MINOR_LIMIT = 12

Mode = Literal["exact", "least_squares", "subset"]
_MODE_ALIASES = {"lsq": "least_squares", "least-squares": "least_squares"}


class Unsolvable(ValueError):
    """Exact mode was asked for on an inconsistent measurement record."""


@dataclass(frozen=True)
class StateValidation:
    trace: float
    min_eigenvalue: float
    max_eigenvalue: float
    is_psd: bool
    minors_ok: bool | None
    is_state: bool


@dataclass(frozen=True)
class EstimationResult:
    operator: SelfAdjoint
    solvable: bool
    rank_a: int
    rank_b: int
    residual: float
    trace: float
    min_eigenvalue: float
    is_state: bool
    mode: str

    def to_dict(self) -> dict:
        from .serialize import operator_to_json

        return {
            "operator": operator_to_json(self.operator),
            "solvable": self.solvable,
            "rank_a": self.rank_a,
            "rank_b": self.rank_b,
            "residual": self.residual,
            "trace": self.trace,
            "min_eigenvalue": self.min_eigenvalue,
            "is_state": self.is_state,
            "mode": self.mode,
        }


def _measurements(frame: Frame, a) -> np.ndarray:
    a = np.asarray(a, dtype=float).reshape(-1)
    if a.size != frame.m:
        raise ShapeError(f"got {a.size} measurements for a frame of {frame.m} vectors")
    if not np.all(np.isfinite(a)):
        raise ValueError("measurements must be finite")
    return a


def _system(frame: Frame, a, variant, trace: float) -> tuple[np.ndarray, np.ndarray, Variant]:
    variant = Variant.default_for(frame.field) if variant is None else Variant(variant)
    a = _measurements(frame, a)
    A = tilde_matrix(frame, variant)
    if variant.trace_one:
        # <Tx, x> = <T~, x~> + tr(T) |x_1|^2 for the trace-one embedding.
        a = a - trace * np.abs(frame.vectors[:, 0]) ** 2
    return A, a, variant


def solvability(frame: Frame, a, variant: Variant | str | None = None,
                trace: float = 1.0) -> tuple[int, int, bool]:
    """Ranks of ``A`` and ``[A | a]``; the record is consistent iff they agree.

    For trace-one variants the record is tested against operators of trace
    ``trace``.
    """
    A, b, _ = _system(frame, a, variant, trace)
    rank_a, s, _ = numerical_rank(A)
    # Same absolute threshold for both matrices, so appending a zero column
    # cannot change the count.
    scale = max(s[0] if s.size else 0.0, np.linalg.norm(b))
    tol = max(A.shape[0], A.shape[1] + 1) * np.finfo(float).eps * scale
    rank_a, _, _ = numerical_rank(A, tol)
    rank_b, _, _ = numerical_rank(np.column_stack([A, b]), tol)
    return rank_a, rank_b, rank_a == rank_b


def _finish(t, A, b, frame, variant, trace, solvable, rank_a, rank_b, mode, tol) -> EstimationResult:
    T = operator_from_dual(t, variant, frame.n)
    if variant.trace_one:
        M = T.matrix.copy()
        M[0, 0] += trace
        T = SelfAdjoint(M, T.field)
    residual = float(np.linalg.norm(A @ t - b))
    v = validate_state(T, tol)
    return EstimationResult(T, solvable, rank_a, rank_b, residual, v.trace, v.min_eigenvalue,
                            v.is_state, mode)


def estimate_state(frame: Frame, a, mode: Mode | str = "least_squares",
                   variant: Variant | str | None = None, *, trace: float = 1.0,
                   max_subsets: int = MAX_SUBSETS, state_tol: float = 1e-8,
                   fallback: bool = False) -> EstimationResult:
    """Estimate ``T`` from the measurement record ``a``.

    Parameters
    ----------
    mode : {"exact", "least_squares", "subset"}
        ``exact`` returns the minimum-norm solution of ``A t = a`` and raises
        :class:`Unsolvable` if the record is inconsistent. ``least_squares``
        returns the minimum-norm minimizer of ``||A t - a||``. ``subset``
        solves exactly on every ``D``-row subset of ``A`` that is a basis and
        keeps the operator with the smallest total squared residual.
    variant : Variant, optional
        Full variants (default) estimate an unconstrained Hermitian ``T``.
        Trace-one variants estimate ``T`` subject to ``tr(T) = trace``.
    max_subsets : int
        Subset mode refuses to enumerate more than this many subsets.
    fallback : bool
        In exact mode, return the least-squares estimate (flagged
        ``solvable=False``) instead of raising on an inconsistent record.
    """
    mode = _MODE_ALIASES.get(mode, mode)
    A, b, variant = _system(frame, a, variant, trace)
    rank_a, rank_b, solvable = solvability(frame, a, variant, trace)
    if mode == "exact" and not solvable and fallback:
        mode = "least_squares"
    if mode == "exact":
        if not solvable:
            raise Unsolvable(f"measurement record is inconsistent (rank A = {rank_a}, rank [A|a] = {rank_b})")
        t = np.linalg.lstsq(A, b, rcond=None)[0]
    elif mode == "least_squares":
        t = np.linalg.lstsq(A, b, rcond=None)[0]
    elif mode == "subset":
        t = _best_subset(A, b, max_subsets)
    else:
        raise ValueError(f"unknown estimation mode {mode!r}")
    return _finish(t, A, b, frame, variant, trace, solvable, rank_a, rank_b, mode, state_tol)


def _best_subset(A: np.ndarray, b: np.ndarray, max_subsets: int) -> np.ndarray:
    m, D = A.shape
    if m < D:
        raise ValueError(f"subset mode needs at least D={D} measurements, got {m}")
    count = math.comb(m, D)
    if count > max_subsets:
        raise ValueError(f"subset mode would enumerate C({m}, {D}) = {count} subsets (limit {max_subsets})")
    best, best_err = None, np.inf
    for rows in itertools.combinations(range(m), D):
        sub = A[list(rows)]
        rank, _, _ = numerical_rank(sub)
        if rank < D:
            continue
        t = np.linalg.solve(sub, b[list(rows)])
        err = float(np.sum((A @ t - b) ** 2))
        if err < best_err:
            best, best_err = t, err
    if best is None:
        raise ValueError("no subset of the tilde vectors forms a basis; the frame is not injective")
    return best


def _principal_minors_ok(M: np.ndarray, tol: float) -> bool:
    n = M.shape[0]
    scale = max(1.0, float(np.max(np.abs(M))))
    for r in range(1, n + 1):
        for idx in itertools.combinations(range(n), r):
            minor = np.linalg.det(M[np.ix_(idx, idx)]).real
            if minor < -tol * scale**r:
                return False
    return True


def validate_state(T, tol: float = 1e-10) -> StateValidation:
    """Trace, extreme eigenvalues and positivity of ``T``.

    ``T`` counts as positive when ``lambda_min >= -tol * max(1, lambda_max)``.
    The principal-minor test is exhaustive and only run for ``n <= 12``
    (``minors_ok`` is ``None`` otherwise).
    """
    T = as_operator(T)
    w = T.eigvalsh()
    lo, hi = float(w[0]), float(w[-1])
    psd = lo >= -tol * max(1.0, hi)
    minors = _principal_minors_ok(T.matrix, tol) if T.n <= MINOR_LIMIT else None
    tr = T.trace
    return StateValidation(tr, lo, hi, psd, minors, psd and abs(tr - 1) <= tol)


def project_to_state(T) -> SelfAdjoint:
    """Clip negative eigenvalues and renormalize to unit trace.

    A post-processing convenience: it changes the measurement residual and is
    not part of the least-squares estimate.
    """
    T = as_operator(T)
    w, V = np.linalg.eigh(T.matrix)
    w = np.clip(w, 0, None)
    if w.sum() <= 0:
        w = np.ones_like(w)
    w = w / w.sum()
    return SelfAdjoint((V * w) @ V.conj().T, T.field)


def simulate_measurements(frame: Frame, T, noise_sigma: float = 0.0,
                          seed: int | np.random.Generator | None = None) -> np.ndarray:
    """``a_k = <T x_k, x_k> + eps_k`` with ``eps_k ~ N(0, sigma^2)``."""
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    T = as_operator(T)
    if T.n != frame.n:
        raise ShapeError(f"operator is {T.n}x{T.n} but frame vectors have length {frame.n}")
    X = frame.vectors
    a = np.einsum("ki,ij,kj->k", X.conj(), T.matrix, X).real
    if noise_sigma > 0:
        a = a + np.random.default_rng(seed).normal(0.0, noise_sigma, size=a.shape)
    return a


def random_state(n: int, field: Field | str = Field.REAL,
                 seed: int | np.random.Generator | None = None) -> SelfAdjoint:
    """``G G^* / tr(G G^*)`` for a Gaussian ``n x n`` matrix ``G``."""
    field = Field(field)
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n))
    if field is Field.COMPLEX:
        G = G + 1j * rng.standard_normal((n, n))
    rho = G @ G.conj().T
    return SelfAdjoint(rho / np.trace(rho).real, field)


def random_hermitian(n: int, field: Field | str = Field.REAL,
                     seed: int | np.random.Generator | None = None) -> SelfAdjoint:
    field = Field(field)
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n))
    if field is Field.COMPLEX:
        G = G + 1j * rng.standard_normal((n, n))
    return SelfAdjoint(G, field)
