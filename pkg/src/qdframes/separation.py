"""Truncated versions of the infinite-dimensional statements.

Everything here works on a finite truncation ``N`` of ``l2`` and reports
``N`` alongside the numbers; nothing decides a property of an infinite
family. The tilde space of the truncation uses the same block order as the
finite embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Field, Frame
from .estimate import EstimationResult, _measurements, validate_state
from .frame_ops import bessel_bound
from .tilde import Variant, embed_vectors, operator_from_dual, tilde_matrix

__all__ = [
    "BoundViolation",
    "NotSeparated",
    "SeparationReport",
    "DefectProbe",
    "separation_report",
    "dual_functionals",
    "l1_estimate",
    "lower_frame_defect_probe",
    "tilde_bessel_check",
]

SEP_TOL = 1e-10


class BoundViolation(AssertionError):
    """A numerically evaluated bound contradicts the inequality it should satisfy."""


class NotSeparated(ValueError):
    """Some member of the family lies (numerically) in the span of the others."""


@dataclass(frozen=True)
class SeparationReport:
    gaps: np.ndarray
    delta: float
    dual_norms: np.ndarray
    truncation: int
    separated: bool

    @property
    def sup_dual_norm(self) -> float:
        return float(np.max(self.dual_norms))


def _residuals(V: np.ndarray) -> np.ndarray:
    """Row ``j`` minus its orthogonal projection onto the span of the other rows."""
    m = V.shape[0]
    R = np.empty_like(V)
    for j in range(m):
        others = np.delete(V, j, axis=0)
        if others.size == 0:
            R[j] = V[j]
            continue
        # Projection onto the row space of `others` via an orthonormal basis.
        U, s, _ = np.linalg.svd(others.T, full_matrices=False)
        rank = int(np.count_nonzero(s > max(others.shape) * np.finfo(float).eps * s[0]))
        Q = U[:, :rank]
        R[j] = V[j] - Q @ (Q.T.conj() @ V[j])
    return R


def separation_report(family) -> SeparationReport:
    """Distances ``g_j = ||(I - P_j) v_j||`` of each member from the span of the rest."""
    V = np.atleast_2d(np.asarray(family, dtype=float))
    R = _residuals(V)
    gaps = np.linalg.norm(R, axis=1)
    scale = float(np.max(np.linalg.norm(V, axis=1))) if V.size else 0.0
    separated = bool(np.all(gaps > SEP_TOL * scale))
    with np.errstate(divide="ignore"):
        dual_norms = np.where(gaps > 0, 1 / np.where(gaps > 0, gaps, 1), np.inf)
    return SeparationReport(gaps, float(gaps.min()), dual_norms, V.shape[1], separated)


def dual_functionals(family) -> np.ndarray:
    """Biorthogonal vectors ``y_j = (I - P_j) v_j / ||(I - P_j) v_j||^2``.

    Raises
    ------
    NotSeparated
        If some gap is below ``1e-10`` times the largest member norm.
    """
    V = np.atleast_2d(np.asarray(family, dtype=float))
    R = _residuals(V)
    gaps = np.linalg.norm(R, axis=1)
    scale = float(np.max(np.linalg.norm(V, axis=1)))
    bad = np.flatnonzero(gaps <= SEP_TOL * scale)
    if bad.size:
        raise NotSeparated(f"members {bad.tolist()} lie in the span of the others")
    return R / (gaps**2)[:, None]


def l1_estimate(frame: Frame, a, variant: Variant | str | None = None) -> EstimationResult:
    """Solve ``<T x_k, x_k> = a_k`` as ``T~ = sum_k a_k y_k`` over the tilde duals."""
    variant = Variant.default_for(frame.field) if variant is None else Variant(variant)
    a = _measurements(frame, a)
    A = tilde_matrix(frame, variant)
    Y = dual_functionals(A)
    t = a @ Y
    T = operator_from_dual(t, variant, frame.n)
    residual = float(np.linalg.norm(A @ t - a))
    v = validate_state(T, 1e-8)
    rank = A.shape[0]
    return EstimationResult(T, True, rank, rank, residual, v.trace, v.min_eigenvalue, v.is_state, "l1")


@dataclass(frozen=True)
class DefectProbe:
    found: bool
    index: int | None
    achieved: float | None
    sums: np.ndarray
    truncation: int


def lower_frame_defect_probe(frame: Frame, epsilon: float) -> DefectProbe:
    """Look for a block-1 tilde direction that the tilde family barely sees.

    For ``m = 2..N`` computes ``sum_k <e~_{1m}, x~_k>^2`` where ``e~_{1m}`` is
    the unit vector on the slot of the coordinate pair ``(1, m)`` (its real
    part in the complex case). Returns the first ``m`` (1-based) whose sum is
    below ``2 * epsilon``.
    """
    variant = Variant.default_for(frame.field)
    A = tilde_matrix(frame, variant)
    N = frame.n
    # Block 1 slots: (1,1) then one slot per m (real) or a Re/Im pair (complex).
    stride = 1 if frame.field is Field.REAL else 2
    cols = [1 + stride * (m - 2) for m in range(2, N + 1)]
    sums = (A[:, cols] ** 2).sum(axis=0) if cols else np.zeros(0)
    hits = np.flatnonzero(sums < 2 * epsilon)
    if hits.size:
        j = int(hits[0])
        return DefectProbe(True, j + 2, float(sums[j]), sums, N)
    return DefectProbe(False, None, None, sums, N)


def tilde_bessel_check(family, field: Field | str | None = None, atol: float = 1e-10
                       ) -> tuple[float, float]:
    """Bessel bound of the tilde family and the cap it must respect.

    For members of norm at most 1 and Bessel bound ``B`` the cap is ``B``
    for real families and ``2B`` for complex ones.

    Raises
    ------
    ValueError
        If some member has norm above 1.
    BoundViolation
        If the computed bound exceeds the cap.
    """
    X = family.vectors if isinstance(family, Frame) else np.atleast_2d(np.asarray(family))
    if field is None:
        field = family.field if isinstance(family, Frame) else Field.of(X)
    field = Field(field)
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms > 1 + 1e-12):
        raise ValueError(f"members must have norm <= 1, largest is {norms.max():.6g}")
    B = bessel_bound(X)
    tilde = embed_vectors(X.astype(field.dtype), Variant.default_for(field))
    bound = bessel_bound(tilde)
    cap = B if field is Field.REAL else 2 * B
    if bound > cap + atol:
        raise BoundViolation(f"tilde Bessel bound {bound} exceeds cap {cap}")
    return bound, cap
