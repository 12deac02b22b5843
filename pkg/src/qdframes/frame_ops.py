"""Frame operator, frame/Bessel/Riesz bounds and the canonical Parseval frame."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import Frame, SelfAdjoint

__all__ = [
    "FrameBounds",
    "RankDeficientFrame",
    "frame_operator",
    "frame_bounds",
    "canonical_parseval",
    "bessel_bound",
    "lower_riesz_bound",
    "is_parseval",
]

EIG_FLOOR = 1e-12


class RankDeficientFrame(ValueError):
    """The frame operator is not invertible (the vectors do not span)."""


class FrameBounds(NamedTuple):
    lower: float
    upper: float

    @property
    def spans(self) -> bool:
        return self.lower > 0


def _rows(family) -> np.ndarray:
    if isinstance(family, Frame):
        return family.vectors
    return np.atleast_2d(np.asarray(family))


def frame_operator(frame: Frame) -> SelfAdjoint:
    """``S = sum_k x_k x_k^*``."""
    X = frame.vectors
    return SelfAdjoint(X.T @ X.conj(), frame.field)


def frame_bounds(frame: Frame) -> FrameBounds:
    """Optimal frame bounds, the extreme eigenvalues of ``S``."""
    w = frame_operator(frame).eigvalsh()
    return FrameBounds(max(float(w[0]), 0.0), float(w[-1]))


def is_parseval(frame: Frame, atol: float = 1e-10) -> bool:
    S = frame_operator(frame).matrix
    return bool(np.max(np.abs(S - np.eye(frame.n))) <= atol)


def canonical_parseval(frame: Frame) -> Frame:
    """Return ``{S^{-1/2} x_k}``, whose frame operator is the identity.

    Raises
    ------
    RankDeficientFrame
        If ``lambda_min(S) < 1e-12 * lambda_max(S)``.
    """
    S = frame_operator(frame).matrix
    w, V = np.linalg.eigh(S)
    if w[-1] <= 0 or w[0] < EIG_FLOOR * w[-1]:
        raise RankDeficientFrame(
            f"frame operator is (numerically) singular: lambda_min={w[0]:.3e}, lambda_max={w[-1]:.3e}"
        )
    S_inv_half = (V / np.sqrt(w)) @ V.conj().T
    return Frame(frame.vectors @ S_inv_half.T, frame.field)


def bessel_bound(family) -> float:
    """Optimal Bessel bound: the squared largest singular value of the synthesis matrix."""
    X = _rows(family)
    return float(np.linalg.norm(X, 2) ** 2)


def lower_riesz_bound(family) -> float:
    """Optimal lower Riesz bound ``A`` in ``A sum|a_i|^2 <= ||sum a_i x_i||^2``.

    Zero whenever the family is linearly dependent, in particular when it has
    more members than the ambient dimension.
    """
    X = _rows(family)
    m, n = X.shape
    if m > n:
        return 0.0
    s = np.linalg.svd(X, compute_uv=False)
    return float(s[-1] ** 2)
