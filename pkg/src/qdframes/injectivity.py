"""Deciding whether a frame determines every Hermitian operator from ``<Tx_k, x_k>``.

A frame is injective for a :class:`~qdframes.tilde.Variant` exactly when its
tilde matrix has full column rank. When it is not, a right singular vector for
the smallest singular value gives a nonzero operator invisible to every
measurement.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core import Field, Frame, SelfAdjoint, numerical_rank
from .tilde import Variant, operator_from_dual, tilde_matrix

__all__ = [
    "InjectivityReport",
    "check_injectivity",
    "is_injective",
    "witness_operator",
    "haar_unitary",
    "eigenbasis_probe",
    "tilde_span_contains",
]


@dataclass(frozen=True)
class InjectivityReport:
    variant: Variant
    m: int
    embed_dim: int
    rank: int
    injective: bool
    smallest_kept_singular_value: float
    tolerance: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["variant"] = self.variant.value
        return d


def _variant(frame: Frame, variant) -> Variant:
    return Variant.default_for(frame.field) if variant is None else Variant(variant)


def check_injectivity(frame: Frame, variant: Variant | str | None = None) -> InjectivityReport:
    """Rank test of the tilde matrix against the embedding dimension."""
    variant = _variant(frame, variant)
    A = tilde_matrix(frame, variant)
    D = A.shape[1]
    rank, s, tol = numerical_rank(A)
    kept = float(s[rank - 1]) if rank else 0.0
    return InjectivityReport(
        variant=variant,
        m=frame.m,
        embed_dim=D,
        rank=rank,
        injective=rank == D,
        smallest_kept_singular_value=kept,
        tolerance=tol,
    )


def is_injective(frame: Frame, variant: Variant | str | None = None) -> bool:
    return check_injectivity(frame, variant).injective


def witness_operator(frame: Frame, variant: Variant | str | None = None) -> SelfAdjoint | None:
    """A unit-Frobenius-norm Hermitian ``T != 0`` with ``<Tx_k, x_k> ~ 0`` for all ``k``.

    Returns ``None`` for injective frames. For trace-one variants the witness
    has trace zero.
    """
    variant = _variant(frame, variant)
    if check_injectivity(frame, variant).injective:
        return None
    A = tilde_matrix(frame, variant)
    _, _, Vh = np.linalg.svd(A, full_matrices=True)
    T = operator_from_dual(Vh[-1], variant, frame.n)
    return SelfAdjoint(T.matrix / T.norm(), T.field)


def haar_unitary(n: int, field: Field | str, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal (real) or unitary (complex) matrix.

    Columns are the basis vectors. Draws whose Gaussian seed matrix is
    numerically singular are redrawn.
    """
    field = Field(field)
    while True:
        G = rng.standard_normal((n, n))
        if field is Field.COMPLEX:
            G = G + 1j * rng.standard_normal((n, n))
        Q, R = np.linalg.qr(G)
        d = np.diagonal(R)
        if np.min(np.abs(d)) > 1e-12 * max(1.0, np.max(np.abs(d))):
            return Q * (d / np.abs(d))


def eigenbasis_probe(frame: Frame, trials: int = 100, seed: int | None = 0
                     ) -> tuple[bool, np.ndarray | None]:
    """Search random orthonormal bases for one on which the frame is blind.

    For a basis ``{e_j}`` the ``m x n`` matrix ``|<x_k, e_j>|^2`` must have
    rank ``n`` if the frame is injective. Returns ``(False, basis)`` for the
    first basis violating this and ``(True, None)`` when no violation was
    found. A pass is only evidence, not a certificate.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        E = haar_unitary(frame.n, frame.field, rng)
        M = np.abs(frame.vectors.conj() @ E) ** 2
        rank, _, _ = numerical_rank(M)
        if rank < frame.n:
            return False, E
    return True, None


def tilde_span_contains(big: Frame, small: Frame, variant: Variant | str | None = None) -> bool:
    """Whether every tilde vector of ``small`` lies in the tilde span of ``big``.

    ``small`` may live in fewer coordinates; it is zero-padded to ``big.n``.
    """
    variant = _variant(big, variant)
    if small.n > big.n:
        return False
    if small.field is Field.COMPLEX and big.field is Field.REAL:
        return False
    pad = np.zeros((small.m, big.n), dtype=big.field.dtype)
    pad[:, : small.n] = small.vectors
    A = tilde_matrix(big, variant)
    B = tilde_matrix(Frame(pad, big.field), variant)
    r_a, _, _ = numerical_rank(A)
    r_ab, _, _ = numerical_rank(np.vstack([A, B]))
    return r_a == r_ab
