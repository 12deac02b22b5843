"""Real embeddings ``x -> x~`` and ``T -> T~`` with ``<Tx, x> = <T~, x~>``.

Coordinates follow the block order ``(1,1), (1,2), ..., (1,n), (2,2), ...``.
In the complex variants every off-diagonal pair ``(i, j)`` occupies two
slots, ``Re(conj(x_i) x_j)`` followed by ``Im(conj(x_i) x_j)``; the matching
operator slots carry ``2 Re(a_ij)`` and ``-2 Im(a_ij)``. The trace-one
variants drop the leading ``(1,1)`` slot and replace each remaining diagonal
slot by ``|x_i|^2 - |x_1|^2``; pairing against them is exact for trace-zero
operators and, in general, equals ``<Tx, x> - tr(T) |x_1|^2``.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache

import numpy as np

from .core import Field, Frame, SelfAdjoint, ShapeError, as_operator

__all__ = [
    "Variant",
    "slot_layout",
    "embed_vector",
    "embed_vectors",
    "embed_operator",
    "operator_from_dual",
    "tilde_matrix",
]

_DIAG, _RE, _IM = 0, 1, 2


class Variant(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"
    REAL_TRACE_ONE = "real-trace-one"
    COMPLEX_TRACE_ONE = "complex-trace-one"

    @property
    def field(self) -> Field:
        return Field.REAL if self in (Variant.REAL, Variant.REAL_TRACE_ONE) else Field.COMPLEX

    @property
    def trace_one(self) -> bool:
        return self in (Variant.REAL_TRACE_ONE, Variant.COMPLEX_TRACE_ONE)

    def embed_dim(self, n: int) -> int:
        full = n * (n + 1) // 2 if self.field is Field.REAL else n * n
        return full - 1 if self.trace_one else full

    @classmethod
    def default_for(cls, field: Field | str) -> "Variant":
        return cls.REAL if Field(field) is Field.REAL else cls.COMPLEX


@lru_cache(maxsize=None)
def slot_layout(variant: Variant, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Row index, column index and kind (diag/re/im) of every tilde slot."""
    variant = Variant(variant)
    if n < 1:
        raise ShapeError("dimension must be positive")
    if variant.trace_one and n < 2:
        raise ShapeError("trace-one embeddings need n >= 2")
    complex_ = variant.field is Field.COMPLEX
    rows, cols, kinds = [], [], []
    for i in range(n):
        for j in range(i, n):
            if i == j:
                if variant.trace_one and i == 0:
                    continue
                rows.append(i); cols.append(j); kinds.append(_DIAG)
            elif complex_:
                rows += [i, i]; cols += [j, j]; kinds += [_RE, _IM]
            else:
                rows.append(i); cols.append(j); kinds.append(_RE)
    out = tuple(np.array(a, dtype=np.intp) for a in (rows, cols, kinds))
    for a in out:
        a.setflags(write=False)
    return out


def _check_field(field: Field, variant: Variant) -> None:
    if field is not variant.field:
        raise ShapeError(f"{field.value} data cannot use the {variant.value} embedding")


def embed_vectors(X, variant: Variant | str) -> np.ndarray:
    """Embed every row of ``X``; returns an ``(m, D)`` real array."""
    variant = Variant(variant)
    X = np.atleast_2d(np.asarray(X))
    if variant.field is Field.REAL and np.iscomplexobj(X):
        raise ShapeError(f"complex data cannot use the {variant.value} embedding")
    X = X.astype(variant.field.dtype)
    rows, cols, kinds = slot_layout(variant, X.shape[1])
    prod = X[:, rows].conj() * X[:, cols]
    out = np.where(kinds == _IM, prod.imag, prod.real)
    if variant.trace_one:
        diag = kinds == _DIAG
        out[:, diag] -= np.abs(X[:, [0]]) ** 2
    return out


def embed_vector(x, variant: Variant | str) -> np.ndarray:
    """The tilde vector of a single frame vector."""
    return embed_vectors(np.asarray(x).reshape(1, -1), variant)[0]


def embed_operator(T, variant: Variant | str) -> np.ndarray:
    """The coefficient vector ``T~`` of a Hermitian operator.

    Diagonal slots carry ``a_ii``, real off-diagonal slots ``2 Re(a_ij)`` and
    imaginary slots ``-2 Im(a_ij)``. Trace-one variants omit ``a_11``.
    """
    variant = Variant(variant)
    T = as_operator(T)
    if variant.field is Field.REAL and T.field is Field.COMPLEX:
        raise ShapeError(f"complex operator cannot use the {variant.value} embedding")
    A = T.matrix.astype(variant.field.dtype)
    rows, cols, kinds = slot_layout(variant, T.n)
    entries = A[rows, cols]
    return np.select(
        [kinds == _DIAG, kinds == _RE],
        [entries.real, 2 * entries.real],
        -2 * entries.imag,
    )


def operator_from_dual(a, variant: Variant | str, n: int | None = None) -> SelfAdjoint:
    """The Hermitian ``T`` with ``<Tx, x> = <a, x~>`` for every ``x``.

    For trace-one variants the returned operator has trace zero, with
    ``b_11 = -sum_{i>1} a_ii``.
    """
    variant = Variant(variant)
    a = np.asarray(a, dtype=float)
    if a.ndim != 1:
        raise ShapeError("dual vector must be 1-d")
    if n is None:
        n = _dim_from_length(variant, a.size)
    if a.size != variant.embed_dim(n):
        raise ShapeError(f"{variant.value} dual vector for n={n} needs {variant.embed_dim(n)} entries, got {a.size}")
    rows, cols, kinds = slot_layout(variant, n)
    B = np.zeros((n, n), dtype=variant.field.dtype)
    diag = kinds == _DIAG
    B[rows[diag], cols[diag]] = a[diag]
    re = kinds == _RE
    B[rows[re], cols[re]] += a[re] / 2
    if variant.field is Field.COMPLEX:
        im = kinds == _IM
        B[rows[im], cols[im]] += -0.5j * a[im]
    if variant.trace_one:
        B[0, 0] = -a[diag].sum()
    upper = np.triu(B, 1)
    B = np.diag(np.diag(B)) + upper + upper.conj().T
    return SelfAdjoint(B, variant.field)


def _dim_from_length(variant: Variant, D: int) -> int:
    full = D + 1 if variant.trace_one else D
    if variant.field is Field.REAL:
        n = (math.isqrt(8 * full + 1) - 1) // 2
    else:
        n = math.isqrt(full)
    if n < 1 or variant.embed_dim(n) != D:
        raise ShapeError(f"length {D} is not a valid {variant.value} embedding size")
    return n


def tilde_matrix(frame: Frame, variant: Variant | str | None = None) -> np.ndarray:
    """The ``m x D`` real matrix whose ``k``-th row is the tilde vector of ``x_k``."""
    variant = Variant.default_for(frame.field) if variant is None else Variant(variant)
    _check_field(frame.field, variant)
    return embed_vectors(frame.vectors, variant)
