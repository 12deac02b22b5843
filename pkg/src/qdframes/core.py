"""Frames, Hermitian operators and the quadratic measurement form.

Vectors are stored as rows of a numpy array (``float64`` for real frames,
``complex128`` for complex ones). The scalar field travels with the data as a
:class:`Field` tag so that a single code path serves both cases.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Field",
    "Frame",
    "SelfAdjoint",
    "ShapeError",
    "as_operator",
    "numerical_rank",
    "quadratic_form",
    "frame_span_check",
]

IMAG_TOL = 1e-10


class ShapeError(ValueError):
    """Raised when dimensions or scalar fields of two objects disagree."""


class Field(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self) -> type:
        return np.float64 if self is Field.REAL else np.complex128

    @classmethod
    def of(cls, array: np.ndarray) -> "Field":
        return cls.COMPLEX if np.iscomplexobj(array) else cls.REAL


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def _coerce(values, field: Field | None) -> tuple[np.ndarray, Field]:
    arr = np.asarray(values)
    if field is None:
        field = Field.of(arr)
    field = Field(field)
    if field is Field.REAL and np.iscomplexobj(arr):
        if np.any(arr.imag != 0):
            raise ShapeError("complex entries in a real object")
        arr = arr.real
    return arr.astype(field.dtype), field


@dataclass(frozen=True, eq=False)
class Frame:
    """An ordered family of ``m`` vectors in ``R^n`` or ``C^n``.

    Parameters
    ----------
    vectors : array_like, shape (m, n)
        One frame vector per row.
    field : Field or str, optional
        Scalar field. Inferred from the dtype when omitted.
    """

    vectors: np.ndarray
    field: Field

    def __init__(self, vectors, field: Field | str | None = None):
        arr, fld = _coerce(vectors, None if field is None else Field(field))
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1) if arr.size else arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ShapeError(f"frame vectors must form a 2-d array, got ndim={arr.ndim}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ShapeError("a frame needs at least one vector of length >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("frame vectors must be finite")
        object.__setattr__(self, "vectors", _frozen(arr))
        object.__setattr__(self, "field", fld)

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.m

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, k):
        return self.vectors[k]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self.field is other.field
            and self.vectors.shape == other.vectors.shape
            and bool(np.array_equal(self.vectors, other.vectors))
        )

    def __repr__(self) -> str:
        return f"Frame(m={self.m}, n={self.n}, field={self.field.value})"

    def transform(self, F) -> "Frame":
        """Return ``{F x_k}`` for a square matrix ``F``."""
        F = np.asarray(F)
        field = Field.COMPLEX if np.iscomplexobj(F) else self.field
        return Frame(self.vectors @ F.T, field)

    def drop(self, k: int) -> "Frame":
        return Frame(np.delete(self.vectors, k, axis=0), self.field)

    def extend(self, other: "Frame") -> "Frame":
        if other.n != self.n:
            raise ShapeError("cannot concatenate frames of different dimension")
        field = Field.COMPLEX if Field.COMPLEX in (self.field, other.field) else Field.REAL
        return Frame(np.vstack([self.vectors, other.vectors]), field)


@dataclass(frozen=True, eq=False)
class SelfAdjoint:
    """A Hermitian ``n x n`` matrix.

    Input is symmetrized as ``(M + M^*) / 2``. With ``strict=True`` an input
    whose asymmetry exceeds ``atol`` (relative to its largest entry) raises
    instead.
    """

    matrix: np.ndarray
    field: Field

    def __init__(self, matrix, field: Field | str | None = None, *, strict: bool = False,
                 atol: float = 1e-12):
        arr, fld = _coerce(matrix, None if field is None else Field(field))
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ShapeError(f"operator must be a non-empty square matrix, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("operator entries must be finite")
        if strict:
            scale = max(1.0, float(np.max(np.abs(arr))))
            if np.max(np.abs(arr - arr.conj().T)) > atol * scale:
                raise ValueError("matrix is not Hermitian")
        sym = (arr + arr.conj().T) / 2
        if fld is Field.COMPLEX:
            sym[np.diag_indices_from(sym)] = sym.diagonal().real
        object.__setattr__(self, "matrix", _frozen(sym))
        object.__setattr__(self, "field", fld)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SelfAdjoint):
            return NotImplemented
        return self.field is other.field and bool(np.array_equal(self.matrix, other.matrix))

    def __repr__(self) -> str:
        return f"SelfAdjoint(n={self.n}, field={self.field.value})"

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def norm(self) -> float:
        """Frobenius (Hilbert-Schmidt) norm."""
        return float(np.linalg.norm(self.matrix))

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    @classmethod
    def zeros(cls, n: int, field: Field | str = Field.REAL) -> "SelfAdjoint":
        return cls(np.zeros((n, n), dtype=Field(field).dtype), field)

    @classmethod
    def identity(cls, n: int, field: Field | str = Field.REAL) -> "SelfAdjoint":
        return cls(np.eye(n, dtype=Field(field).dtype), field)


OperatorLike = Union[SelfAdjoint, np.ndarray, list]


def as_operator(T: OperatorLike, field: Field | str | None = None) -> SelfAdjoint:
    if isinstance(T, SelfAdjoint):
        if field is not None and Field(field) is Field.COMPLEX and T.field is Field.REAL:
            return SelfAdjoint(T.matrix.astype(complex), Field.COMPLEX)
        return T
    return SelfAdjoint(T, field)


def numerical_rank(M, tol: float | None = None) -> tuple[int, np.ndarray, float]:
    """Rank of ``M`` by counting singular values above a tolerance.

    The default tolerance is ``max(rows, cols) * eps * sigma_max``.

    Returns
    -------
    rank : int
    s : ndarray
        Singular values in descending order.
    tol : float
        The threshold that was applied.
    """
    M = np.atleast_2d(np.asarray(M))
    if M.size == 0:
        return 0, np.zeros(0), 0.0
    s = np.linalg.svd(M, compute_uv=False)
    if tol is None:
        tol = max(M.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    return int(np.count_nonzero(s > tol)), s, float(tol)


def quadratic_form(T: OperatorLike, x) -> float:
    """Return ``<Tx, x>`` for Hermitian ``T``.

    The value is real up to rounding; an imaginary part larger than
    ``1e-10 * (1 + |value|)`` indicates a non-Hermitian input and raises.
    """
    M = T.matrix if isinstance(T, SelfAdjoint) else np.asarray(T)
    x = np.asarray(x)
    if M.ndim != 2 or x.ndim != 1 or M.shape != (x.size, x.size):
        raise ShapeError(f"operator of shape {M.shape} cannot act on a vector of length {x.size}")
    value = np.vdot(x, M @ x)
    if abs(value.imag) > IMAG_TOL * (1 + abs(value)):
        raise ValueError(f"<Tx, x> has imaginary part {value.imag:.3e}; T is not Hermitian")
    return float(value.real)


def frame_span_check(frame: Frame) -> tuple[bool, int]:
    """Whether the frame vectors span the whole space, and their numerical rank."""
    rank, _, _ = numerical_rank(frame.vectors)
    return rank == frame.n, rank
