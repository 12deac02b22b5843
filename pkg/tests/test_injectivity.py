import numpy as np
import pytest

from qdframes.construct import random_frame, sum_pairs
from qdframes.core import Field, Frame, quadratic_form
from qdframes.injectivity import (
    check_injectivity,
    eigenbasis_probe,
    haar_unitary,
    is_injective,
    tilde_span_contains,
    witness_operator,
)
from qdframes.tilde import Variant


def test_sum_pairs_two():
    rep = check_injectivity(sum_pairs(2))
    assert rep.injective and rep.rank == 3 and rep.embed_dim == 3
    assert rep.to_dict()["variant"] == "real"


def test_basis_is_not_injective_and_witness_is_blind():
    f = Frame(np.eye(3))
    rep = check_injectivity(f)
    assert not rep.injective and rep.rank == 3 and rep.embed_dim == 6
    T = witness_operator(f)
    assert T.norm() == pytest.approx(1)
    for x in f.vectors:
        assert abs(quadratic_form(T, x)) < 1e-12


def test_complex_witness(rng):
    f = random_frame(5, 3, "complex", rng)
    T = witness_operator(f)
    assert T.field is Field.COMPLEX
    assert max(abs(quadratic_form(T, x)) for x in f.vectors) < 1e-10


def test_trace_one_witness_is_traceless():
    f = Frame([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    T = witness_operator(f, "real-trace-one")
    assert abs(T.trace) < 1e-12
    assert witness_operator(sum_pairs(3)) is None


def test_real_frame_under_complex_variant_needs_more_vectors():
    # A real frame cannot see imaginary parts of off-diagonal entries.
    f = Frame(sum_pairs(2).vectors.astype(complex))
    assert not is_injective(f, Variant.COMPLEX)


def test_haar_unitary(rng):
    for field in ("real", "complex"):
        U = haar_unitary(4, field, rng)
        assert np.allclose(U.conj().T @ U, np.eye(4))


def test_eigenbasis_probe():
    assert eigenbasis_probe(sum_pairs(3), trials=30)[0]
    with pytest.raises(ValueError):
        eigenbasis_probe(sum_pairs(2), trials=0)


def test_eigenbasis_probe_catches_rank_one_frame():
    ok, basis = eigenbasis_probe(Frame([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]), trials=5)
    assert not ok and basis.shape == (2, 2)


def test_tilde_span_contains():
    big = sum_pairs(3)
    assert tilde_span_contains(big, Frame([[1.0, -1.0]]))
    assert not tilde_span_contains(Frame(np.eye(3)), Frame([[1.0, 1.0]]))
    assert not tilde_span_contains(Frame(np.eye(2)), Frame(np.eye(3)))
