import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qdframes.core import Field, Frame, SelfAdjoint, ShapeError
from qdframes.tilde import (
    Variant,
    embed_operator,
    embed_vector,
    embed_vectors,
    operator_from_dual,
    slot_layout,
    tilde_matrix,
)

from conftest import loop_form, loop_tilde, rand_hermitian


def test_embedding_dimensions():
    for n in range(1, 7):
        assert Variant.REAL.embed_dim(n) == n * (n + 1) // 2
        assert Variant.COMPLEX.embed_dim(n) == n * n
    assert Variant.REAL_TRACE_ONE.embed_dim(3) == 5
    assert Variant.COMPLEX_TRACE_ONE.embed_dim(3) == 8
    with pytest.raises(ShapeError):
        slot_layout(Variant.REAL_TRACE_ONE, 1)


def test_golden_vectors():
    assert np.array_equal(embed_vector([1, 2, 3], "real"), [1, 2, 3, 4, 6, 9])
    assert np.allclose(embed_vector([1, 1j], "complex"), [1, 0, 1, 1])
    assert np.allclose(embed_vector([1, 1], "real-trace-one"), [1, 0])


def test_golden_operator_sign():
    # The imaginary slot carries -2 Im(a_12): x = (1, i) gives <Tx,x> = -2 = <T~, x~>.
    T = np.array([[0, 1j], [-1j, 0]])
    assert np.allclose(embed_operator(T, "complex"), [0, 0, -2, 0])


def test_operator_from_dual_golden():
    assert np.allclose(operator_from_dual([1, 4, 3], "real").matrix, [[1, 2], [2, 3]])
    assert np.allclose(operator_from_dual([1, 0], "real-trace-one").matrix, [[0, 0.5], [0.5, 0]])


@pytest.mark.parametrize("complex_", [False, True])
def test_vectors_match_loop_oracle(rng, complex_):
    variant = Variant.COMPLEX if complex_ else Variant.REAL
    for n in range(1, 7):
        x = rng.standard_normal(n) + (1j * rng.standard_normal(n) if complex_ else 0)
        assert np.allclose(embed_vector(x, variant), loop_tilde(x, complex_))


@pytest.mark.parametrize("variant", list(Variant))
def test_pairing_identity(rng, variant):
    complex_ = variant.field is Field.COMPLEX
    for n in range(2, 8):
        A = rand_hermitian(rng, n, complex_)
        x = rng.standard_normal(n) + (1j * rng.standard_normal(n) if complex_ else 0)
        lhs = embed_operator(A, variant) @ embed_vector(x, variant)
        rhs = loop_form(A, x)
        if variant.trace_one:
            rhs -= np.trace(A).real * abs(x[0]) ** 2
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("variant", list(Variant))
def test_dual_inverts_embedding(rng, variant):
    complex_ = variant.field is Field.COMPLEX
    for n in range(2, 6):
        A = rand_hermitian(rng, n, complex_)
        if variant.trace_one:
            A = A - np.trace(A).real / n * np.eye(n)
        back = operator_from_dual(embed_operator(A, variant), variant, n)
        assert np.allclose(back.matrix, A)


def test_operator_from_dual_trace_one_is_traceless(rng):
    T = operator_from_dual(rng.standard_normal(8), "complex-trace-one")
    assert T.n == 3
    assert abs(T.trace) < 1e-12


def test_dimension_inference_errors():
    with pytest.raises(ShapeError):
        operator_from_dual(np.ones(5), "real")
    with pytest.raises(ShapeError):
        operator_from_dual(np.ones(4), "real", n=3)


def test_tilde_matrix_field_checks():
    f = Frame([[1, 1j]])
    with pytest.raises(ShapeError):
        tilde_matrix(f, "real")
    A = tilde_matrix(Frame([[1.0, 0.0], [1.0, 1.0]]))
    assert A.shape == (2, 3)
    with pytest.raises(ShapeError):
        embed_operator(np.array([[0, 1j], [-1j, 0]]), "real")


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 6), data=st.data())
def test_identity_property(n, data):
    x = data.draw(arrays(float, n, elements=finite)) + 1j * data.draw(arrays(float, n, elements=finite))
    M = data.draw(arrays(float, (n, n), elements=finite)) + 1j * data.draw(arrays(float, (n, n), elements=finite))
    A = SelfAdjoint(M).matrix
    lhs = float(embed_operator(A, "complex") @ embed_vector(x, "complex"))
    rhs = loop_form(A, x)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9 * (1 + np.abs(A).sum() * (np.abs(x) ** 2).sum()))


def test_embed_vectors_rows(rng):
    X = rng.standard_normal((4, 3))
    assert np.allclose(embed_vectors(X, "real"), [embed_vector(x, "real") for x in X])
