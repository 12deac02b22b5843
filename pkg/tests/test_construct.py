import numpy as np
import pytest

from qdframes.construct import (
    EigenvalueSchedule,
    ShiftFrameConfig,
    boundedize,
    leading_reflection,
    parseval_staircase,
    random_frame,
    shift_frame,
    staircase_complex,
    staircase_real,
    sum_pairs,
)
from qdframes.core import Field, Frame
from qdframes.frame_ops import frame_bounds
from qdframes.injectivity import is_injective, tilde_span_contains


def test_sum_pairs_hand():
    assert np.array_equal(sum_pairs(2).vectors, [[1, 0], [0, 1], [1, 1]])
    assert sum_pairs(1).m == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_staircases_are_minimal_and_injective(n):
    for seed in (None, n):
        r = staircase_real(n, seed)
        c = staircase_complex(n, seed)
        assert r.m == n * (n + 1) // 2 and is_injective(r)
        assert c.m == n * n and c.field is Field.COMPLEX and is_injective(c)


def test_staircase_real_block_structure():
    f = staircase_real(3)
    # block 1: e1, e1+e2, e1+e3; block 2: e2, e2+e3; block 3: e3
    expected = [[1, 0, 0], [1, 1, 0], [1, 0, 1], [0, 1, 0], [0, 1, 1], [0, 0, 1]]
    assert np.array_equal(f.vectors, expected)


def test_staircase_complex_small():
    f = staircase_complex(2)
    assert np.allclose(f.vectors, [[1, 0], [1, 1], [1, 1j], [0, 1]])


def test_leading_reflection():
    for r in range(1, 7):
        Q = leading_reflection(r)
        assert np.allclose(Q @ Q.T, np.eye(r))
        assert np.allclose(Q[0], 1 / np.sqrt(r))


def test_schedule_validation():
    EigenvalueSchedule([[1.0, 0.5], [0, 0.5]])
    with pytest.raises(ValueError):
        EigenvalueSchedule([[1.0, 0.5], [0.1, 0.5]])
    with pytest.raises(ValueError):
        EigenvalueSchedule([[0.9, 0.5], [0, 0.5]])
    assert np.allclose(EigenvalueSchedule.uniform(3).lam.sum(axis=0), 1)


@pytest.mark.parametrize("field", ["real", "complex"])
@pytest.mark.parametrize("n", range(1, 7))
def test_parseval_staircase(n, field):
    for seed in (None, 7):
        f = parseval_staircase(n, field=field, seed=seed)
        lo, hi = frame_bounds(f)
        assert abs(lo - 1) < 1e-10 and abs(hi - 1) < 1e-10
        assert is_injective(f)


def test_parseval_staircase_custom_schedule():
    lam = np.array([[1.0, 0.25, 0.5], [0, 0.75, 0.25], [0, 0, 0.25]])
    f = parseval_staircase(3, EigenvalueSchedule(lam))
    assert np.allclose(f.vectors.T @ f.vectors, np.eye(3))
    with pytest.raises(ValueError):
        parseval_staircase(2, EigenvalueSchedule(lam))


def test_shift_frame_small_by_hand():
    f = shift_frame(3)
    a1, a2 = 0.5, 0.25
    expected = np.vstack([np.eye(3), [[a1, a1, 0], [a2, 0, a2], [0, a1 / 2, a1 / 2]]])
    assert np.allclose(f.vectors, expected)


@pytest.mark.parametrize("N", range(2, 9))
def test_shift_frame_counts(N):
    r = shift_frame(N)
    c = shift_frame(ShiftFrameConfig(N, field=Field.COMPLEX))
    assert r.m == N * (N + 1) // 2 and is_injective(r)
    assert c.m == N * N and is_injective(c)


def test_shift_config_validation():
    with pytest.raises(ValueError):
        ShiftFrameConfig(1)
    with pytest.raises(ValueError):
        ShiftFrameConfig(4, a=[1.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        ShiftFrameConfig(4, a=[1.0])


def test_boundedize_hand():
    f = boundedize(Frame([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]]))
    assert f.n == 3
    expected = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0.5, 0.5, 1], [0.5, 0.5, -1]]
    assert np.allclose(f.vectors, expected)


@pytest.mark.parametrize("N", range(2, 7))
def test_boundedize_keeps_tilde_span(N):
    for field in (Field.REAL, Field.COMPLEX):
        f = shift_frame(ShiftFrameConfig(N, field=field))
        b = boundedize(f)
        assert np.min(np.linalg.norm(b.vectors, axis=1)) >= 1 - 1e-15
        assert tilde_span_contains(b, f)


def test_boundedize_without_fresh_basis_loses_span():
    f = shift_frame(3)
    b = boundedize(f)
    keep = [k for k, v in enumerate(b.vectors) if not (np.count_nonzero(v) == 1 and np.flatnonzero(v)[0] >= 3)]
    assert not tilde_span_contains(Frame(b.vectors[keep]), f)


def test_boundedize_truncation_check():
    with pytest.raises(ValueError):
        boundedize(shift_frame(3), N=4)
    assert boundedize(shift_frame(3), N=8).n == 8


def test_random_frame_reproducible():
    assert random_frame(4, 2, "complex", 3) == random_frame(4, 2, "complex", 3)
    with pytest.raises(ValueError):
        random_frame(0, 2)
