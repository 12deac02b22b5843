import numpy as np
import pytest

from qdframes.construct import parseval_staircase, sum_pairs
from qdframes.core import Frame
from qdframes.experiments import (
    PreconditionError,
    density_experiment,
    openness_probe,
    parseval_repair,
    parseval_repair_bound,
    perturb_basis,
    riesz_perturbation_check,
    tilde_perturbation_bound_check,
)
from qdframes.frame_ops import is_parseval
from qdframes.injectivity import is_injective


def test_density_minimal_frames():
    s = density_experiment(3, 2, "real", 200, seed=1)
    assert s.fraction == 1.0 and s.params["embed_dim"] == 3
    assert s.margins["sigma_min"]["min"] > 0


def test_density_undersized_is_zero():
    s = density_experiment(2, 2, "real", 50, seed=1)
    assert s.successes == 0 and s.fraction == 0.0 and s.notes


def test_density_reproducible_and_parallel_matches_serial():
    a = density_experiment(4, 2, "complex", 60, seed=9)
    b = density_experiment(4, 2, "complex", 60, seed=9, workers=4)
    assert a.to_dict() == b.to_dict()


def test_density_monotone_in_m():
    fr = [density_experiment(m, 2, "real", 50, seed=3).fraction for m in (1, 2, 3, 4)]
    assert fr == sorted(fr)


def test_openness():
    s = openness_probe(sum_pairs(3), 1e-6, 50, seed=0)
    assert s.fraction == 1.0 and s.margins["sigma_min_unperturbed"] > 0
    with pytest.raises(PreconditionError):
        openness_probe(Frame(np.eye(2)), 0.1)


def test_repair_bound_formula():
    assert parseval_repair_bound(3, 0.1) == pytest.approx(2 * 3 * 0.01 + 8 * 0.09 * 3 * 1.21)


def test_repair_of_injective_frame_is_itself():
    f = parseval_staircase(3)
    res = parseval_repair(f, 0.01)
    assert res.attempts == 0 and res.distance_sq < 1e-20


def test_repair_padded_basis():
    X = np.zeros((3, 2))
    X[:2] = np.eye(2)
    res = parseval_repair(Frame(X), 0.05, seed=2)
    assert is_parseval(res.frame, 1e-8) and is_injective(res.frame)
    assert res.distance_sq <= res.bound
    assert np.all(np.linalg.norm(res.perturbed.vectors - X, axis=1) <= 0.05 + 1e-15)


def test_repair_preconditions():
    X = np.zeros((3, 2))
    X[:2] = np.eye(2)
    with pytest.raises(PreconditionError):
        parseval_repair(Frame(X), 0.2)  # 2 m delta = 1.2
    with pytest.raises(PreconditionError):
        parseval_repair(Frame(2 * X), 0.01)
    with pytest.raises(PreconditionError):
        parseval_repair(Frame(np.eye(2)), 0.01)


def test_riesz_check():
    assert riesz_perturbation_check(np.eye(3), 0.5)
    rng = np.random.default_rng(0)
    assert riesz_perturbation_check(perturb_basis(3, 5, 0.49, rng), 0.5)
    with pytest.raises(PreconditionError):
        riesz_perturbation_check(perturb_basis(3, 5, 0.6, rng), 0.5)
    with pytest.raises(PreconditionError):
        riesz_perturbation_check(np.ones((3, 2)), 0.5)


def test_tilde_bound_identity_is_zero():
    rep = tilde_perturbation_bound_check(np.eye(4))
    assert rep.aggregate_lhs == 0 and rep.ok and rep.operator_gap == 0


def test_tilde_bound_per_index_by_hand():
    # x_1 = (1 + t, s): lhs = ((1+t)^2 - 1)^2 + 2 ((1+t) s)^2 + s^4 over the single family member
    t, s = 0.1, 0.2
    rep = tilde_perturbation_bound_check(np.array([[1 + t, s]]))
    lhs = ((1 + t) ** 2 - 1) ** 2 + ((1 + t) * s) ** 2 + s**4
    assert rep.per_index_lhs[0] == pytest.approx(lhs)
    assert rep.per_index_rhs[0] == pytest.approx(6 * (t**2 + s**2))
    assert rep.ok


def test_tilde_bound_truncation_padding():
    rep = tilde_perturbation_bound_check(np.array([[0.9, 0.1]]), truncation=5)
    assert rep.truncation == 5 and rep.ok
    with pytest.raises(PreconditionError):
        tilde_perturbation_bound_check(np.eye(3), truncation=2)


def test_tilde_bound_large_perturbation_skips_operator_estimate():
    rep = tilde_perturbation_bound_check(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert rep.operator_gap is None and rep.small_regime_ok is None
