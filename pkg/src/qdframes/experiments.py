"""Monte Carlo reproductions of the density, openness and perturbation results.

Every experiment takes a single integer seed. Per-trial generators come from
``np.random.SeedSequence(seed).spawn(trials)``, so results do not depend on
whether trials run serially or in a thread pool.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from typing import Callable

import numpy as np

from .core import Field, Frame, numerical_rank
from .construct import random_frame
from .frame_ops import canonical_parseval, frame_operator, is_parseval, lower_riesz_bound
from .injectivity import check_injectivity
from .separation import BoundViolation
from .tilde import Variant, embed_vectors, tilde_matrix

__all__ = [
    "TrialSummary",
    "PreconditionError",
    "RepairResult",
    "density_experiment",
    "openness_probe",
    "parseval_repair",
    "parseval_repair_bound",
    "parseval_repair_experiment",
    "riesz_perturbation_check",
    "riesz_experiment",
    "tilde_perturbation_bound_check",
    "tilde_bound_experiment",
    "perturb_basis",
]

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """The inputs do not satisfy the hypothesis of the result being checked."""


@dataclass
class TrialSummary:
    name: str
    trials: int
    successes: int
    seed: int
    params: dict
    margins: dict = dc_field(default_factory=dict)
    notes: list = dc_field(default_factory=list)

    @property
    def fraction(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fraction"] = self.fraction
        return d


def _map_trials(fn: Callable[[np.random.Generator], object], trials: int, seed: int,
                workers: int = 1) -> list:
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]
    if workers <= 1:
        return [fn(r) for r in rngs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, rngs))


def _margin_stats(values) -> dict:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return {}
    return {"min": float(v.min()), "median": float(np.median(v)), "max": float(v.max())}


def _min_singular(A: np.ndarray) -> float:
    s = np.linalg.svd(A, compute_uv=False)
    return float(s[-1]) if A.shape[0] >= A.shape[1] else 0.0


def density_experiment(m: int, n: int, field: Field | str = Field.REAL, trials: int = 1000,
                       seed: int = 0, workers: int = 1) -> TrialSummary:
    """Fraction of Gaussian ``m``-vector frames that are injective.

    With ``m`` below the embedding dimension no frame can be injective; the
    summary then reports zero successes and a note instead of sampling.
    """
    field = Field(field)
    variant = Variant.default_for(field)
    D = variant.embed_dim(n)
    params = {"m": m, "n": n, "field": field.value, "embed_dim": D}
    if m < D:
        return TrialSummary("density", trials, 0, seed, params,
                            notes=[f"m={m} < D={D}: injectivity is impossible by counting"])

    def trial(rng):
        frame = random_frame(m, n, field, rng)
        rep = check_injectivity(frame, variant)
        return rep.injective, _min_singular(tilde_matrix(frame, variant))

    out = _map_trials(trial, trials, seed, workers)
    ok = [o[0] for o in out]
    margins = [o[1] for o in out]
    summary = TrialSummary("density", trials, int(sum(ok)), seed, params, {"sigma_min": _margin_stats(margins)})
    for i, (good, s) in enumerate(out):
        if not good:
            log.warning("density trial %d not injective; sigma_min of tilde matrix = %.3e", i, s)
            summary.notes.append(f"trial {i} failed with sigma_min={s:.3e}")
    return summary


def openness_probe(frame: Frame, epsilon: float, trials: int = 100, seed: int = 0,
                   workers: int = 1) -> TrialSummary:
    """Perturb an injective frame inside a ball of radius ``epsilon`` and recertify.

    The perturbation is a uniformly random direction in the space of
    ``m``-vector frames scaled to a radius drawn uniformly from
    ``[0, epsilon]``, so ``sum_k ||x_k - y_k||^2 <= epsilon^2``. The summary
    also records ``sigma_min`` of the unperturbed tilde matrix, a crude
    surrogate for the size of the safe ball.
    """
    variant = Variant.default_for(frame.field)
    if not check_injectivity(frame, variant).injective:
        raise PreconditionError("openness_probe needs an injective frame")
    X = frame.vectors
    margin = _min_singular(tilde_matrix(frame, variant))

    def trial(rng):
        G = rng.standard_normal(X.shape)
        if frame.field is Field.COMPLEX:
            G = G + 1j * rng.standard_normal(X.shape)
        G *= epsilon * rng.uniform() / np.linalg.norm(G)
        return check_injectivity(Frame(X + G, frame.field), variant).injective

    ok = _map_trials(trial, trials, seed, workers)
    params = {"m": frame.m, "n": frame.n, "field": frame.field.value, "epsilon": epsilon}
    return TrialSummary("openness", trials, int(sum(ok)), seed, params, {"sigma_min_unperturbed": margin})


def parseval_repair_bound(m: int, delta: float) -> float:
    """``2 m delta^2 + 8 (m delta)^2 m (1 + delta)^2``."""
    return 2 * m * delta**2 + 8 * (m * delta) ** 2 * m * (1 + delta) ** 2


@dataclass(frozen=True)
class RepairResult:
    frame: Frame
    perturbed: Frame
    distance_sq: float
    bound: float
    attempts: int
    subset: tuple


def parseval_repair(frame: Frame, delta: float, seed: int | np.random.Generator | None = 0,
                    max_attempts: int = 100) -> RepairResult:
    """Move a Parseval frame to a nearby injective Parseval frame.

    An already injective frame is returned unchanged. Otherwise the first
    ``D`` vectors whose tilde rows are linearly independent (topped up by
    index order) are perturbed by at most ``delta`` each until the frame
    becomes injective, and the result is re-normalized by ``S^{-1/2}``.

    Raises
    ------
    PreconditionError
        If the input is not Parseval, ``2 m delta >= 1``, or ``m < D``.
    RuntimeError
        If no injective perturbation is found within ``max_attempts``.
    BoundViolation
        If the output misses Parseval, injectivity or the distance bound.
    """
    variant = Variant.default_for(frame.field)
    m, D = frame.m, variant.embed_dim(frame.n)
    if not is_parseval(frame, 1e-8):
        raise PreconditionError("input frame is not Parseval")
    if not 0 < 2 * m * delta < 1:
        raise PreconditionError(f"need 0 < 2 m delta < 1, got 2*{m}*{delta} = {2 * m * delta}")
    if m < D:
        raise PreconditionError(f"m={m} vectors cannot be injective (need at least {D})")
    rng = np.random.default_rng(seed)
    X = frame.vectors
    subset = _spanning_subset(tilde_matrix(frame, variant), D)
    attempts = 0
    if check_injectivity(frame, variant).injective:
        Y = X
    else:
        for attempts in range(1, max_attempts + 1):
            G = rng.standard_normal((D, frame.n))
            if frame.field is Field.COMPLEX:
                G = G + 1j * rng.standard_normal((D, frame.n))
            # Each perturbation has norm in (0, delta].
            G *= (delta * rng.uniform(0.5, 1.0, size=(D, 1))) / np.linalg.norm(G, axis=1, keepdims=True)
            Y = X.copy()
            Y[list(subset)] += G
            if check_injectivity(Frame(Y, frame.field), variant).injective:
                break
        else:
            raise RuntimeError(f"no injective perturbation found in {max_attempts} attempts")
    perturbed = Frame(Y, frame.field)
    repaired = canonical_parseval(perturbed)
    dist = float(np.sum(np.abs(X - repaired.vectors) ** 2))
    bound = parseval_repair_bound(m, delta)
    if not is_parseval(repaired, 1e-8):
        raise BoundViolation("repaired frame is not Parseval")
    if not check_injectivity(repaired, variant).injective:
        raise BoundViolation("repaired frame is not injective")
    if dist > bound:
        raise BoundViolation(f"squared distance {dist} exceeds bound {bound}")
    return RepairResult(repaired, perturbed, dist, bound, attempts, tuple(subset))


def _spanning_subset(A: np.ndarray, D: int) -> list[int]:
    """Greedy: rows that increase the rank first, then fill up in index order."""
    chosen: list[int] = []
    rank = 0
    for k in range(A.shape[0]):
        r, _, _ = numerical_rank(A[chosen + [k]])
        if r > rank:
            chosen.append(k)
            rank = r
        if len(chosen) == D:
            return chosen
    rest = [k for k in range(A.shape[0]) if k not in chosen]
    return sorted(chosen + rest[: D - len(chosen)])


def parseval_repair_experiment(n: int, field: Field | str = Field.REAL, trials: int = 100,
                               seed: int = 0, extra: int = 0) -> TrialSummary:
    """Repair non-injective Parseval frames: ``n`` basis vectors padded with zeros.

    The input has ``D + extra`` vectors, of which only the canonical basis is
    nonzero, so it is Parseval and (for ``n >= 2``) not injective. ``delta``
    is drawn log-uniformly from ``(0, 1 / (2m))``.
    """
    field = Field(field)
    D = Variant.default_for(field).embed_dim(n)
    m = D + extra
    X = np.zeros((m, n), dtype=field.dtype)
    X[:n] = np.eye(n)
    base = Frame(X, field)

    def trial(rng):
        delta = float(np.exp(rng.uniform(np.log(1e-4), np.log(0.999 / (2 * m)))))
        try:
            res = parseval_repair(base, delta, rng)
        except (BoundViolation, RuntimeError) as exc:
            return False, delta, float("nan"), str(exc)
        return True, delta, res.distance_sq / res.bound, ""

    out = _map_trials(trial, trials, seed)
    params = {"n": n, "m": m, "field": field.value}
    summary = TrialSummary("parseval-repair", trials, sum(o[0] for o in out), seed, params,
                           {"distance_over_bound": _margin_stats([o[2] for o in out if o[0]])})
    summary.notes.extend(o[3] for o in out if not o[0])
    return summary


def riesz_perturbation_check(family, epsilon: float) -> bool:
    """Check ``lower_riesz_bound(family) >= (1 - epsilon)^2``.

    ``family`` row ``i`` is compared with ``e_i`` of its ambient space; the
    hypothesis is ``sum_i ||e_i - x_i||^2 < epsilon^2 <= 1``.
    """
    X = np.atleast_2d(np.asarray(family))
    m, N = X.shape
    if m > N:
        raise PreconditionError("more vectors than coordinates; there is no basis to compare with")
    if not 0 < epsilon <= 1:
        raise PreconditionError("epsilon must lie in (0, 1]")
    E = np.eye(N, dtype=X.dtype)[:m]
    dist2 = float(np.sum(np.abs(E - X) ** 2))
    if not dist2 < epsilon**2:
        raise PreconditionError(f"sum ||e_i - x_i||^2 = {dist2} is not below epsilon^2 = {epsilon**2}")
    return lower_riesz_bound(X) >= (1 - epsilon) ** 2


def perturb_basis(m: int, N: int, radius: float, rng: np.random.Generator,
                  field: Field | str = Field.REAL) -> np.ndarray:
    """First ``m`` canonical basis vectors of ``N`` coordinates plus a
    perturbation of total Frobenius norm exactly ``radius``."""
    field = Field(field)
    G = rng.standard_normal((m, N))
    if field is Field.COMPLEX:
        G = G + 1j * rng.standard_normal((m, N))
    G *= radius / np.linalg.norm(G)
    return np.eye(N, dtype=field.dtype)[:m] + G


def riesz_experiment(epsilon: float, trials: int = 100, seed: int = 0, max_dim: int = 10,
                     field: Field | str = Field.REAL) -> TrialSummary:
    """Random families with ``sum ||e_i - x_i||^2 < epsilon^2`` against the ``(1-eps)^2`` bound."""
    def trial(rng):
        N = int(rng.integers(2, max_dim + 1))
        m = int(rng.integers(1, N + 1))
        radius = epsilon * rng.uniform(0.0, 1.0) * (1 - 1e-9)
        X = perturb_basis(m, N, radius, rng, field)
        return riesz_perturbation_check(X, epsilon), lower_riesz_bound(X)

    out = _map_trials(trial, trials, seed)
    return TrialSummary("riesz", trials, sum(o[0] for o in out), seed,
                        {"epsilon": epsilon, "max_dim": max_dim, "field": Field(field).value},
                        {"lower_bound": _margin_stats([o[1] for o in out]),
                         "required": (1 - epsilon) ** 2})


@dataclass(frozen=True)
class TildeBoundReport:
    per_index_lhs: np.ndarray
    per_index_rhs: np.ndarray
    per_index_ok: bool
    aggregate_lhs: float
    aggregate_rhs: float
    aggregate_ok: bool
    perturbation: float
    operator_gap: float | None
    riesz_lower: float | None
    small_regime_ok: bool | None
    truncation: int

    @property
    def ok(self) -> bool:
        return self.per_index_ok and self.aggregate_ok and self.small_regime_ok is not False


def tilde_perturbation_bound_check(family, truncation: int | None = None) -> TildeBoundReport:
    """Compare tilde vectors of a perturbed real basis with those of the basis.

    Row ``k`` of ``family`` is compared with ``e_k``. Checks, per index,
    ``||e~_k - x~_k||^2 <= 6 ((1 - x_kk)^2 + sum_{i != k} x_ki^2)`` and the
    summed version. When ``sum_k ||e_k - x_k||^2 <= 1/8`` it also checks
    that the synthesis map ``e~_k -> x~_k`` differs from the identity by at
    most ``sqrt(3)/2`` in operator norm, hence the tilde family has lower
    Riesz bound at least ``(1 - sqrt(3)/2)^2``.

    The per-index inequality is only claimed for ``||x_k||^2 <= 2``, which the
    small regime guarantees.
    """
    X = np.atleast_2d(np.asarray(family, dtype=float))
    m, N0 = X.shape
    N = N0 if truncation is None else truncation
    if N < N0 or m > N:
        raise PreconditionError("truncation must cover every coordinate and index")
    if N > N0:
        X = np.hstack([X, np.zeros((m, N - N0))])
    E = np.eye(N)[:m]
    Xt = embed_vectors(X, Variant.REAL)
    Et = embed_vectors(E, Variant.REAL)
    lhs = np.sum((Et - Xt) ** 2, axis=1)
    rhs = 6 * np.sum((E - X) ** 2, axis=1)
    total = float(np.sum((E - X) ** 2))
    small = total <= 1 / 8
    gap = riesz = None
    small_ok = None
    if small:
        # (I - T) maps e~_k to e~_k - x~_k on the span of {e~_k}.
        gap = float(np.linalg.norm((Et - Xt).T, 2))
        riesz = lower_riesz_bound(Xt)
        small_ok = bool(gap <= np.sqrt(3) / 2 + 1e-12 and riesz >= (1 - np.sqrt(3) / 2) ** 2 - 1e-12)
    return TildeBoundReport(
        per_index_lhs=lhs,
        per_index_rhs=rhs,
        per_index_ok=bool(np.all(lhs <= rhs + 1e-12)),
        aggregate_lhs=float(lhs.sum()),
        aggregate_rhs=float(rhs.sum()),
        aggregate_ok=bool(lhs.sum() <= rhs.sum() + 1e-12),
        perturbation=total,
        operator_gap=gap,
        riesz_lower=riesz,
        small_regime_ok=small_ok,
        truncation=N,
    )


def tilde_bound_experiment(trials: int = 1000, seed: int = 0, max_dim: int = 20) -> TrialSummary:
    """Random perturbations with ``sum ||e_k - x_k||^2 <= 1/8`` at truncations up to ``max_dim``."""
    def trial(rng):
        N = int(rng.integers(2, max_dim + 1))
        m = int(rng.integers(1, N + 1))
        radius = np.sqrt(1 / 8) * rng.uniform(0.0, 1.0)
        rep = tilde_perturbation_bound_check(perturb_basis(m, N, radius, rng))
        return rep.ok, rep.operator_gap

    out = _map_trials(trial, trials, seed)
    return TrialSummary("tilde-bound", trials, sum(o[0] for o in out), seed, {"max_dim": max_dim},
                        {"operator_gap": _margin_stats([o[1] for o in out]),
                         "operator_gap_cap": float(np.sqrt(3) / 2)})
