"""Weighted least-squares projection onto nonincreasing sequences.

Solves, for values v and positive weights w,

    minimize   sum_i w_i (v_i - b_i)^2
    subject to b_1 >= b_2 >= ... >= b_n >= 0,

by pool-adjacent-violators.  For nonnegative inputs the floor constraint
never binds, so the solver only pools and the result is a step sequence of
weighted block means.  Optimality is certified by the multipliers

    lambda_k = 2 * sum_{i <= k} w_i (b_i - v_i),

which must be nonnegative everywhere, and zero at every index where the
fitted sequence strictly decreases (and at the full length, which is mass
conservation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# dual feasibility / complementary slackness slack
DUAL_TOL = 1e-10
# conservation of prefix integrals, relative
PREFIX_TOL = 1e-10
# weighted block means vs fitted values, relative
BLOCK_MEAN_TOL = 1e-12

QP_ORACLE_MAX = 20


class InstanceTooLarge(ValueError):
    """The exhaustive oracle is restricted to small instances."""


@dataclass(frozen=True)
class WeightedSequence:
    """Finite sequence of nonnegative values with positive weights."""

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if values.ndim != 1 or values.shape != weights.shape or values.size == 0:
            raise ValueError("values and weights must be nonempty 1-d arrays of equal length")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("values must be finite and nonnegative")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise ValueError("weights must be finite and strictly positive")
        values.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class Block:
    """Maximal constant run of the fitted sequence: [start, stop) at level mean."""

    start: int
    stop: int
    mean: float
    weight: float


@dataclass(frozen=True)
class AntitonicFit:
    """Result of a projection: fitted sequence, blocks, KKT multipliers."""

    fitted: np.ndarray
    blocks: tuple[Block, ...]
    multipliers: np.ndarray

    def __post_init__(self):
        fitted = np.ascontiguousarray(self.fitted, dtype=np.float64)
        multipliers = np.ascontiguousarray(self.multipliers, dtype=np.float64)
        if fitted.ndim != 1 or fitted.shape != multipliers.shape or fitted.size == 0:
            raise ValueError("fitted and multipliers must be nonempty 1-d arrays of equal length")
        scale = max(1.0, float(np.max(np.abs(fitted))))
        if fitted.size > 1 and np.any(np.diff(fitted) > DUAL_TOL * scale):
            raise ValueError("fitted sequence must be nonincreasing")
        if fitted[-1] < -DUAL_TOL * scale:
            raise ValueError("fitted sequence must be nonnegative")
        fitted.setflags(write=False)
        multipliers.setflags(write=False)
        object.__setattr__(self, "fitted", fitted)
        object.__setattr__(self, "multipliers", multipliers)

    @property
    def block_count(self) -> int:
        return len(self.blocks)


def _blocks_from_runs(fitted: np.ndarray, weights: np.ndarray) -> tuple[Block, ...]:
    # maximal runs of exactly equal fitted values
    blocks = []
    start = 0
    n = fitted.size
    for i in range(1, n + 1):
        if i == n or fitted[i] != fitted[start]:
            blocks.append(
                Block(start, i, float(fitted[start]), float(weights[start:i].sum()))
            )
            start = i
    return tuple(blocks)


def _multipliers(ws: WeightedSequence, fitted: np.ndarray) -> np.ndarray:
    return 2.0 * np.cumsum(ws.weights * (fitted - ws.values))


def project_antitonic(ws: WeightedSequence) -> AntitonicFit:
    """Project onto the nonincreasing cone by pool-adjacent-violators.

    Scans left to right keeping a stack of blocks; a new block is merged
    into its left neighbour while the neighbour's mean is strictly smaller
    (equal means stay separate during pooling; reported blocks are
    canonicalized to maximal constant runs afterwards).  Already
    nonincreasing input comes back unchanged.
    """
    v = ws.values
    w = ws.weights
    n = ws.size
    # per stacked block: sum of w, sum of w*v, start index
    sw = np.empty(n)
    swv = np.empty(n)
    start = np.empty(n, dtype=np.int64)
    mean = np.empty(n)
    top = -1
    for i in range(n):
        top += 1
        sw[top] = w[i]
        swv[top] = w[i] * v[i]
        start[top] = i
        mean[top] = v[i]
        while top > 0 and mean[top - 1] < mean[top]:
            sw[top - 1] += sw[top]
            swv[top - 1] += swv[top]
            mean[top - 1] = swv[top - 1] / sw[top - 1]
            top -= 1
    fitted = np.empty(n)
    for k in range(top + 1):
        stop = start[k + 1] if k < top else n
        fitted[start[k]:stop] = mean[k]
    if fitted[-1] < 0:
        raise AssertionError("nonnegativity must not bind for nonnegative input")
    return AntitonicFit(fitted, _blocks_from_runs(fitted, w), _multipliers(ws, fitted))


def qp_oracle(ws: WeightedSequence) -> AntitonicFit:
    """Independent solver: exhaust activity patterns of the order constraints.

    Every subset of the n-1 adjacent constraints, taken as equalities,
    pools the sequence into runs of weighted means; the unique pattern
    whose candidate is primal feasible (nonincreasing) and dual feasible
    (all multipliers nonnegative) is the projection.  Restricted to
    n <= QP_ORACLE_MAX; raises ``InstanceTooLarge`` beyond that.
    """
    n = ws.size
    if n > QP_ORACLE_MAX:
        raise InstanceTooLarge(f"qp_oracle handles at most {QP_ORACLE_MAX} points, got {n}")
    v = ws.values
    w = ws.weights
    scale = max(1.0, float(np.dot(w, np.abs(v)) / w.sum()))
    for mask in range(1 << (n - 1)):
        fitted = np.empty(n)
        start = 0
        ok = True
        prev_mean = np.inf
        for i in range(n):
            # constraint i (between i and i+1) active when bit set
            if i == n - 1 or not (mask >> i) & 1:
                m = float(np.dot(w[start:i + 1], v[start:i + 1]) / w[start:i + 1].sum())
                if m > prev_mean + DUAL_TOL * scale:
                    ok = False
                    break
                fitted[start:i + 1] = m
                prev_mean = m
                start = i + 1
        if not ok:
            continue
        lam = _multipliers(ws, fitted)
        if np.min(lam) < -DUAL_TOL * scale:
            continue
        return AntitonicFit(fitted, _blocks_from_runs(fitted, w), lam)
    raise AssertionError("no activity pattern satisfied the optimality system")


@dataclass(frozen=True)
class PrefixCheckReport:
    """Outcome of the prefix-integral conservation check."""

    passed: bool
    boundaries: tuple[int, ...]
    violations: tuple[int, ...]
    max_residual: float


def prefix_integral_check(ws: WeightedSequence, fit: AntitonicFit) -> PrefixCheckReport:
    """Verify conservation of weighted prefix integrals at block boundaries.

    At every index where the fitted sequence strictly decreases, and at the
    full length, the fitted and raw weighted prefix sums must agree within
    ``PREFIX_TOL`` relative to the total weighted magnitude.
    """
    w = ws.weights
    fitted = fit.fitted
    n = ws.size
    lhs = np.cumsum(w * fitted)
    rhs = np.cumsum(w * ws.values)
    scale = max(1.0, float(np.dot(w, np.abs(ws.values))))
    boundaries = [k for k in range(n - 1) if fitted[k] > fitted[k + 1]]
    boundaries.append(n - 1)
    residuals = np.abs(lhs[boundaries] - rhs[boundaries])
    bad = [int(boundaries[i]) for i in np.nonzero(residuals > PREFIX_TOL * scale)[0]]
    return PrefixCheckReport(
        passed=not bad,
        boundaries=tuple(int(b) for b in boundaries),
        violations=tuple(bad),
        max_residual=float(residuals.max()) if len(residuals) else 0.0,
    )


@dataclass(frozen=True)
class KktReport:
    """Dual feasibility and complementary slackness of a fit."""

    dual_feasible: bool
    slack_complementary: bool
    min_multiplier: float
    max_boundary_multiplier: float

    @property
    def passed(self) -> bool:
        return self.dual_feasible and self.slack_complementary


def check_kkt(ws: WeightedSequence, fit: AntitonicFit) -> KktReport:
    """Certify a fit: multipliers nonnegative, and zero at strict decreases."""
    lam = _multipliers(ws, fit.fitted)
    scale = max(1.0, float(np.dot(ws.weights, np.abs(ws.values))))
    n = ws.size
    boundary = [k for k in range(n - 1) if fit.fitted[k] > fit.fitted[k + 1]]
    boundary.append(n - 1)
    boundary_lam = np.abs(lam[boundary])
    return KktReport(
        dual_feasible=bool(np.min(lam) >= -DUAL_TOL * scale),
        slack_complementary=bool(np.max(boundary_lam) <= DUAL_TOL * scale),
        min_multiplier=float(np.min(lam)),
        max_boundary_multiplier=float(np.max(boundary_lam)),
    )


def check_monotone_pair(a: WeightedSequence, b: WeightedSequence) -> bool:
    """True when pointwise dominated inputs project to dominated fits.

    Both sequences must share the same weights; raises ``ValueError``
    otherwise.  Comparison allows an absolute slack of ``DUAL_TOL``.
    """
    if a.weights.shape != b.weights.shape or not np.array_equal(a.weights, b.weights):
        raise ValueError("sequences must share identical weights")
    fa = project_antitonic(a).fitted
    fb = project_antitonic(b).fitted
    return bool(np.all(fa <= fb + DUAL_TOL))
