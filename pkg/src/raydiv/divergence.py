"""f-divergences of discrete pairs, plain and restricted to rays.

The plain divergence is sum_i nu_i f(g_i) with g the likelihood ratio
d(mu)/d(nu).  The ray-restricted variant replaces g by its weighted
antitonic projection along increasing atoms, which collapses everything
the pair disagrees about that is invisible to rays (-inf, x].  Transport
constructions (projected measure, decreasing rearrangement), partition
coarsening, and the classical inequality web between the stock divergences
are provided alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antitonic import AntitonicFit, WeightedSequence, project_antitonic
from .distributions import (
    AbsoluteContinuityViolated,
    DiscreteDistribution,
    make_distribution,
    prefix_masses,
    rn_derivative,
)
from .generators import Generator, get_generator

# additive slack for the inequality web
INEQUALITY_SLACK = 1e-9
# identity-type comparisons (transport, conservation)
IDENTITY_TOL = 1e-10


@dataclass(frozen=True)
class FitDiagnostics:
    """Shape of the antitonic fit behind a ray-restricted value."""

    block_count: int
    conservation_residual: float


@dataclass(frozen=True)
class DivergenceResult:
    value: float
    generator: str
    direction: tuple[str, str]
    over_rays: bool
    fit_diagnostics: FitDiagnostics | None = None

    def __post_init__(self):
        if math.isnan(self.value):
            raise ValueError("divergence value cannot be NaN")
        if self.value < -1e-12:
            raise ValueError("divergence value must be nonnegative")


def _weighted_generator_sum(gen: Generator, values: np.ndarray, weights: np.ndarray) -> float:
    terms = gen(values)
    if np.any(np.isinf(terms)):
        return math.inf
    return float(np.dot(weights, terms))


def divergence(
    gen: Generator | str,
    mu: DiscreteDistribution,
    nu: DiscreteDistribution,
    direction: tuple[str, str] = ("mu", "nu"),
) -> DivergenceResult:
    """Plain f-divergence of mu against nu; requires supp(mu) in supp(nu).

    A generator with f(0+) = +inf evaluated where mu has no mass yields a
    value of float infinity, not an error.
    """
    if isinstance(gen, str):
        gen = get_generator(gen)
    g = rn_derivative(mu, nu)
    value = _weighted_generator_sum(gen, g.values, g.weights)
    return DivergenceResult(value, gen.name, direction, over_rays=False)


def divergence_over_rays(
    gen: Generator | str,
    mu: DiscreteDistribution,
    nu: DiscreteDistribution,
    direction: tuple[str, str] = ("mu", "nu"),
) -> DivergenceResult:
    """f-divergence restricted to rays: f evaluated on the antitonic fit."""
    if isinstance(gen, str):
        gen = get_generator(gen)
    g = rn_derivative(mu, nu)
    fit = project_antitonic(WeightedSequence(g.values, g.weights))
    value = _weighted_generator_sum(gen, fit.fitted, g.weights)
    residual = abs(float(np.dot(g.weights, fit.fitted)) - 1.0)
    return DivergenceResult(
        value,
        gen.name,
        direction,
        over_rays=True,
        fit_diagnostics=FitDiagnostics(fit.block_count, residual),
    )


def symmetrized_over_rays(
    gen: Generator | str,
    mu: DiscreteDistribution,
    nu: DiscreteDistribution,
) -> DivergenceResult:
    """max of the two ray-restricted orientations; needs mutual continuity."""
    forward = divergence_over_rays(gen, mu, nu)
    backward = divergence_over_rays(gen, nu, mu, direction=("nu", "mu"))
    value = max(forward.value, backward.value)
    return DivergenceResult(value, forward.generator, ("mu", "nu"), over_rays=True)


def projected_measure(mu: DiscreteDistribution, nu: DiscreteDistribution) -> DiscreteDistribution:
    """The measure with density (antitonic fit of d(mu)/d(nu)) against nu.

    Carries every ray-restricted divergence of (mu, nu) as its plain
    divergence against nu.
    """
    g = rn_derivative(mu, nu)
    fit = project_antitonic(WeightedSequence(g.values, g.weights))
    return make_distribution(nu.atoms, nu.weights * fit.fitted)


@dataclass(frozen=True)
class RearrangementPair:
    """Relabelling of a pair onto integer atoms making the ratio antitonic.

    ``permutation[k]`` is the index into nu's atoms that was mapped to the
    integer atom k+1.
    """

    eta: DiscreteDistribution
    tau: DiscreteDistribution
    permutation: np.ndarray


def rearrangement_pair(mu: DiscreteDistribution, nu: DiscreteDistribution) -> RearrangementPair:
    """Sort atoms by decreasing likelihood ratio onto the atoms 1..n.

    The sort is stable (ties keep original atom order), so a pair whose
    ratio is already nonincreasing comes back with the identity
    permutation.  The plain divergence of (mu, nu) equals every generator's
    ray-restricted divergence of the rearranged pair.
    """
    g = rn_derivative(mu, nu)
    order = np.argsort(-g.values, kind="stable")
    positions = np.arange(1, nu.size + 1, dtype=np.float64)
    tau = make_distribution(positions, nu.weights[order])
    eta_weights = g.values[order] * nu.weights[order]
    eta = make_distribution(positions, eta_weights)
    return RearrangementPair(eta, tau, order)


def partition_divergence(
    gen: Generator | str,
    mu: DiscreteDistribution,
    nu: DiscreteDistribution,
    edges,
) -> DivergenceResult:
    """Divergence of the pair coarsened to consecutive bins.

    ``edges`` is a strictly increasing sequence of at least two bin
    boundaries; bin j is [edges[j], edges[j+1]), the last bin closed on the
    right.  Every atom of both measures must fall inside a bin.  Mass in a
    bin where nu has none raises ``AbsoluteContinuityViolated``.
    """
    if isinstance(gen, str):
        gen = get_generator(gen)
    edges = np.ascontiguousarray(edges, dtype=np.float64)
    if edges.ndim != 1 or edges.size < 2:
        raise ValueError("need at least two edges to form a bin")
    if not np.all(np.isfinite(edges)) or not np.all(np.diff(edges) > 0):
        raise ValueError("edges must be finite and strictly increasing")

    def coarsen(dist: DiscreteDistribution) -> np.ndarray:
        idx = np.searchsorted(edges, dist.atoms, side="right") - 1
        # atoms exactly at the last edge belong to the last bin
        idx[dist.atoms == edges[-1]] = edges.size - 2
        if np.any(idx < 0) or np.any(idx > edges.size - 2):
            atom = float(dist.atoms[(idx < 0) | (idx > edges.size - 2)][0])
            raise ValueError(f"atom {atom:g} is outside the binning")
        masses = np.zeros(edges.size - 1, dtype=np.float64)
        np.add.at(masses, idx, dist.weights)
        # cancel accumulated rounding so a lone bin carries exactly unit mass
        return masses / masses.sum()

    mu_mass = coarsen(mu)
    nu_mass = coarsen(nu)
    orphan = (mu_mass > 0) & (nu_mass == 0)
    if np.any(orphan):
        j = int(np.argmax(orphan))
        raise AbsoluteContinuityViolated(
            f"mu has mass {mu_mass[j]:g} in bin [{edges[j]:g}, {edges[j + 1]:g}) "
            "where nu has none"
        )
    bins = np.arange(edges.size - 1, dtype=np.float64)
    keep_mu = mu_mass > 0
    coarse_mu = make_distribution(bins[keep_mu], mu_mass[keep_mu])
    keep_nu = nu_mass > 0
    coarse_nu = make_distribution(bins[keep_nu], nu_mass[keep_nu])
    inner = divergence(gen, coarse_mu, coarse_nu)
    return DivergenceResult(inner.value, gen.name, ("mu", "nu"), over_rays=False)


@dataclass(frozen=True)
class InequalityEntry:
    family: str
    label: str
    lhs: float
    rhs: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class InequalityReport:
    entries: tuple[InequalityEntry, ...]
    passed: bool

    def failures(self) -> tuple[InequalityEntry, ...]:
        return tuple(e for e in self.entries if not e.passed)


def _reference_floor_constant(nu_min: float) -> float:
    # log(1/x - 1) / (1 - 2x), extended by continuity to 2 at x = 1/2 and
    # to +inf for a single-atom reference
    if nu_min >= 1.0:
        return math.inf
    if abs(1.0 - 2.0 * nu_min) < 1e-9:
        return 2.0
    return math.log(1.0 / nu_min - 1.0) / (1.0 - 2.0 * nu_min)


def tv_chi2_envelope(t: float) -> float:
    """Tightest lower envelope of chi-square given total variation t."""
    if t < 0 or t > 1:
        raise ValueError("total variation lies in [0, 1]")
    if t <= 0.5:
        return 4.0 * t * t
    if t == 1.0:
        return math.inf
    return t / (1.0 - t)


def check_inequalities(
    mu: DiscreteDistribution,
    nu: DiscreteDistribution,
    slack: float = INEQUALITY_SLACK,
) -> InequalityReport:
    """Evaluate the classical divergence inequalities on ray-restricted values.

    All seven stock divergences are computed in the direction (mu, nu) over
    rays, and every family is checked with the given additive slack.  The
    two bounds involving the reference floor use nu's smallest weight.  The
    Hellinger distance means the square root of the hellinger2 value.
    """
    T = divergence_over_rays("tv", mu, nu).value
    K = divergence_over_rays("kl", mu, nu).value
    C = divergence_over_rays("chi2", mu, nu).value
    H2 = divergence_over_rays("hellinger2", mu, nu).value
    LC = divergence_over_rays("le_cam", mu, nu).value
    JS = divergence_over_rays("jensen_shannon", mu, nu).value
    H = math.sqrt(H2)
    nu_min = float(np.min(nu.weights))

    vajda_lhs = (
        math.log((1.0 + T) / (1.0 - T)) - 2.0 * T / (1.0 + T) if T < 1.0 else math.inf
    )
    bc = max(1.0 - H2 / 2.0, 0.0)
    neg_log_bc2 = 2.0 * math.log(2.0 / (2.0 - H2)) if H2 < 2.0 else math.inf
    floor_const = _reference_floor_constant(nu_min)
    d2_rhs = math.inf if math.isinf(floor_const) else floor_const * (1.0 - bc * bc)

    checks = [
        ("a", "hellinger2/2 <= tv", H2 / 2.0, T),
        ("a", "tv <= hl*sqrt(1 - hellinger2/4)", T, H * math.sqrt(1.0 - H2 / 4.0)),
        ("a", "hl*sqrt(1 - hellinger2/4) <= 1", H * math.sqrt(1.0 - H2 / 4.0), 1.0),
        ("a", "tv <= sqrt(-2*log(1 - hellinger2/2))", T, math.sqrt(neg_log_bc2)),
        ("b", "tv^2 <= kl/2", T * T, K / 2.0),
        ("b", "log((1+tv)/(1-tv)) - 2*tv/(1+tv) <= kl", vajda_lhs, K),
        ("b", "kl <= log(1 + 2*tv^2/nu_min)", K, math.log1p(2.0 * T * T / nu_min)),
        ("b", "log(1 + 2*tv^2/nu_min) <= 2*tv^2/nu_min",
         math.log1p(2.0 * T * T / nu_min), 2.0 * T * T / nu_min),
        ("c", "tv^2 <= chi2/4", T * T, C / 4.0),
        ("c", "tv <= max(1/2, chi2/(1+chi2))", T, max(0.5, C / (1.0 + C))),
        ("c", "4*tv^2 <= envelope(tv)", 4.0 * T * T, tv_chi2_envelope(min(T, 1.0))),
        ("c", "envelope(tv) <= chi2", tv_chi2_envelope(min(T, 1.0)), C),
        ("d", "hellinger2 <= -2*log(1 - hellinger2/2)", H2, neg_log_bc2),
        ("d", "-2*log(1 - hellinger2/2) <= kl", neg_log_bc2, K),
        ("d", "kl <= floor_const*(1 - (1 - hellinger2/2)^2)", K, d2_rhs),
        ("e", "kl <= log(1 + chi2)", K, math.log1p(C)),
        ("e", "log(1 + chi2) <= chi2", math.log1p(C), C),
        ("f", "hellinger2/2 <= le_cam", H2 / 2.0, LC),
        ("f", "le_cam <= hellinger2", LC, H2),
        ("g", "le_cam <= jensen_shannon", LC, JS),
        ("g", "jensen_shannon <= 2*log(2)*le_cam", JS, 2.0 * math.log(2.0) * LC),
    ]
    entries = tuple(
        InequalityEntry(family, label, float(lhs), float(rhs), bool(lhs <= rhs + slack))
        for family, label, lhs, rhs in checks
    )
    return InequalityReport(entries, all(e.passed for e in entries))


def check_universal_lower_bound(
    gen: Generator | str,
    mu: DiscreteDistribution,
    nu: DiscreteDistribution,
    slack: float = INEQUALITY_SLACK,
) -> bool:
    """f(1+t) + f(1-t) at t = tv-over-rays never exceeds the f-value over rays."""
    if isinstance(gen, str):
        gen = get_generator(gen)
    tv_value = divergence_over_rays("tv", mu, nu).value
    f_value = divergence_over_rays(gen, mu, nu).value
    bound = gen.symmetrized(min(tv_value, 1.0))
    if math.isinf(f_value):
        return True
    return bool(bound <= f_value + slack)
