"""Randomized self-checks over seeded distribution pairs.

Pairs are drawn from Philox streams, so every reported violation names a
pair that can be reproduced from the seed alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import DiscreteDistribution, distribution_to_json, make_distribution
from .divergence import (
    IDENTITY_TOL,
    INEQUALITY_SLACK,
    check_inequalities,
    check_universal_lower_bound,
    divergence,
    divergence_over_rays,
    projected_measure,
    rearrangement_pair,
)
from .generators import affine_shift, generator_catalogue, get_generator
from .rays import certify_ks_identity
from .simulation import trial_rng


def random_distribution(
    rng,
    max_atoms: int,
    min_atoms: int = 2,
    atoms: np.ndarray | None = None,
    subset_of: np.ndarray | None = None,
) -> DiscreteDistribution:
    """Random distribution on integer-ish atoms with Dirichlet-flat weights."""
    if atoms is None:
        if subset_of is not None:
            k = int(rng.integers(1, subset_of.size + 1))
            chosen = np.sort(rng.choice(subset_of, size=k, replace=False))
        else:
            n = int(rng.integers(min_atoms, max_atoms + 1))
            chosen = np.sort(rng.choice(np.arange(4 * max_atoms), size=n, replace=False))
        atoms = np.asarray(chosen, dtype=np.float64)
    weights = rng.dirichlet(np.ones(atoms.size))
    # keep weights strictly positive after float rounding
    weights = weights + 1e-9
    return make_distribution(atoms, weights)


def random_pair(
    rng,
    max_atoms: int,
    mutual: bool = True,
) -> tuple[DiscreteDistribution, DiscreteDistribution]:
    """A pair (mu, nu) with supp(mu) inside supp(nu); equal supports if mutual."""
    nu = random_distribution(rng, max_atoms)
    if mutual:
        mu = random_distribution(rng, max_atoms, atoms=nu.atoms)
    else:
        mu = random_distribution(rng, max_atoms, subset_of=nu.atoms)
    return mu, nu


def values_match(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol


@dataclass(frozen=True)
class FuzzViolation:
    check: str
    detail: str
    pair_index: int
    mu_json: str
    nu_json: str


@dataclass(frozen=True)
class FuzzReport:
    pairs: int
    checks_run: int
    violations: tuple[FuzzViolation, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def run_property_fuzz(
    pairs: int,
    max_atoms: int = 20,
    seed: int = 0,
    slack: float = INEQUALITY_SLACK,
) -> FuzzReport:
    """Exercise the main identities and inequalities on random pairs.

    Per pair: the inequality web, the symmetrized-generator lower bound,
    the tv/ray-supremum identity, boundedness of ray-restricted values,
    affine invariance of the fitted divergence, and both transport
    identities (projected measure, decreasing rearrangement).
    """
    catalogue = generator_catalogue()
    violations: list[FuzzViolation] = []
    checks_run = 0

    def record(check, detail, idx, mu, nu):
        violations.append(
            FuzzViolation(check, detail, idx, distribution_to_json(mu), distribution_to_json(nu))
        )

    for idx in range(pairs):
        rng = trial_rng(seed, idx)
        mu, nu = random_pair(rng, max_atoms, mutual=True)

        report = check_inequalities(mu, nu, slack=slack)
        checks_run += len(report.entries)
        for entry in report.failures():
            record(
                "inequality",
                f"{entry.family}: {entry.label}: lhs={entry.lhs!r} rhs={entry.rhs!r}",
                idx, mu, nu,
            )

        ks = certify_ks_identity(mu, nu)
        checks_run += 1
        if not ks.passed:
            record("ks_identity", f"residual={ks.residual!r}", idx, mu, nu)

        zeta = projected_measure(mu, nu)
        pair2 = rearrangement_pair(mu, nu)
        for name, gen in catalogue.items():
            checks_run += 4
            if not check_universal_lower_bound(gen, mu, nu, slack=slack):
                record("lower_bound", f"generator={name}", idx, mu, nu)
            plain = divergence(gen, mu, nu).value
            rays = divergence_over_rays(gen, mu, nu).value
            if not (rays <= plain + slack):
                record("boundedness", f"generator={name} rays={rays!r} plain={plain!r}",
                       idx, mu, nu)
            if not values_match(divergence(gen, zeta, nu).value, rays, IDENTITY_TOL):
                record("transport_projected", f"generator={name}", idx, mu, nu)
            if not values_match(
                divergence_over_rays(gen, pair2.eta, pair2.tau).value, plain, IDENTITY_TOL
            ):
                record("transport_rearranged", f"generator={name}", idx, mu, nu)

        shifted = affine_shift(get_generator("kl"), 0.75)
        checks_run += 1
        if not values_match(
            divergence_over_rays(shifted, mu, nu).value,
            divergence_over_rays("kl", mu, nu).value,
            IDENTITY_TOL,
        ):
            record("affine_invariance", "generator=kl shift=0.75", idx, mu, nu)

    return FuzzReport(pairs, checks_run, tuple(violations))
