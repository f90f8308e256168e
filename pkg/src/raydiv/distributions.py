"""Finite discrete probability measures on the real line.

Distributions are stored in canonical form: atoms strictly increasing,
weights positive and summing to one.  All downstream machinery (likelihood
ratios, antitonic projections, ray statistics) relies on that ordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

# Absolute tolerance for "weights sum to one".
WEIGHT_SUM_TOL = 1e-12


class AbsoluteContinuityViolated(ValueError):
    """Mass found on an atom where the reference measure carries none."""


class DistributionParseError(ValueError):
    """A distribution or sample file could not be parsed."""


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probability measure with finitely many atoms.

    Attributes
    ----------
    atoms : ndarray
        Strictly increasing atom locations.
    weights : ndarray
        Positive weights, summing to one within ``WEIGHT_SUM_TOL``.
    """

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.ascontiguousarray(self.atoms, dtype=np.float64)
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if atoms.ndim != 1 or weights.ndim != 1:
            raise ValueError("atoms and weights must be one-dimensional")
        if atoms.shape != weights.shape:
            raise ValueError("atoms and weights must have equal length")
        if atoms.size == 0:
            raise ValueError("a distribution needs at least one atom")
        if not np.all(np.isfinite(atoms)):
            raise ValueError("atoms must be finite")
        if not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite")
        if atoms.size > 1 and not np.all(np.diff(atoms) > 0):
            raise ValueError("atoms must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("weights must be strictly positive")
        if abs(float(weights.sum()) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError("weights must sum to one")
        atoms.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return int(self.atoms.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return (
            self.atoms.shape == other.atoms.shape
            and bool(np.all(self.atoms == other.atoms))
            and bool(np.all(self.weights == other.weights))
        )

    def __hash__(self):
        return hash((self.atoms.tobytes(), self.weights.tobytes()))


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Empirical measure of a finite sample.

    ``base.weights[i]`` equals ``counts[i] / sample_size`` exactly (the
    weights are rational in the sample size, rounded once to float).
    """

    base: DiscreteDistribution
    sample_size: int
    counts: np.ndarray

    def __post_init__(self):
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        if counts.shape != self.base.atoms.shape:
            raise ValueError("counts must align with base atoms")
        if np.any(counts <= 0):
            raise ValueError("counts must be positive")
        if int(counts.sum()) != self.sample_size:
            raise ValueError("counts must sum to the sample size")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)


@dataclass(frozen=True)
class RnDerivative:
    """Radon-Nikodym derivative d(mu)/d(nu) on nu's support.

    ``values[i]`` is the likelihood ratio at nu's i-th atom (zero where mu
    has no mass); ``weights`` are nu's weights.  The weighted sum of the
    values is one.
    """

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if values.shape != weights.shape:
            raise ValueError("values and weights must have equal length")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("derivative values must be finite and nonnegative")
        if abs(float(np.dot(values, weights)) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError("weighted derivative values must sum to one")
        values.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)


def make_distribution(atoms, weights) -> DiscreteDistribution:
    """Canonicalize raw atom/weight arrays into a ``DiscreteDistribution``.

    Sorts by atom, merges duplicate atoms by summing their weights, drops
    zero-weight atoms, and normalizes the total mass to one.  Weights that
    already sum to one within ``WEIGHT_SUM_TOL`` are left untouched, which
    makes the construction idempotent bit-for-bit.

    Raises
    ------
    ValueError
        On negative weights, non-finite entries, length mismatch, or
        all-zero total mass.
    """
    atoms = np.ascontiguousarray(atoms, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if atoms.ndim != 1 or weights.ndim != 1 or atoms.shape != weights.shape:
        raise ValueError("atoms and weights must be 1-d arrays of equal length")
    if atoms.size == 0:
        raise ValueError("a distribution needs at least one atom")
    if not np.all(np.isfinite(atoms)) or not np.all(np.isfinite(weights)):
        raise ValueError("atoms and weights must be finite")
    if np.any(weights < 0):
        raise ValueError("weights must be nonnegative")

    order = np.argsort(atoms, kind="stable")
    atoms = atoms[order]
    weights = weights[order]

    # merge exact duplicates
    if atoms.size > 1 and np.any(atoms[1:] == atoms[:-1]):
        keep = np.concatenate(([True], atoms[1:] != atoms[:-1]))
        idx = np.cumsum(keep) - 1
        merged = np.zeros(int(idx[-1]) + 1, dtype=np.float64)
        np.add.at(merged, idx, weights)
        atoms = atoms[keep]
        weights = merged

    positive = weights > 0
    atoms = atoms[positive]
    weights = weights[positive]
    if atoms.size == 0:
        raise ValueError("total mass is zero")

    total = float(weights.sum())
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        weights = weights / total
        # denormal inputs can underflow to exact zero under division
        positive = weights > 0
        if not np.all(positive):
            atoms = atoms[positive]
            weights = weights[positive]
            if atoms.size == 0:
                raise ValueError("total mass is zero")
            weights = weights / float(weights.sum())
    return DiscreteDistribution(atoms, weights)


def from_samples(samples) -> EmpiricalDistribution:
    """Build the empirical measure of a finite sample of reals."""
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    if samples.ndim != 1 or samples.size == 0:
        raise ValueError("need a nonempty 1-d sample")
    if not np.all(np.isfinite(samples)):
        raise ValueError("samples must be finite")
    atoms, counts = np.unique(samples, return_counts=True)
    n = int(samples.size)
    base = make_distribution(atoms, counts / n)
    return EmpiricalDistribution(base, n, counts)


def rn_derivative(mu: DiscreteDistribution, nu: DiscreteDistribution) -> RnDerivative:
    """Likelihood ratio d(mu)/d(nu), defined when supp(mu) is inside supp(nu).

    Atoms are matched by exact equality.  Raises
    ``AbsoluteContinuityViolated`` naming the first offending atom when mu
    puts mass outside nu's support.
    """
    idx = np.searchsorted(nu.atoms, mu.atoms)
    bad = (idx >= nu.size) | (nu.atoms[np.minimum(idx, nu.size - 1)] != mu.atoms)
    if np.any(bad):
        atom = float(mu.atoms[np.argmax(bad)])
        raise AbsoluteContinuityViolated(
            f"mu has mass {float(mu.weights[np.argmax(bad)]):g} on atom {atom:g}, "
            "which is outside nu's support"
        )
    values = np.zeros(nu.size, dtype=np.float64)
    values[idx] = mu.weights / nu.weights[idx]
    return RnDerivative(values, nu.weights)


def prefix_masses(dist: DiscreteDistribution) -> np.ndarray:
    """Cumulative masses along increasing atoms; the last entry is one."""
    return np.cumsum(dist.weights)


def load_distribution(path) -> DiscreteDistribution:
    """Read a distribution from a JSON file {"atoms": [...], "weights": [...]}."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DistributionParseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(payload, dict) or "atoms" not in payload or "weights" not in payload:
        raise DistributionParseError(f'{path}: expected keys "atoms" and "weights"')
    try:
        return make_distribution(payload["atoms"], payload["weights"])
    except (TypeError, ValueError) as exc:
        raise DistributionParseError(f"{path}: {exc}") from exc


def distribution_to_json(dist: DiscreteDistribution) -> str:
    """Serialize in the same schema ``load_distribution`` reads."""
    return json.dumps(
        {"atoms": [float(a) for a in dist.atoms], "weights": [float(w) for w in dist.weights]}
    )


def load_samples(path) -> np.ndarray:
    """Read a newline-separated sample file (one decimal per line)."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError as exc:
                raise DistributionParseError(
                    f"{path}:{lineno}: not a decimal number: {text!r}"
                ) from exc
    if not values:
        raise DistributionParseError(f"{path}: no samples found")
    return np.asarray(values, dtype=np.float64)
