"""Empirical convergence harness.

Samples i.i.d. atoms from a target distribution, builds the empirical
measure, and tracks divergences between the empirical and true measure in
both orientations.  The reverse orientation (true against empirical) is
undefined until the sample has covered every atom of the target.

Randomness comes from the counter-based Philox generator; the stream for
trial t of a sweep with seed s is keyed by the 128-bit value (s << 64) | t,
so any (size, trial) cell can be recomputed independently and the whole
trace is reproducible bit for bit.  The family name is recorded in output
headers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import (
    DiscreteDistribution,
    EmpiricalDistribution,
    from_samples,
    prefix_masses,
)
from .divergence import divergence_over_rays
from .generators import get_generator

RNG_FAMILY = "philox4x64"

STAT_KINDS = ("median", "mean", "max")
SERIES = ("forward", "reverse", "symmetrized")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Philox stream for one trial, keyed by (seed, trial)."""
    if seed < 0 or trial < 0:
        raise ValueError("seed and trial index must be nonnegative")
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) | int(trial)))


def sample_atoms(target: DiscreteDistribution, uniforms) -> np.ndarray:
    """Map uniform draws through the inverse CDF of the target.

    A draw u lands on the first atom whose prefix mass exceeds u.
    """
    uniforms = np.asarray(uniforms, dtype=np.float64)
    prefix = prefix_masses(target)
    idx = np.searchsorted(prefix, uniforms, side="right")
    idx = np.minimum(idx, target.size - 1)
    return target.atoms[idx]


def empirical_measure(target: DiscreteDistribution, uniforms) -> EmpiricalDistribution:
    return from_samples(sample_atoms(target, uniforms))


@dataclass(frozen=True)
class TrialValues:
    """Divergences of one empirical measure against its target.

    ``reverse`` and ``symmetrized`` are None when the sample missed part of
    the target support.
    """

    forward: float
    reverse: float | None
    symmetrized: float | None


def run_trial(
    target: DiscreteDistribution,
    n: int,
    rng,
    generators=("tv",),
) -> dict[str, TrialValues]:
    """Draw n atoms and evaluate the requested generators over rays."""
    if n < 1:
        raise ValueError("sample size must be positive")
    empirical = empirical_measure(target, rng.random(n)).base
    covered = empirical.size == target.size
    out = {}
    for name in generators:
        gen = get_generator(name)
        forward = divergence_over_rays(gen, empirical, target).value
        if covered:
            reverse = divergence_over_rays(gen, target, empirical).value
            out[name] = TrialValues(forward, reverse, max(forward, reverse))
        else:
            out[name] = TrialValues(forward, None, None)
    return out


def coverage_time(target: DiscreteDistribution, rng) -> int:
    """Number of draws until every atom of the target has appeared."""
    prefix = prefix_masses(target)
    seen = np.zeros(target.size, dtype=bool)
    draws = 0
    while not seen.all():
        u = rng.random()
        idx = min(int(np.searchsorted(prefix, u, side="right")), target.size - 1)
        seen[idx] = True
        draws += 1
    return draws


@dataclass(frozen=True)
class GcConfig:
    """Sweep description: target, sizes, trials per size, generators, seed."""

    target: DiscreteDistribution
    sample_sizes: tuple[int, ...]
    trials: int
    generators: tuple[str, ...]
    seed: int

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sample_sizes)
        if not sizes or any(n < 1 for n in sizes):
            raise ValueError("sample sizes must be positive")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("sample sizes must be strictly increasing")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        gens = tuple(str(g) for g in self.generators)
        if not gens:
            raise ValueError("need at least one generator")
        for g in gens:
            get_generator(g)
        object.__setattr__(self, "sample_sizes", sizes)
        object.__setattr__(self, "generators", gens)


@dataclass(frozen=True)
class GcCell:
    """Aggregates for one (generator, sample size) pair."""

    stats: dict[str, float | None]
    reverse_defined_fraction: float


@dataclass(frozen=True)
class GcTrace:
    config: GcConfig
    cells: dict[tuple[str, int], GcCell] = field(repr=False)

    def stat(self, generator: str, n: int, name: str) -> float | None:
        return self.cells[(generator, n)].stats[name]


def _aggregate(values: list[float]) -> dict[str, float]:
    arr = np.asarray(values, dtype=np.float64)
    return {
        "median": float(np.median(arr)),
        "mean": float(np.mean(arr)),
        "max": float(np.max(arr)),
    }


def run_sweep(config: GcConfig) -> GcTrace:
    """Run every (size, trial) cell of the sweep and aggregate.

    Trial t always uses the stream keyed by (seed, t), whatever the sample
    size, so results do not depend on evaluation order.
    """
    cells: dict[tuple[str, int], GcCell] = {}
    for n in config.sample_sizes:
        per_gen: dict[str, dict[str, list[float]]] = {
            g: {series: [] for series in SERIES} for g in config.generators
        }
        defined = 0
        for t in range(config.trials):
            rng = trial_rng(config.seed, t)
            values = run_trial(config.target, n, rng, config.generators)
            any_defined = False
            for g in config.generators:
                tv = values[g]
                per_gen[g]["forward"].append(tv.forward)
                if tv.reverse is not None:
                    per_gen[g]["reverse"].append(tv.reverse)
                    per_gen[g]["symmetrized"].append(tv.symmetrized)
                    any_defined = True
            if any_defined:
                defined += 1
        fraction = defined / config.trials
        for g in config.generators:
            stats: dict[str, float | None] = {}
            for series in SERIES:
                collected = per_gen[g][series]
                if collected:
                    for kind, value in _aggregate(collected).items():
                        stats[f"{series}_{kind}"] = value
                else:
                    for kind in STAT_KINDS:
                        stats[f"{series}_{kind}"] = None
            cells[(g, n)] = GcCell(stats, fraction)
    return GcTrace(config, cells)


def trace_rows(trace: GcTrace):
    """Rows of the delimited trace: generator, n, stat, value, coverage."""
    for g in trace.config.generators:
        for n in trace.config.sample_sizes:
            cell = trace.cells[(g, n)]
            for series in SERIES:
                for kind in STAT_KINDS:
                    yield (
                        g,
                        n,
                        f"{series}_{kind}",
                        cell.stats[f"{series}_{kind}"],
                        cell.reverse_defined_fraction,
                    )


def format_float(x: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    return f"{x:.17g}"


def write_trace_csv(trace: GcTrace, path, header_lines=()) -> None:
    """Write the sweep trace; floats carry 17 significant digits."""
    lines = list(header_lines)
    lines.append("generator,n,stat,value,reverse_defined_fraction")
    for g, n, stat, value, fraction in trace_rows(trace):
        rendered = "" if value is None else format_float(value)
        lines.append(f"{g},{n},{stat},{rendered},{format_float(fraction)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
