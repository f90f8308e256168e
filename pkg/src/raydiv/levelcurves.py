"""Divergence surfaces over the simplex of three-atom distributions.

The first measure ranges over mu = (x, y, 1-x-y) on an N x N lattice with
x = i/(N-1), y = j/(N-1); only interior nodes (all three coordinates
positive, decided on the integer lattice) are evaluated.  For each
generator the grid is produced plain and over rays, in both orientations
against the fixed reference.  The delimited grid is the normative output;
contour figures are rendered from the same grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import DiscreteDistribution, make_distribution, rn_derivative
from .antitonic import WeightedSequence, project_antitonic
from .divergence import _weighted_generator_sum
from .generators import get_generator

CONTOUR_LEVELS = 40

MODES = ("plain", "rays")
ORIENTATIONS = ("forward", "reverse")


@dataclass(frozen=True)
class LevelGrid:
    """One divergence surface; ``values[i, j]`` is NaN off the interior."""

    generator: str
    mode: str
    orientation: str
    resolution: int
    coords: np.ndarray
    values: np.ndarray

    @property
    def key(self) -> str:
        return f"{self.generator}_{self.mode}_{self.orientation}"


def compute_level_grids(
    nu: DiscreteDistribution,
    resolution: int,
    generator_names=("tv", "hellinger2"),
) -> dict[str, LevelGrid]:
    """Evaluate all (generator, mode, orientation) surfaces on one lattice.

    The reference must have exactly three atoms.  Each interior node is
    visited once; both orientations' likelihood ratios and antitonic fits
    are shared across generators.
    """
    if nu.size != 3:
        raise ValueError("level curves need a reference with exactly three atoms")
    if resolution < 3:
        raise ValueError("grid resolution must be at least 3")
    gens = [get_generator(name) for name in generator_names]
    coords = np.arange(resolution, dtype=np.float64) / (resolution - 1)
    grids = {
        (g.name, mode, orientation): np.full((resolution, resolution), np.nan)
        for g in gens
        for mode in MODES
        for orientation in ORIENTATIONS
    }
    denom = resolution - 1
    for i in range(1, resolution - 1):
        for j in range(1, resolution - 1):
            k = denom - i - j
            if k < 1:
                continue
            mu = make_distribution(nu.atoms, np.array([i, j, k], dtype=np.float64) / denom)
            for orientation, (first, second) in (
                ("forward", (mu, nu)),
                ("reverse", (nu, mu)),
            ):
                ratio = rn_derivative(first, second)
                fit = project_antitonic(WeightedSequence(ratio.values, ratio.weights))
                for g in gens:
                    grids[(g.name, "plain", orientation)][i, j] = _weighted_generator_sum(
                        g, ratio.values, ratio.weights
                    )
                    grids[(g.name, "rays", orientation)][i, j] = _weighted_generator_sum(
                        g, fit.fitted, ratio.weights
                    )
    out = {}
    for (name, mode, orientation), values in grids.items():
        grid = LevelGrid(name, mode, orientation, resolution, coords, values)
        out[grid.key] = grid
    return out


def grid_csv_lines(grid: LevelGrid, header_lines=()) -> list[str]:
    """Long-form rows x,y,value over the full lattice; empty off-interior."""
    from .simulation import format_float

    lines = list(header_lines)
    lines.append("x,y,value")
    for i in range(grid.resolution):
        x = format_float(grid.coords[i])
        for j in range(grid.resolution):
            v = grid.values[i, j]
            rendered = "" if np.isnan(v) else format_float(v)
            lines.append(f"{x},{format_float(grid.coords[j])},{rendered}")
    return lines


def grid_json_payload(grid: LevelGrid) -> dict:
    return {
        "generator": grid.generator,
        "mode": grid.mode,
        "orientation": grid.orientation,
        "resolution": grid.resolution,
        "coords": [float(c) for c in grid.coords],
        "values": [
            [None if np.isnan(v) else float(v) for v in row] for row in grid.values
        ],
    }


def render_contours(grid: LevelGrid, path) -> None:
    """Draw the surface's level curves to an SVG (or other figure) file.

    Uses evenly spaced levels between the finite minimum and maximum; the
    figure is rendered deterministically (fixed hash salt, no timestamp).
    """
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    finite = grid.values[np.isfinite(grid.values)]
    if finite.size == 0:
        raise ValueError("grid has no finite values to contour")
    low, high = float(finite.min()), float(finite.max())
    if high <= low:
        high = low + 1.0
    levels = np.linspace(low, high, CONTOUR_LEVELS)

    with plt.rc_context({"svg.hashsalt": "raydiv"}):
        fig, ax = plt.subplots(figsize=(5.0, 4.2))
        masked = np.ma.masked_invalid(grid.values.T)
        cs = ax.contour(grid.coords, grid.coords, masked, levels=levels, linewidths=0.7)
        ax.plot([0, 1, 0, 0], [0, 0, 1, 0], color="black", linewidth=0.8)
        ax.set_xlabel("mass at first atom")
        ax.set_ylabel("mass at second atom")
        ax.set_title(f"{grid.generator} {grid.mode} {grid.orientation}")
        ax.set_aspect("equal")
        fig.colorbar(cs, ax=ax)
        metadata = {"Date": None} if str(path).endswith(".svg") else None
        fig.savefig(path, metadata=metadata)
        plt.close(fig)
