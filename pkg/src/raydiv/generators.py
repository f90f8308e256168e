"""Convex generators for f-divergences.

A generator is convex on [0, inf) with f(1) = 0 and strict convexity at 1.
Values at t = 0 follow the right-limit convention; Jeffreys is the one
catalogue entry with f(0+) = +inf, and evaluating it at an exact zero
yields float infinity rather than an error.  Logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable

import numpy as np
from scipy.special import xlogy


@dataclass(frozen=True)
class Generator:
    """Convex divergence generator, callable on scalars or arrays."""

    name: str
    fn: Callable = field(repr=False)
    value_at_zero: float

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        if np.any(t < 0):
            raise ValueError(f"generator {self.name} is defined on [0, inf)")
        out = self.fn(t)
        return float(out) if out.ndim == 0 else out

    def symmetrized(self, x):
        """f(1+x) + f(1-x) for x in [0, 1]; the universal lower-bound map."""
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < 0) or np.any(x > 1):
            raise ValueError("symmetrized generator is defined on [0, 1]")
        out = self.fn(1.0 + x) + self.fn(1.0 - x)
        return float(out) if out.ndim == 0 else out


def _tv(t):
    return np.abs(t - 1.0) / 2.0


def _kl(t):
    return xlogy(t, t)


def _hellinger2(t):
    return (np.sqrt(t) - 1.0) ** 2


def _chi2(t):
    return (t - 1.0) ** 2


def _le_cam(t):
    return (1.0 - t) ** 2 / (2.0 * (1.0 + t))


def _jensen_shannon(t):
    return xlogy(t, 2.0 * t / (1.0 + t)) + np.log(2.0 / (1.0 + t))


def _jeffreys(t):
    t = np.asarray(t, dtype=np.float64)
    return np.where(t > 0, (t - 1.0) * np.log(np.where(t > 0, t, 1.0)), np.inf)


_CATALOGUE = MappingProxyType(
    {
        "tv": Generator("tv", _tv, 0.5),
        "kl": Generator("kl", _kl, 0.0),
        "hellinger2": Generator("hellinger2", _hellinger2, 1.0),
        "chi2": Generator("chi2", _chi2, 1.0),
        "le_cam": Generator("le_cam", _le_cam, 0.5),
        "jensen_shannon": Generator("jensen_shannon", _jensen_shannon, math.log(2.0)),
        "jeffreys": Generator("jeffreys", _jeffreys, math.inf),
    }
)


def generator_catalogue():
    """Read-only name -> Generator mapping of the seven stock generators."""
    return _CATALOGUE


def get_generator(name: str) -> Generator:
    try:
        return _CATALOGUE[name]
    except KeyError:
        known = ", ".join(sorted(_CATALOGUE))
        raise KeyError(f"unknown generator {name!r}; known generators: {known}") from None


def affine_shift(gen: Generator, c: float) -> Generator:
    """g(t) = f(t) + c (t - 1); generates the same divergence as f."""
    def fn(t, _f=gen.fn, _c=float(c)):
        return _f(t) + _c * (t - 1.0)

    return Generator(f"{gen.name}{c:+g}*(t-1)", fn, gen.value_at_zero - float(c))


def linear_combination(a: float, f: Generator, b: float, g: Generator) -> Generator:
    """a*f + b*g for nonnegative coefficients (stays a generator when a+b > 0)."""
    if a < 0 or b < 0:
        raise ValueError("coefficients must be nonnegative")
    def fn(t, _f=f.fn, _g=g.fn, _a=float(a), _b=float(b)):
        return _a * _f(t) + _b * _g(t)

    return Generator(
        f"{a:g}*{f.name}+{b:g}*{g.name}", fn, a * f.value_at_zero + b * g.value_at_zero
    )
