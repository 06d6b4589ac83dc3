"""Fuzzy membership functions and their shape-parameter gradients.

Two families are supported: Gaussian sets, exp(-(x-c)^2 / (2*sigma^2)),
and generalized bell sets, 1 / (1 + |(x-c)/a|^(2b)).  Both are smooth,
symmetric around their center, and strictly positive everywhere, which
is what makes them usable as rule premises in a Sugeno network: every
rule keeps a (possibly tiny) say for every input.

Instances are immutable values; evaluation is pure and thread-safe.
Constructors accept out-of-range shape parameters (a raw gradient step
may momentarily produce sigma <= 0) but ``value``/``grad`` refuse to
evaluate them; ``clamped`` projects parameters back into their box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from .errors import InvalidInputError

__all__ = ["GaussianMf", "BellMf", "MfKind", "ParamBounds"]


@dataclass(frozen=True)
class ParamBounds:
    """Box constraints applied to membership parameters after a training step.

    Defaults are absolute floors; ``for_input_range`` scales the width floors
    to 1e-4 of the variable's observed range, which keeps the projection
    meaningful regardless of the units the input arrives in.
    """

    sigma_min: float = 1e-4
    half_width_min: float = 1e-4
    slope_min: float = 0.1
    slope_max: float = 20.0

    @classmethod
    def for_input_range(cls, lo: float, hi: float) -> "ParamBounds":
        floor = 1e-4 * (hi - lo)
        return cls(sigma_min=floor, half_width_min=floor)


def _check_x(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("membership input must be finite")
    return arr


def _scalar_or_array(out: np.ndarray, scalar: bool):
    return float(out) if scalar else out


@dataclass(frozen=True)
class GaussianMf:
    """Gaussian set with width ``sigma`` and peak at ``center``."""

    sigma: float
    center: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and math.isfinite(self.center)):
            raise InvalidInputError("Gaussian parameters must be finite")

    n_params = 2
    param_names = ("sigma", "center")

    def _require_valid(self) -> None:
        if self.sigma <= 0:
            raise InvalidInputError(f"sigma must be positive, got {self.sigma}")

    def value(self, x):
        """Membership degree in (0, 1]; exactly 1 at the center."""
        self._require_valid()
        xa = _check_x(x)
        out = np.exp(-((xa - self.center) ** 2) / (2.0 * self.sigma**2))
        return _scalar_or_array(out, xa.ndim == 0)

    def grad(self, x):
        """d(value)/d(sigma, center), stacked along the last axis."""
        self._require_valid()
        xa = _check_x(x)
        d = xa - self.center
        mu = np.exp(-(d**2) / (2.0 * self.sigma**2))
        d_sigma = mu * d**2 / self.sigma**3
        d_center = mu * d / self.sigma**2
        return np.stack([d_sigma, d_center], axis=-1)

    def clamped(self, bounds: ParamBounds) -> "GaussianMf":
        sigma = max(self.sigma, bounds.sigma_min)
        return self if sigma == self.sigma else replace(self, sigma=sigma)

    @property
    def params(self) -> tuple[float, ...]:
        return (self.sigma, self.center)

    def with_params(self, params) -> "GaussianMf":
        sigma, center = (float(p) for p in params)
        return GaussianMf(sigma=sigma, center=center)


@dataclass(frozen=True)
class BellMf:
    """Generalized bell set: value is exactly 1/2 at ``center +- half_width``.

    ``slope`` controls how sharply the shoulders fall off.
    """

    half_width: float
    slope: float
    center: float

    def __post_init__(self) -> None:
        if not all(
            math.isfinite(p) for p in (self.half_width, self.slope, self.center)
        ):
            raise InvalidInputError("bell parameters must be finite")

    n_params = 3
    param_names = ("half_width", "slope", "center")

    def _require_valid(self) -> None:
        if self.half_width <= 0 or self.slope <= 0:
            raise InvalidInputError(
                f"half_width and slope must be positive, got "
                f"({self.half_width}, {self.slope})"
            )

    def _power_term(self, xa: np.ndarray) -> np.ndarray:
        # |u|^(2b) as exp(2b*ln|u|), with the u == 0 branch pinned to 0 so
        # no NaN leaks out of the log.
        u = (xa - self.center) / self.half_width
        au = np.abs(u)
        with np.errstate(divide="ignore", over="ignore"):
            g = np.where(au > 0.0, np.exp(2.0 * self.slope * np.log(au)), 0.0)
        return g

    def value(self, x):
        """Membership degree in (0, 1]; exactly 1 at the center."""
        self._require_valid()
        xa = _check_x(x)
        g = self._power_term(xa)
        out = 1.0 / (1.0 + g)
        return _scalar_or_array(out, xa.ndim == 0)

    def grad(self, x):
        """d(value)/d(half_width, slope, center), stacked along the last axis.

        At x == center the raw formulas are 0/0; the analytic limit of every
        component is 0 and that is what is returned.
        """
        self._require_valid()
        xa = _check_x(x)
        d = xa - self.center
        g = self._power_term(xa)
        mu = 1.0 / (1.0 + g)
        # mu*(1-mu) == g/(1+g)^2 stays finite for g -> inf, so the whole
        # gradient degrades gracefully deep in the tails.
        core = mu * (1.0 - mu)
        nonzero = np.abs(d) > 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            d_width = 2.0 * self.slope * core / self.half_width
            d_slope = np.where(
                nonzero, -2.0 * core * np.log(np.abs(d) / self.half_width), 0.0
            )
            d_center = np.where(nonzero, 2.0 * self.slope * core / d, 0.0)
        return np.stack([d_width, d_slope, d_center], axis=-1)

    def clamped(self, bounds: ParamBounds) -> "BellMf":
        half_width = max(self.half_width, bounds.half_width_min)
        slope = min(max(self.slope, bounds.slope_min), bounds.slope_max)
        if half_width == self.half_width and slope == self.slope:
            return self
        return replace(self, half_width=half_width, slope=slope)

    @property
    def params(self) -> tuple[float, ...]:
        return (self.half_width, self.slope, self.center)

    def with_params(self, params) -> "BellMf":
        half_width, slope, center = (float(p) for p in params)
        return BellMf(half_width=half_width, slope=slope, center=center)


MfKind = Union[GaussianMf, BellMf]
