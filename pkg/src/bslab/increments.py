"""Mean-zero increment families whose variance grows linearly in the
interval length.

Each model describes the distribution of one increment over an interval
[0, h]: analytic mean 0, analytic variance per_unit_variance * h. Models
are centered analytically (not empirically re-centered), so any deviation
a test sees is convergence error, not centering error.

The poisson_jump model is the counterexample family: compensated jumps of
fixed size, whose Lindeberg tail does not vanish as intervals shrink.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .normal import norm_cdf, norm_cdf_inv, norm_pdf
from .rng import poisson_stream, uniform_stream

KINDS = ("two_point", "uniform", "centered_exponential", "normal", "poisson_jump")


@dataclass(frozen=True)
class IncrementModel:
    """A distribution family for triangular-array entries.

    Use the factory classmethods; the constructor checks cross-field
    consistency (poisson_jump carries jump_size/intensity and must satisfy
    per_unit_variance = jump_size^2 * intensity).
    """

    kind: str
    per_unit_variance: float
    jump_size: float | None = None
    intensity: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown increment model kind {self.kind!r}; expected one of {KINDS}")
        if not (self.per_unit_variance > 0.0 and math.isfinite(self.per_unit_variance)):
            raise ValueError(f"per_unit_variance must be positive, got {self.per_unit_variance}")
        if self.kind == "poisson_jump":
            if self.jump_size is None or self.intensity is None:
                raise ValueError("poisson_jump requires jump_size and intensity")
            if self.jump_size <= 0.0 or self.intensity <= 0.0:
                raise ValueError("jump_size and intensity must be positive")
            expected = self.jump_size ** 2 * self.intensity
            if not math.isclose(self.per_unit_variance, expected, rel_tol=1e-12):
                raise ValueError(
                    f"per_unit_variance {self.per_unit_variance} must equal "
                    f"jump_size^2 * intensity = {expected}")
        elif self.jump_size is not None or self.intensity is not None:
            raise ValueError(f"jump parameters only apply to poisson_jump, not {self.kind}")

    # -- factories ---------------------------------------------------------

    @classmethod
    def two_point(cls, variance: float) -> "IncrementModel":
        """+-sqrt(variance*h) with probability 1/2 each."""
        return cls("two_point", variance)

    @classmethod
    def uniform(cls, variance: float) -> "IncrementModel":
        """Uniform on [-a, a] with a = sqrt(3*variance*h)."""
        return cls("uniform", variance)

    @classmethod
    def centered_exponential(cls, variance: float) -> "IncrementModel":
        """sqrt(variance*h) * (Exp(1) - 1): skewed, unbounded to the right."""
        return cls("centered_exponential", variance)

    @classmethod
    def normal(cls, variance: float) -> "IncrementModel":
        """Gaussian increments; the positive control, normal at every scale."""
        return cls("normal", variance)

    @classmethod
    def poisson_jump(cls, jump_size: float, intensity: float) -> "IncrementModel":
        """jump_size * (Poisson(intensity*h) - intensity*h): compensated jumps."""
        return cls("poisson_jump", jump_size ** 2 * intensity,
                   jump_size=jump_size, intensity=intensity)

    # -- analytic moments ---------------------------------------------------

    def variance(self, h: float) -> float:
        """Analytic variance of one increment over [0, h]."""
        if h <= 0.0:
            raise ValueError(f"interval length must be positive, got {h}")
        return self.per_unit_variance * h

    def lindeberg_tail(self, h: float, epsilon: float) -> float | None:
        """E[Z^2; |Z| > epsilon] for one increment Z over [0, h].

        Closed forms exist for two_point, normal and poisson_jump; the other
        kinds return None and callers fall back to Monte Carlo.
        """
        if epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {epsilon}")
        v = self.variance(h)
        s = math.sqrt(v)
        if self.kind == "two_point":
            return v if s > epsilon else 0.0
        if self.kind == "normal":
            c = epsilon / s
            # 2*integral_c^inf z^2 phi(z) dz = 2*(c*phi(c) + 1 - N(c))
            return v * 2.0 * (c * norm_pdf(c) + norm_cdf(-c))
        if self.kind == "poisson_jump":
            return self._poisson_tail(h, epsilon)
        return None

    def _poisson_tail(self, h: float, epsilon: float) -> float:
        a = self.jump_size
        mu = self.intensity * h
        pmf = math.exp(-mu)
        cdf = pmf
        total = 0.0
        k = 0
        cap = int(mu + 40.0 * math.sqrt(mu) + 200.0)
        while True:
            z = a * (k - mu)
            if abs(z) > epsilon:
                total += z * z * pmf
            if cdf >= 1.0 - 1e-18 and k > mu:
                break
            k += 1
            if k > cap:
                break
            pmf *= mu / k
            cdf += pmf
        return total

    # -- sampling -----------------------------------------------------------

    def sample(self, h: float, seed: int, start: int, count: int) -> np.ndarray:
        """Draw increments over [0, h] for stream indices start..start+count-1.

        Pure function of (seed, index): batch decomposition cannot change
        the values.
        """
        if h <= 0.0:
            raise ValueError(f"interval length must be positive, got {h}")
        if self.kind == "poisson_jump":
            mu = self.intensity * h
            counts = poisson_stream(seed, start, count, mu)
            return self.jump_size * (counts - mu)

        s = math.sqrt(self.variance(h))
        u = uniform_stream(seed, start, count)
        if self.kind == "two_point":
            return np.where(u < 0.5, -s, s)
        if self.kind == "uniform":
            return math.sqrt(3.0) * s * (2.0 * u - 1.0)
        if self.kind == "centered_exponential":
            return s * (-np.log1p(-u) - 1.0)
        # normal
        return s * norm_cdf_inv(u)
