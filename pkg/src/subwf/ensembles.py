"""Measurement ensembles: the named entry distributions with their
fourth-moment parameters, plus an empirical moment estimator used as a test
oracle.

Every ensemble is normalized so that E a = 0 and E |a|^2 = 1.  The stored
parameters are beta1 = E|a|^4 - 1 (fourth-moment excess) and, for complex
ensembles, beta2 = 1 - |E a^2|^2.

Sampling draws from a ``numpy.random.Generator``; given the same seed the
stream is deterministic within this build (numpy's documented uniform/normal
transforms), which is all the reproducibility contract promises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError

_DISCRETE4_ATOMS = np.array([1.0 + 0.0j, -1.0 + 0.0j, 0.0 + 1.0j, 0.0 - 1.0j])


@dataclass(frozen=True)
class MeasurementEnsemble:
    """Immutable descriptor of one entry distribution.

    ``subgaussian_K`` is informational only (recorded where the source table
    states it); it never enters the algorithms.
    """

    name: str
    field: str  # "real" or "complex"
    beta1: float
    beta2: float | None = None  # complex ensembles only
    subgaussian_K: float | None = None

    @property
    def is_complex(self) -> bool:
        return self.field == "complex"

    def moment_params(self) -> tuple[float, float | None]:
        """The stored analytic (beta1, beta2); beta2 is None in the real field."""
        return self.beta1, self.beta2

    def sample_entries(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """``count`` i.i.d. scalar entries from the named law."""
        if count < 1:
            raise ValueError("count must be >= 1")
        if self.name == "complex_gaussian":
            return (rng.standard_normal(count) + 1j * rng.standard_normal(count)) / math.sqrt(2.0)
        if self.name == "complex_uniform":
            half = math.sqrt(6.0) / 2.0
            return half * rng.uniform(-1.0, 1.0, count) + 1j * half * rng.uniform(-1.0, 1.0, count)
        if self.name == "complex_discrete4":
            return _DISCRETE4_ATOMS[rng.integers(0, 4, count)]
        if self.name == "real_gaussian":
            return rng.standard_normal(count)
        if self.name == "real_uniform":
            return math.sqrt(3.0) * rng.uniform(-1.0, 1.0, count)
        if self.name == "real_bernoulli":
            return rng.integers(0, 2, count) * 2.0 - 1.0
        raise ConfigError(f"unknown ensemble {self.name!r}", key="ensemble")

    def sample_row(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """One sensing vector of length n."""
        if n < 1:
            raise ValueError("n must be >= 1")
        return self.sample_entries(n, rng)

    def sample_rows(self, m: int, n: int, rng: np.random.Generator) -> np.ndarray:
        """m sensing vectors as the rows of an (m, n) array."""
        if m < 1 or n < 1:
            raise ValueError("m and n must be >= 1")
        return self.sample_entries(m * n, rng).reshape(m, n)

    def estimate_moments(
        self, samples: int, rng: np.random.Generator
    ) -> tuple[float, float, float]:
        """Empirical (E|a|^2, E|a|^4, |E a^2|^2) from ``samples`` draws.

        Monte-Carlo oracle for ``moment_params``; requires samples >= 10^4 so
        the estimates are meaningful at the documented tolerances.
        """
        if samples < 10_000:
            raise ValueError("samples must be >= 10^4")
        a = self.sample_entries(samples, rng)
        sq = np.abs(a) ** 2
        m2 = float(sq.mean())
        m4 = float((sq**2).mean())
        abs_sq_m_a2 = float(abs((a**2).mean()) ** 2)
        return m2, m4, abs_sq_m_a2


ENSEMBLES: dict[str, MeasurementEnsemble] = {
    e.name: e
    for e in [
        MeasurementEnsemble("complex_gaussian", "complex", beta1=1.0, beta2=1.0),
        # (sqrt(6)/2)(U[-1,1] + i U[-1,1]): E|a|^4 = 9/20 + 1/2 + 9/20 = 1.4
        MeasurementEnsemble("complex_uniform", "complex", beta1=0.4, beta2=1.0),
        # uniform over {1, -1, i, -i}: |a| = 1, E a^2 = 0
        MeasurementEnsemble("complex_discrete4", "complex", beta1=0.0, beta2=1.0),
        MeasurementEnsemble("real_gaussian", "real", beta1=2.0, subgaussian_K=math.sqrt(8.0 / 3.0)),
        # sqrt(3) U[-1,1]: E a^4 = 9/5; K value is the stated upper bound
        MeasurementEnsemble("real_uniform", "real", beta1=0.8, subgaussian_K=math.sqrt(2.5)),
        MeasurementEnsemble("real_bernoulli", "real", beta1=0.0),
    ]
}


def get_ensemble(name: str) -> MeasurementEnsemble:
    try:
        return ENSEMBLES[name]
    except KeyError:
        known = ", ".join(sorted(ENSEMBLES))
        raise ConfigError(f"unknown ensemble {name!r} (known: {known})", key="ensemble") from None
