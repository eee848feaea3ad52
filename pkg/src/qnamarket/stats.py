"""Moment statistics and the Jarque-Bera normality test.

All moments are uncorrected central sample moments m_j = mean((x - mean)^j).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

P_VALUE_FLOOR = 1e-300


class UndefinedStatisticError(ValueError):
    """Raised when a statistic is undefined for the given series (too short or constant)."""


def _central_moments(x) -> tuple[int, float, float, float, float]:
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    if n < 4:
        raise UndefinedStatisticError(f"need at least 4 observations, got {n}")
    mean = float(np.mean(x))
    d = x - mean
    d2 = d * d
    m2 = float(np.mean(d2))
    if m2 == 0.0:
        raise UndefinedStatisticError("series has zero variance")
    m3 = float(np.mean(d2 * d))
    m4 = float(np.mean(d2 * d2))
    return n, mean, m2, m3, m4


def skewness(x) -> float:
    _, _, m2, m3, _ = _central_moments(x)
    return m3 / m2**1.5


def fisher_kurtosis(x) -> float:
    """Excess kurtosis m4 / m2^2 - 3 (0 for a Gaussian)."""
    _, _, m2, _, m4 = _central_moments(x)
    return m4 / (m2 * m2) - 3.0


def jb_p_value(statistic: float) -> float:
    """Chi-squared(2) survival function; values below 1e-300 are reported as 0."""
    p = math.exp(-statistic / 2.0)
    return 0.0 if p < P_VALUE_FLOOR else p


def jb_from_moments(n: int, skew: float, kurt: float) -> float:
    return n / 6.0 * (skew * skew + kurt * kurt / 4.0)


def jarque_bera(x) -> tuple[float, float]:
    """Return the Jarque-Bera statistic and its asymptotic p-value."""
    n, _, m2, m3, m4 = _central_moments(x)
    jb = jb_from_moments(n, m3 / m2**1.5, m4 / (m2 * m2) - 3.0)
    return jb, jb_p_value(jb)


@dataclass(frozen=True)
class SeriesSummary:
    n: int
    mean: float
    variance: float
    skewness: float
    fisher_kurtosis: float
    jb_statistic: float
    jb_p_value: float

    def as_dict(self) -> dict:
        return asdict(self)


def summarize(x) -> SeriesSummary:
    n, mean, m2, m3, m4 = _central_moments(x)
    skew = m3 / m2**1.5
    kurt = m4 / (m2 * m2) - 3.0
    jb = jb_from_moments(n, skew, kurt)
    return SeriesSummary(n, mean, m2, skew, kurt, jb, jb_p_value(jb))
