"""Photon statistics and quadrature variances from Fock coefficients.

All moments come from the dense amplitude vector a_m (m = Fock level):

    <n>   = sum m |a_m|^2
    <a^2> = sum conj(a_m) a_{m+2} sqrt((m+1)(m+2))

so the same code serves every state class; class-specific closed forms are
only used as test oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import FockState, SqueezedState

__all__ = [
    "StatisticsReport",
    "photon_distribution",
    "number_moments",
    "a_expectation",
    "a_squared_expectation",
    "mandel_q",
    "quadrature_variances",
    "is_squeezed",
    "statistics",
]


@dataclass(frozen=True)
class StatisticsReport:
    P: np.ndarray
    mean_n: float
    mean_n2: float
    a2: complex
    Q: float | None
    var_x: float
    var_p: float
    moment_error: float = 0.0

    @property
    def x_squeezed(self) -> bool:
        return is_squeezed(self.var_x)

    @property
    def p_squeezed(self) -> bool:
        return is_squeezed(self.var_p)


def photon_distribution(st: FockState) -> np.ndarray:
    """P(m) for m = 0..max level; levels the state does not occupy are exactly 0."""
    p = np.zeros(int(st.levels[-1]) + 1)
    p[st.levels] = st.probabilities
    return p


def number_moments(st: FockState) -> tuple[float, float]:
    """(<n>, <n^2>)."""
    p = st.probabilities
    m = st.levels.astype(float)
    return float(np.dot(p, m)), float(np.dot(p, m * m))


def a_expectation(st: FockState) -> complex:
    amp = st.amplitudes()
    m = np.arange(amp.size - 1)
    return complex(np.sum(np.conj(amp[:-1]) * amp[1:] * np.sqrt(m + 1.0)))


def a_squared_expectation(st: FockState) -> complex:
    """<a^2>; <a^dagger^2> is its complex conjugate."""
    amp = st.amplitudes()
    if amp.size < 3:
        return 0j
    m = np.arange(amp.size - 2)
    return complex(np.sum(np.conj(amp[:-2]) * amp[2:] * np.sqrt((m + 1.0) * (m + 2.0))))


def mandel_q(st: FockState) -> float | None:
    """(<n^2> - <n>^2)/<n> - 1, or None for the vacuum where it is 0/0."""
    mean, mean2 = number_moments(st)
    if mean == 0:
        return None
    return (mean2 - mean * mean) / mean - 1.0


def quadrature_variances(st: FockState) -> tuple[float, float]:
    """(dx^2, dp^2) for x = (a + a^dag)/sqrt2 and p = (a - a^dag)/(i sqrt2).

    Even-level states have <a> = 0; the mean-field term is kept so the
    formulas also hold for coherent states.
    """
    mean, _ = number_moments(st)
    a2 = a_squared_expectation(st)
    a1 = a_expectation(st) if not isinstance(st, SqueezedState) else 0j
    var_x = mean + a2.real + 0.5 - 2 * a1.real**2
    var_p = mean - a2.real + 0.5 - 2 * a1.imag**2
    return var_x, var_p


def is_squeezed(variance: float) -> bool:
    """Strictly below the vacuum value 1/2; equality does not count."""
    return variance < 0.5


def statistics(st: FockState) -> StatisticsReport:
    mean, mean2 = number_moments(st)
    var_x, var_p = quadrature_variances(st)
    # a forced cut of a possibly divergent series has no error bound
    tail = math.inf if st.forced else getattr(st, "tail_bound", 0.0)
    top = float(st.levels[-1]) + 2.0
    return StatisticsReport(
        P=photon_distribution(st),
        mean_n=mean,
        mean_n2=mean2,
        a2=a_squared_expectation(st),
        Q=None if mean == 0 else (mean2 - mean * mean) / mean - 1.0,
        var_x=var_x,
        var_p=var_p,
        # the neglected tail is weighted by up to (level)^2 in <n^2>
        moment_error=tail * top * top if math.isfinite(tail) else math.inf,
    )
