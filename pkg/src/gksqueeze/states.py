"""Gazeau-Klauder squeezed and coherent states in the Fock basis.

Every state is a finite coefficient vector kept as separate log-magnitude and
phase arrays. Factorials and Jackson factorials overflow doubles long before
the series has converged at r ~ 2.5, so magnitudes are assembled as logs and
only exponentiated after the normalization has been subtracted.

The four squeezed classes differ in which factorial enters (|c_n|^2):

    I    [e_2n]! / (n!)^2 t^2n          II   ((2n)!/n!)^2 / [e_2n]! t^2n
    III  [eps_2n]! / (n!)^2 t^2n        IV   ((2n)!/n!)^2 / [eps_2n]! t^2n

with t = tanh(r)/2, and carry the phase n*phi - alpha*E_2n where E is the
spectrum (I, II) or its dual (III, IV).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import (
    AsymptoticSeriesWarning,
    DivergentSeriesError,
    InvalidSpectrumError,
    TruncationError,
)
from .spectra import Spectrum, jackson_factorial_logs

__all__ = [
    "StateClass",
    "SqueezedParams",
    "TruncationPolicy",
    "ConvergenceReport",
    "FockState",
    "SqueezedState",
    "build_squeezed",
    "gk_coherent",
    "gk_coherent_dual",
    "nonlinearity_factorial",
    "evolve",
    "convergence_check",
    "log_factorials",
]

Verdict = Literal["convergent", "divergent", "inconclusive"]


class StateClass(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"

    @property
    def uses_dual(self) -> bool:
        """III and IV are built on the dual spectrum eps_n = n^2/e_n."""
        return self in (StateClass.III, StateClass.IV)

    @property
    def factorial_in_numerator(self) -> bool:
        return self in (StateClass.I, StateClass.III)

    @classmethod
    def parse(cls, text) -> StateClass:
        if isinstance(text, StateClass):
            return text
        key = str(text).strip().upper()
        if key.startswith("CLASS"):
            key = key[5:].strip(" _-")
        key = {"1": "I", "2": "II", "3": "III", "4": "IV"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown state class {text!r}; expected I, II, III or IV") from None


@dataclass(frozen=True)
class SqueezedParams:
    """Squeeze magnitude r (xi = tanh r e^{i phi}), phase phi and GK parameter alpha.

    alpha = 0 is allowed; it gives the nonlinear squeezed states of a real
    nonlinearity function.
    """

    r: float
    phi: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("r", "phi", "alpha"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.r < 0:
            raise ValueError(f"r must be non-negative, got {self.r}")

    @property
    def xi(self) -> complex:
        return math.tanh(self.r) * complex(math.cos(self.phi), math.sin(self.phi))


@dataclass(frozen=True)
class TruncationPolicy:
    """When to stop summing.

    N is the first index at which each of the last ``tail_window`` terms is
    below ``tol`` times the running normalization sum and every term ratio in
    that window is below ``1 - ratio_margin``. ``max_n`` is a hard cap on N.
    """

    tol: float = 1e-16
    tail_window: int = 5
    max_n: int = 2000
    ratio_margin: float = 1e-3

    def __post_init__(self):
        if not (0 < self.tol < 1):
            raise ValueError("tol must lie in (0, 1)")
        if self.tail_window < 1:
            raise ValueError("tail_window must be >= 1")
        if self.max_n < self.tail_window:
            raise ValueError("max_n must be >= tail_window")
        if not (0 <= self.ratio_margin < 1):
            raise ValueError("ratio_margin must lie in [0, 1)")


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of the ratio test on successive terms |c_{n+1}|^2 / |c_n|^2.

    ``ratio_estimate`` is the geometric mean of the term ratios over the
    examined window. ``regrowth_index`` is set when the series was truncated
    but terms further out climb back above the tolerance, or are rising again
    at the cap. Either the series is divergent and the truncated sum is only
    asymptotic, or it converges with its dominant part beyond the cap; the
    scan cannot tell the two apart, so the state is flagged.
    """

    verdict: Verdict
    ratio_estimate: float
    terms_examined: int
    truncation: int | None = None
    regrowth_index: int | None = None
    reason: str = ""

    @property
    def asymptotic(self) -> bool:
        return self.regrowth_index is not None


@dataclass(frozen=True, eq=False)
class FockState:
    """Normalized amplitudes on Fock levels ``levels`` (log|c| and arg c)."""

    levels: np.ndarray
    log_mag: np.ndarray
    phase: np.ndarray
    truncation: int
    convergence: ConvergenceReport
    log_norm: float = 0.0
    forced: bool = False

    @property
    def coeffs(self) -> np.ndarray:
        return np.exp(self.log_mag + 1j * self.phase)

    @property
    def probabilities(self) -> np.ndarray:
        return np.exp(2 * self.log_mag)

    @property
    def norm_constant(self) -> float:
        """The normalization constant that was applied to the raw series."""
        return math.exp(self.log_norm)

    def amplitudes(self) -> np.ndarray:
        """Dense complex vector indexed by Fock level 0..max(levels)."""
        out = np.zeros(int(self.levels[-1]) + 1, dtype=complex)
        out[self.levels] = self.coeffs
        return out


@dataclass(frozen=True, eq=False)
class SqueezedState(FockState):
    """A normalized squeezed state sum_n c_n |2n> of one of the four classes.

    ``level_energies[n]`` is E_2n (spectrum or dual, per class), the energy
    that multiplies alpha in the phase and t under time evolution.
    """

    state_class: StateClass = StateClass.I
    spectrum: Spectrum | None = None
    params: SqueezedParams = field(default_factory=lambda: SqueezedParams(0.0))
    level_energies: np.ndarray = field(default_factory=lambda: np.zeros(1))
    tail_bound: float = 0.0

    @property
    def is_vacuum(self) -> bool:
        return self.truncation == 0


def log_factorials(n_max: int) -> np.ndarray:
    """``[ln 0!, ..., ln n_max!]`` as a cumulative sum of logs."""
    out = np.zeros(n_max + 1)
    if n_max:
        np.cumsum(np.log(np.arange(1, n_max + 1, dtype=float)), out=out[1:])
    return out


def _usable_top(values: np.ndarray) -> int:
    """Largest m such that values[1..m] are finite and positive."""
    ok = np.isfinite(values[1:]) & (values[1:] > 0)
    bad = np.flatnonzero(~ok)
    return int(bad[0]) if bad.size else values.size - 1


def _energy_source(state_class: StateClass, s: Spectrum) -> Spectrum:
    return s.dual() if state_class.uses_dual else s


def _squeezed_log_terms(
    state_class: StateClass, s: Spectrum, r: float, n_max: int
) -> tuple[np.ndarray, Spectrum]:
    """log|term_n|^2 (unnormalized) for n = 0..M, M <= n_max limited by the spectrum."""
    src = _energy_source(state_class, s)
    top = src.available(2 * n_max)
    raw = src.values(top, check=False)
    m = min(n_max, _usable_top(raw) // 2)
    if m < 1:
        # let the checked path raise the precise error
        jackson_factorial_logs(src, max(2, top))
        raise InvalidSpectrumError(f"{src.name}: fewer than two usable levels")
    jf = jackson_factorial_logs(src, 2 * m)
    lf = log_factorials(2 * m)
    n = np.arange(m + 1)
    log_t = math.log(math.tanh(r) / 2)
    if state_class.factorial_in_numerator:
        terms = jf[2 * n] - 2 * lf[n]
    else:
        terms = 2 * lf[2 * n] - 2 * lf[n] - jf[2 * n]
    return terms + 2 * n * log_t, src


def _scan(log_terms: np.ndarray, policy: TruncationPolicy, window: int | None = None) -> ConvergenceReport:
    w = window or policy.tail_window
    m = log_terms.size - 1
    if m < w:
        return ConvergenceReport("inconclusive", math.nan, m + 1, reason=f"only {m + 1} terms available")
    log_tol = math.log(policy.tol)
    log_ratio_cap = math.log1p(-policy.ratio_margin) if policy.ratio_margin else 0.0
    partial = np.logaddexp.accumulate(log_terms)
    d = np.diff(log_terms)
    tail_max = sliding_window_view(log_terms, w).max(axis=1)
    ratio_max = sliding_window_view(d, w).max(axis=1)
    ks = np.arange(w, m + 1)
    ok = (tail_max[ks - w + 1] - partial[ks] < log_tol) & (ratio_max[ks - w] < log_ratio_cap)
    if ok.any():
        # largest term strictly after k, up to the scanned end
        after = np.append(np.maximum.accumulate(log_terms[::-1])[::-1][1:], -np.inf)
        # terms still rising at the cap may climb back above tolerance beyond it
        rising_at_cap = float(np.mean(d[m - w : m])) >= 0
        settled = ok & (after[ks] - partial[ks] < log_tol) & (not rising_at_cap)
        if settled.any():
            n_trunc = int(ks[np.argmax(settled)])
            est = math.exp(float(np.mean(d[n_trunc - w : n_trunc])))
            return ConvergenceReport(
                "convergent", est, m + 1, n_trunc, None, "tail below tolerance up to the cap"
            )
        n_trunc = int(ks[np.argmax(ok)])
        est = math.exp(float(np.mean(d[n_trunc - w : n_trunc])))
        later = np.flatnonzero(log_terms[n_trunc + 1 :] - partial[n_trunc] >= log_tol)
        if later.size:
            regrow = int(n_trunc + 1 + later[0])
            reason = f"tail below tolerance; terms regrow above tolerance at n = {regrow}"
        else:
            regrow = m
            reason = f"tail below tolerance; terms are rising again at the cap n = {m}"
        return ConvergenceReport("convergent", est, m + 1, n_trunc, regrow, reason)
    est = math.exp(float(np.mean(d[m - w : m])))
    if est >= 1 and int(np.argmax(log_terms)) >= m - w:
        return ConvergenceReport(
            "divergent", est, m + 1, reason=f"terms still growing at n = {m} (ratio ~ {est:.3g})"
        )
    return ConvergenceReport(
        "inconclusive", est, m + 1, reason=f"tolerance not reached by n = {m} (ratio ~ {est:.3g})"
    )


def _finish(
    log_terms: np.ndarray,
    policy: TruncationPolicy,
    force_truncate: int | None,
    what: str,
) -> tuple[int, ConvergenceReport, np.ndarray, float]:
    report = _scan(log_terms, policy)
    if force_truncate is not None:
        n_trunc = int(force_truncate)
        if not 0 <= n_trunc < log_terms.size:
            raise ValueError(
                f"forced truncation {n_trunc} outside available range 0..{log_terms.size - 1}"
            )
    elif report.verdict == "divergent":
        raise DivergentSeriesError(f"{what}: normalization series diverges ({report.reason})", report)
    elif report.verdict == "inconclusive":
        raise TruncationError(f"{what}: series not certified convergent ({report.reason})", report)
    else:
        n_trunc = report.truncation
        if report.regrowth_index is not None:
            warnings.warn(
                f"{what}: truncated at N = {n_trunc} but {report.reason.split('; ')[-1]}",
                AsymptoticSeriesWarning,
                stacklevel=3,
            )
    kept = log_terms[: n_trunc + 1]
    log_sum = float(np.logaddexp.reduce(kept))
    tail = 0.0
    if force_truncate is None and n_trunc >= 1:
        w = min(policy.tail_window, n_trunc)
        rho = math.exp(float(np.max(np.diff(kept)[-w:])))
        tail = math.exp(float(kept[-1]) - log_sum) * rho / (1 - rho)
    return n_trunc, report, kept - log_sum, tail


def build_squeezed(
    state_class: StateClass | str,
    spectrum: Spectrum,
    params: SqueezedParams,
    policy: TruncationPolicy | None = None,
    *,
    force_truncate: int | None = None,
) -> SqueezedState:
    """Normalized coefficients of a squeezed state of the given class.

    Raises :class:`DivergentSeriesError` when the normalization sum grows
    without bound and :class:`TruncationError` when the cap is hit first.
    ``force_truncate=N`` skips both checks and keeps levels 0..2N; the
    resulting state is flagged ``forced`` and its numbers depend on N.
    """
    state_class = StateClass.parse(state_class)
    policy = policy or TruncationPolicy()
    if params.r == 0:
        vac = ConvergenceReport("convergent", 0.0, 1, 0, None, "vacuum (r = 0)")
        return SqueezedState(
            levels=np.zeros(1, dtype=int),
            log_mag=np.zeros(1),
            phase=np.zeros(1),
            truncation=0,
            convergence=vac,
            state_class=state_class,
            spectrum=spectrum,
            params=params,
            level_energies=np.zeros(1),
        )
    n_max = max(policy.max_n, force_truncate or 0)
    log_terms, src = _squeezed_log_terms(state_class, spectrum, params.r, n_max)
    what = f"class {state_class.value} on {spectrum!r} at r={params.r:g}"
    n_trunc, report, log_p, tail = _finish(log_terms, policy, force_truncate, what)
    n = np.arange(n_trunc + 1)
    energies = np.array(src.values(2 * n_trunc)[2 * n])
    return SqueezedState(
        levels=2 * n,
        log_mag=0.5 * log_p,
        phase=n * params.phi - params.alpha * energies,
        truncation=n_trunc,
        convergence=report,
        log_norm=-0.5 * float(np.logaddexp.reduce(log_terms[: n_trunc + 1])),
        forced=force_truncate is not None,
        state_class=state_class,
        spectrum=spectrum,
        params=params,
        level_energies=energies,
        tail_bound=tail,
    )


def convergence_check(
    state_class: StateClass | str,
    spectrum: Spectrum,
    r: float,
    window: int | None = None,
    policy: TruncationPolicy | None = None,
) -> ConvergenceReport:
    """Ratio-test verdict for the normalization series of a class at squeeze r."""
    state_class = StateClass.parse(state_class)
    policy = policy or TruncationPolicy()
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return ConvergenceReport("convergent", 0.0, 1, 0, None, "single term (r = 0)")
    log_terms, _ = _squeezed_log_terms(state_class, spectrum, r, policy.max_n)
    return _scan(log_terms, policy, window)


def _coherent(
    src: Spectrum,
    z: complex,
    alpha: float,
    policy: TruncationPolicy | None,
    force_truncate: int | None,
) -> FockState:
    policy = policy or TruncationPolicy()
    z = complex(z)
    if z == 0:
        vac = ConvergenceReport("convergent", 0.0, 1, 0, None, "vacuum (z = 0)")
        return FockState(np.zeros(1, dtype=int), np.zeros(1), np.zeros(1), 0, vac)
    n_max = max(policy.max_n, force_truncate or 0)
    top = src.available(n_max)
    m = min(top, _usable_top(src.values(top, check=False)))
    jf = jackson_factorial_logs(src, max(m, 1))
    n = np.arange(m + 1)
    log_terms = 2 * n * math.log(abs(z)) - jf[: m + 1]
    what = f"coherent state on {src!r} at |z|={abs(z):g}"
    n_trunc, report, log_p, _ = _finish(log_terms, policy, force_truncate, what)
    n = n[: n_trunc + 1]
    energies = src.values(n_trunc)
    return FockState(
        levels=n,
        log_mag=0.5 * log_p,
        phase=n * np.angle(z) - alpha * energies,
        truncation=n_trunc,
        convergence=report,
        log_norm=-0.5 * float(np.logaddexp.reduce(log_terms[: n_trunc + 1])),
        forced=force_truncate is not None,
    )


def gk_coherent(
    spectrum: Spectrum,
    z: complex,
    alpha: float = 0.0,
    policy: TruncationPolicy | None = None,
    *,
    force_truncate: int | None = None,
) -> FockState:
    """c_n ~ z^n e^{-i alpha e_n} / sqrt([e_n]!), normalized."""
    return _coherent(spectrum, z, alpha, policy, force_truncate)


def gk_coherent_dual(
    spectrum: Spectrum,
    z: complex,
    alpha: float = 0.0,
    policy: TruncationPolicy | None = None,
    *,
    force_truncate: int | None = None,
) -> FockState:
    """c_n ~ z^n e^{-i alpha eps_n} / sqrt(mu(n)), mu(n) = (n!)^2 / [e_n]!.

    mu(n) is exactly the Jackson factorial of the dual spectrum.
    """
    return _coherent(spectrum.dual(), z, alpha, policy, force_truncate)


def nonlinearity_factorial(s: Spectrum, sign: int | str, alpha: float, n: int) -> complex:
    """e^{-+ i alpha e_n} sqrt([e_n]! / n!) for sign = +1 / -1.

    Pass ``s.dual()`` for the dual-spectrum analogue.
    """
    sgn = {"+": 1, "-": -1}.get(sign, sign) if isinstance(sign, str) else sign
    if sgn not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return complex(1.0)
    log_mag = 0.5 * (jackson_factorial_logs(s, n)[n] - log_factorials(n)[n])
    e_n = float(s.values(n)[n])
    return complex(np.exp(log_mag - 1j * sgn * alpha * e_n))


def evolve(state: SqueezedState, t: float) -> SqueezedState:
    """Apply exp(+i H t) (dual H for classes III/IV); equals rebuilding at alpha - t."""
    return replace(
        state,
        phase=state.phase + state.level_energies * t,
        params=replace(state.params, alpha=state.params.alpha - t),
    )
