"""Acceptance checks: closed-form oracles and the published sign/threshold claims.

Each check returns a :class:`CriterionResult` with a pass flag and the
measured values. ``run_all`` drives the ``verify`` subcommand and the
acceptance test module.

Identity checks whose statement does not depend on the normalization sum
existing (temporal stability, the <a^2> transcription) fall back to a forced
truncation for classes whose series diverges; the fallback is printed.
Sign and threshold claims never do: a divergent build fails the claim.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import bisect

from .errors import DivergentSeriesError, SeriesError
from .spectra import (
    Spectrum,
    eigenvalue,
    harmonic,
    hydrogen,
    poschl_teller,
    square_well,
    trapped_ion,
)
from .states import (
    SqueezedParams,
    StateClass,
    TruncationPolicy,
    build_squeezed,
    convergence_check,
    evolve,
)
from .stats import a_squared_expectation, mandel_q, photon_distribution, quadrature_variances

__all__ = ["CriterionResult", "CRITERIA", "run_all", "run_one", "class_one_a2_oracle", "x_squeezing_boundary"]

CLASSES = tuple(StateClass)
FORCED_N = 30


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.key} {self.title}"


def _quiet_build(*args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_squeezed(*args, **kwargs)


def _build_or_force(cls, spec, params, policy, notes, n_forced=FORCED_N):
    try:
        return _quiet_build(cls, spec, params, policy)
    except SeriesError as exc:
        notes.append(
            f"class {cls.value} on {spec.name} r={params.r:g}: {type(exc).__name__}; "
            f"identity checked on forced truncation N={n_forced}"
        )
        return _quiet_build(cls, spec, params, policy, force_truncate=n_forced)


def _root(f, lo: float, hi: float) -> float | None:
    """Bisection root of f in [lo, hi], or None when the bracket has no sign change."""
    if f(lo) * f(hi) > 0:
        return None
    return bisect(f, lo, hi, xtol=1e-9)


# -- closed-form oracles -----------------------------------------------------


def ac01_self_duality(policy):
    h = harmonic()
    worst = 0.0
    for r in (0.5, 1.0, 2.0):
        for alpha in (0.0, 1.5):
            p = SqueezedParams(r, 0.0, alpha)
            ref = _quiet_build(StateClass.I, h, p, policy)
            for cls in CLASSES[1:]:
                st = _quiet_build(cls, h, p, policy)
                if st.truncation != ref.truncation:
                    return False, [f"truncation differs for class {cls.value} at r={r}, alpha={alpha}"]
                worst = max(worst, float(np.max(np.abs(st.coeffs - ref.coeffs))))
    return worst < 1e-12, [f"max |c_n(class) - c_n(I)| = {worst:.3e} (tol 1e-12)"]


def ac02_closed_form_norm(policy):
    h = harmonic()
    worst = 0.0
    for r in np.linspace(0.1, 2.5, 25):
        st = _quiet_build(StateClass.I, h, SqueezedParams(float(r)), policy)
        ref = math.cosh(r) ** -0.5
        worst = max(worst, abs(st.norm_constant - ref) / ref)
    return worst < 1e-10, [f"max relative |N - cosh(r)^-1/2| = {worst:.3e} over r in [0.1, 2.5] (tol 1e-10)"]


def ac03_squeezed_vacuum(policy):
    h = harmonic()
    dq = dp = 0.0
    min_q = math.inf
    for r in np.linspace(0.1, 2.0, 20):
        st = _quiet_build(StateClass.I, h, SqueezedParams(float(r)), policy)
        q = mandel_q(st)
        _, var_p = quadrature_variances(st)
        dq = max(dq, abs(q - math.cosh(2 * r)))
        dp = max(dp, abs(var_p - math.exp(-2 * r) / 2))
        min_q = min(min_q, q)
    ok = dq < 1e-8 and dp < 1e-8 and min_q > 0
    return ok, [
        f"max |Q - cosh 2r| = {dq:.3e}, max |dp^2 - e^-2r/2| = {dp:.3e} (tol 1e-8)",
        f"min Q = {min_q:.4f} (> 0: super-Poissonian everywhere)",
    ]


def _harmonic_var(alpha: float, r: float, which: int, policy) -> float:
    st = _quiet_build(StateClass.I, harmonic(), SqueezedParams(r, 0.0, alpha), policy)
    return quadrature_variances(st)[which] - 0.5


def ac04_alpha_windows(policy):
    r = 1.0
    c = math.acos(math.tanh(r))
    exact = {
        "x low": (math.pi - c) / 2,
        "x high": (math.pi + c) / 2,
        "p end 1": c / 2,
        "p start 2": math.pi - c / 2,
        "p end 2": math.pi + c / 2,
    }
    stated = {"x low": 1.218, "x high": 1.923, "p end 1": 0.352, "p start 2": 2.789, "p end 2": 3.494}
    rounded = {"x low": 1.22, "x high": 1.92, "p end 1": 0.35, "p start 2": 2.8, "p end 2": 3.49}
    brackets = {
        "x low": (0, 1.0, 1.5),
        "x high": (0, 1.5, 2.2),
        "p end 1": (1, 0.1, 0.6),
        "p start 2": (1, 2.5, 3.0),
        "p end 2": (1, 3.2, 3.8),
    }
    ok = True
    details = []
    for key, (which, lo, hi) in brackets.items():
        root = _root(lambda a: _harmonic_var(a, r, which, policy), lo, hi)
        if root is None:
            ok = False
            details.append(f"{key}: no squeezing boundary inside [{lo}, {hi}] -> MISS")
            continue
        good = abs(root - stated[key]) <= 0.01
        ok &= good
        details.append(
            f"{key}: bisection {root:.4f}, closed form {exact[key]:.4f}, "
            f"target {stated[key]} +/- 0.01 -> {'ok' if good else 'MISS'} "
            f"(published rounding {rounded[key]})"
        )
    at0 = _harmonic_var(0.0, r, 1, policy) + 0.5
    ok &= at0 < 0.5
    details.append(f"dp^2(alpha=0) = {at0:.5f} (< 1/2: p-window opens at alpha = 0)")
    return ok, details


def ac05_r_threshold(policy):
    wide = TruncationPolicy(policy.tol, policy.tail_window, max(policy.max_n, 6000), policy.ratio_margin)

    def f(r):
        st = _quiet_build(StateClass.I, harmonic(), SqueezedParams(r, 0.0, 1.5), wide)
        return quadrature_variances(st)[0] - 0.5

    root = _root(f, 2.3, 2.9)
    exact = math.atanh(-math.cos(3.0))
    if root is None:
        return False, [f"no x-squeezing boundary inside [2.3, 2.9]; closed form {exact:.4f}"]
    ok = abs(root - 2.646) <= 0.01 and f(1.0) < 0
    return ok, [
        f"x-squeezing boundary r* = {root:.4f} by bisection, closed form {exact:.4f}, "
        f"target 2.646 +/- 0.01 (published rounding 2.6); dx^2 < 1/2 below it"
    ]


def _builtin_spectra() -> list[Spectrum]:
    return [
        harmonic(),
        poschl_teller(5.0),
        square_well(),
        hydrogen(),
        trapped_ion(0.1),
        trapped_ion(0.3),
        trapped_ion(0.5),
        trapped_ion(0.7),
    ]


def ac06_parity_normalization(policy):
    worst = 0.0
    odd_max = 0.0
    built = skipped = 0
    for spec in _builtin_spectra():
        for cls in CLASSES:
            for r in (0.5, 1.0, 2.0):
                try:
                    st = _quiet_build(cls, spec, SqueezedParams(r), policy)
                except DivergentSeriesError:
                    skipped += 1
                    continue
                except SeriesError as exc:
                    return False, [f"class {cls.value} on {spec!r} r={r}: {exc}"]
                p = photon_distribution(st)
                odd_max = max(odd_max, float(np.max(p[1::2], initial=0.0)))
                worst = max(worst, abs(float(p.sum()) - 1.0))
                built += 1
    ok = odd_max == 0.0 and worst < 1e-10
    return ok, [
        f"{built} convergent builds, {skipped} divergent skipped",
        f"max P(odd) = {odd_max:g} (structural 0), max |sum P - 1| = {worst:.3e} (tol 1e-10)",
    ]


def ac07_temporal_stability(policy):
    worst = 0.0
    notes: list[str] = []
    for spec in (harmonic(), poschl_teller(5.0)):
        for cls in CLASSES:
            base = SqueezedParams(1.0, 0.0, 0.5)
            st = _build_or_force(cls, spec, base, policy, notes)
            for t in (0.3, 1.7):
                moved = evolve(st, t)
                shifted = SqueezedParams(1.0, 0.0, 0.5 - t)
                if st.forced:
                    ref = _quiet_build(cls, spec, shifted, policy, force_truncate=st.truncation)
                else:
                    ref = _quiet_build(cls, spec, shifted, policy)
                worst = max(worst, float(np.max(np.abs(moved.coeffs - ref.coeffs))))
    return worst < 1e-12, [f"max |evolve(t) - build(alpha - t)| = {worst:.3e} (tol 1e-12)"] + notes


# -- sign and threshold claims ----------------------------------------------


def _q_or_reason(cls, spec, r, policy, alpha=0.0):
    try:
        return mandel_q(_quiet_build(cls, spec, SqueezedParams(r, 0.0, alpha), policy)), None
    except SeriesError as exc:
        return None, f"{type(exc).__name__}: {exc.report.reason if exc.report else exc}"


def _forced_q(cls, spec, r, ns=(10, 50)):
    vals = []
    for n in ns:
        st = _quiet_build(cls, spec, SqueezedParams(r), force_truncate=n)
        vals.append(f"N={n}: {mandel_q(st):+.4f}")
    return ", ".join(vals)


def ac08_mandel_signs(policy):
    ok = True
    details = []
    claims = []
    for spec in (poschl_teller(5.0), square_well()):
        for cls, sign in zip(CLASSES, (-1, +1, +1, -1)):
            claims.append((spec, cls, sign, (0.5, 1.0, 2.0)))
    hyd = hydrogen()
    claims += [(hyd, StateClass.I, +1, (1.0,)), (hyd, StateClass.III, -1, (1.0,))]
    for spec, cls, sign, grid in claims:
        label = f"{spec.name} class {cls.value} Q {'>' if sign > 0 else '<'} 0"
        parts = []
        good = True
        for r in grid:
            q, why = _q_or_reason(cls, spec, r, policy)
            if q is None:
                good = False
                parts.append(f"r={r}: {why}; forced {_forced_q(cls, spec, r)}")
            else:
                good &= q * sign > 0
                parts.append(f"r={r}: Q={q:+.4f}")
        ok &= good
        details.append(f"{'ok  ' if good else 'MISS'} {label}: " + "; ".join(parts))
    for cls in (StateClass.II, StateClass.IV):
        q, why = _q_or_reason(cls, hyd, 1.0, policy)
        state = f"Q={q:+.4f} (convergent)" if q is not None else why
        details.append(
            f"info hydrogen class {cls.value} r=1: {state}; forced {_forced_q(cls, hyd, 1.0)}"
        )
    return ok, details


def _sign_over(cls, spec, grid, sign, policy, alpha=0.0):
    bad = []
    for r in grid:
        q, why = _q_or_reason(cls, spec, float(r), policy, alpha)
        if q is None:
            bad.append(f"r={r:.3g}: {why.split(':')[0]}")
        elif q * sign <= 0:
            bad.append(f"r={r:.3g}: Q={q:+.4f}")
    return bad


def x_squeezing_boundary(cls, spec, alpha, policy=None, r_max=2.5, step=0.01):
    """First r where dx^2 stops being < 1/2, refined by bisection."""

    def excess(r):
        st = _quiet_build(cls, spec, SqueezedParams(r, 0.0, alpha), policy)
        return quadrature_variances(st)[0] - 0.5

    prev = None
    for r in np.arange(step, r_max + step / 2, step):
        r = float(r)
        try:
            v = excess(r)
        except SeriesError as exc:
            return None, f"{type(exc).__name__} at r={r:.2f} before any crossing"
        if v >= 0:
            if prev is None:
                return None, f"not x-squeezed at r={r:.2f}"
            return _root(excess, prev, r), None
        prev = r
    return None, f"x-squeezed over the whole range up to r={r_max}"


def ac09_trapped_ion(policy):
    ok = True
    details = []

    def claim(label, bad):
        nonlocal ok
        ok &= not bad
        shown = "; ".join(bad[:4]) + (" ..." if len(bad) > 4 else "")
        details.append(f"{'ok  ' if not bad else 'MISS'} {label}" + (f": {shown}" if bad else ""))

    claim(
        "class I eta=0.5 Q < 0 on r in [0.2, 2]",
        _sign_over(StateClass.I, trapped_ion(0.5), np.linspace(0.2, 2.0, 19), -1, policy),
    )
    claim(
        "class IV eta=0.7 Q > 0 on r in [0.1, 2.5]",
        _sign_over(StateClass.IV, trapped_ion(0.7), np.linspace(0.1, 2.5, 25), +1, policy),
    )
    claim(
        "class III eta=0.7 Q < 0 on r in [0.03, 2.5]",
        _sign_over(StateClass.III, trapped_ion(0.7), np.linspace(0.03, 2.5, 25), -1, policy),
    )
    for cls, eta, target in ((StateClass.II, 0.1, 0.5), (StateClass.III, 0.3, 0.6)):
        root, why = x_squeezing_boundary(cls, trapped_ion(eta), 1.5, policy)
        label = f"class {cls.value} eta={eta} alpha=1.5 x-squeezed for r <= {target} (+/- 0.05)"
        if root is None:
            claim(label, [why])
        else:
            claim(label, [] if abs(root - target) <= 0.05 else [f"boundary at r = {root:.4f}"])
            if abs(root - target) <= 0.05:
                details[-1] += f": boundary at r = {root:.4f}"
    return ok, details


def ac10_hydrogen_p_squeezing(policy):
    spec = hydrogen()
    grid = np.linspace(0.1, 2.5, 25)
    verdicts = {}
    details = []
    for alpha in (1.5, 0.5):
        worst = -math.inf
        where = None
        for r in grid:
            st = _quiet_build(StateClass.I, spec, SqueezedParams(float(r), 0.0, alpha), policy)
            var_p = quadrature_variances(st)[1]
            if var_p > worst:
                worst, where = var_p, float(r)
        verdicts[alpha] = worst < 0.5
        details.append(
            f"alpha={alpha}: max dp^2 on r in [0.1, 2.5] = {worst:.4f} at r={where:.2f} -> "
            f"{'p-squeezed everywhere' if verdicts[alpha] else 'NOT squeezed everywhere'}"
            + (" (gating value)" if alpha == 1.5 else " (recorded)")
        )
    return verdicts[1.5], details


def ac11_divergence_detection(policy):
    ok = True
    details = []
    hyd = hydrogen()
    for r in (0.1, 0.5, 1.0):
        rep = convergence_check(StateClass.II, hyd, r, policy=policy)
        good = rep.verdict == "divergent"
        ok &= good
        details.append(
            f"{'ok  ' if good else 'MISS'} hydrogen class II r={r}: {rep.verdict} "
            f"(ratio ~ {rep.ratio_estimate:.3g})"
        )
    for spec in (harmonic(), poschl_teller(5.0)):
        for cls in (StateClass.I, StateClass.II):
            bad = []
            for r in (0.1, 0.5, 1.0, 1.5, 2.0, 2.5):
                rep = convergence_check(cls, spec, r, policy=policy)
                if rep.verdict != "convergent":
                    bad.append(f"r={r}: {rep.verdict} (ratio ~ {rep.ratio_estimate:.3g})")
            ok &= not bad
            details.append(
                f"{'ok  ' if not bad else 'MISS'} {spec.name} class {cls.value} convergent for r <= 2.5"
                + (": " + "; ".join(bad[:3]) + (" ..." if len(bad) > 3 else "") if bad else "")
            )
    return ok, details


def ac12_eta_zero(policy):
    p = SqueezedParams(1.0, 0.0, 0.4)
    a = _quiet_build(StateClass.I, trapped_ion(0.0), p, policy)
    b = _quiet_build(StateClass.I, harmonic(), p, policy)
    if a.truncation != b.truncation:
        return False, [f"truncations differ: {a.truncation} vs {b.truncation}"]
    diff = float(np.max(np.abs(a.coeffs - b.coeffs)))
    return diff < 1e-10, [f"max |c(eta=0) - c(harmonic)| = {diff:.3e} (tol 1e-10)"]


def class_one_a2_oracle(spec: Spectrum, r: float, alpha: float, n_top: int) -> complex:
    """<a^2> of a class I state, summed term by term from the closed expression.

    Independent of the coefficient pipeline: factorials come from
    ``math.lgamma`` and Jackson factorials from a running sum of ln e_k.
    """
    t = math.tanh(r) / 2
    e = [eigenvalue(spec, k) for k in range(2 * n_top + 1)]
    log_jack = [0.0]
    for k in range(1, 2 * n_top + 1):
        log_jack.append(log_jack[-1] + math.log(e[k]))
    norm_sum = sum(
        math.exp(log_jack[2 * n] - 2 * math.lgamma(n + 1) + 2 * n * math.log(t))
        for n in range(n_top + 1)
    )
    total = 0j
    for n in range(n_top):
        log_mag = (
            0.5 * (math.log((2 * n + 1) * (2 * n + 2)) + log_jack[2 * n + 2] + log_jack[2 * n])
            - math.lgamma(n + 1)
            - math.lgamma(n + 2)
            + (2 * n + 1) * math.log(t)
        )
        phase = alpha * (e[2 * n] - e[2 * n + 2])
        total += math.exp(log_mag) * complex(math.cos(phase), math.sin(phase))
    return total / norm_sum


def ac13_a_squared_oracle(policy):
    worst = 0.0
    notes: list[str] = []
    for spec in (harmonic(), square_well(), hydrogen()):
        st = _build_or_force(StateClass.I, spec, SqueezedParams(1.0, 0.0, 0.7), policy, notes)
        generic = a_squared_expectation(st)
        literal = class_one_a2_oracle(spec, 1.0, 0.7, st.truncation)
        worst = max(worst, abs(generic - literal))
    return worst < 1e-12, [f"max |<a^2> generic - closed-form sum| = {worst:.3e} (tol 1e-12)"] + notes


CRITERIA: list[tuple[str, str, Callable]] = [
    ("AC01", "self-duality of the harmonic oscillator (all classes agree)", ac01_self_duality),
    ("AC02", "harmonic class I normalization = cosh(r)^-1/2", ac02_closed_form_norm),
    ("AC03", "squeezed-vacuum Mandel Q and p-variance", ac03_squeezed_vacuum),
    ("AC04", "harmonic squeezing windows in alpha at r = 1", ac04_alpha_windows),
    ("AC05", "harmonic x-squeezing threshold in r at alpha = 1.5", ac05_r_threshold),
    ("AC06", "odd-level parity and normalization", ac06_parity_normalization),
    ("AC07", "temporal stability: evolve(t) = rebuild at alpha - t", ac07_temporal_stability),
    ("AC08", "Mandel sign table (Poschl-Teller, square well, hydrogen)", ac08_mandel_signs),
    ("AC09", "trapped-ion Mandel signs and squeezing ranges", ac09_trapped_ion),
    ("AC10", "hydrogen class I p-squeezing for all r", ac10_hydrogen_p_squeezing),
    ("AC11", "ratio-test divergence detection", ac11_divergence_detection),
    ("AC12", "trapped ion at eta = 0 equals the harmonic oscillator", ac12_eta_zero),
    ("AC13", "generic <a^2> equals the class I closed-form sum", ac13_a_squared_oracle),
]


def run_one(key: str, policy: TruncationPolicy | None = None) -> CriterionResult:
    policy = policy or TruncationPolicy()
    for k, title, fn in CRITERIA:
        if k == key:
            try:
                passed, details = fn(policy)
            except SeriesError as exc:
                passed, details = False, [f"{type(exc).__name__}: {exc}"]
            return CriterionResult(k, title, bool(passed), list(details))
    raise KeyError(key)


def run_all(policy: TruncationPolicy | None = None) -> list[CriterionResult]:
    return [run_one(k, policy) for k, _, _ in CRITERIA]
