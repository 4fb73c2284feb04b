"""Eigenvalue sequences of solvable systems, their duals and Jackson factorials.

Energies are dimensionless (hbar = omega = 1) and shifted so that e_0 = 0.
A :class:`Spectrum` evaluates its rule lazily and memoizes the values up to
the largest index requested so far; the cache is guarded by a lock, so a
single instance can be shared by worker threads in a parameter sweep.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (
    ConfigError,
    InvalidSpectrumError,
    ParameterWarning,
    SingularDualError,
    SingularSpectrumError,
)

__all__ = [
    "Spectrum",
    "DualSpectrum",
    "ValidationReport",
    "harmonic",
    "poschl_teller",
    "square_well",
    "hydrogen",
    "trapped_ion",
    "trapped_ion_nonlinearity",
    "table",
    "spectrum_from_nonlinearity",
    "spectrum_from_config",
    "eigenvalue",
    "dual_eigenvalue",
    "jackson_factorial_log",
    "jackson_factorial_logs",
    "laguerre",
    "laguerre_sequence",
    "validate",
    "BUILTIN_KINDS",
]

Rule = Callable[[int], np.ndarray]


class Spectrum:
    """Named eigenvalue sequence e_0, e_1, ... with e_0 = 0.

    ``rule(n_max)`` must return the float array ``[e_0, ..., e_{n_max}]``.
    Singular entries (zero denominators) are returned as ``nan``/``inf`` by the
    rule and only raise when an index inside the requested range is touched.
    """

    _initial_size = 64

    def __init__(
        self,
        name: str,
        rule: Rule,
        params: Mapping[str, float] | None = None,
        *,
        max_index: int | None = None,
    ):
        self.name = name
        self.params = MappingProxyType(dict(params or {}))
        self.max_index = max_index
        self._rule = rule
        self._lock = threading.Lock()
        self._cache = np.empty(0)
        self._dual: DualSpectrum | None = None

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{type(self).__name__}({self.name}{', ' if args else ''}{args})"

    def _extend(self, n_max: int) -> np.ndarray:
        with self._lock:
            cache = self._cache
            if cache.size > n_max:
                return cache
            size = max(n_max + 1, 2 * cache.size, self._initial_size)
            if self.max_index is not None:
                size = min(size, self.max_index + 1)
            vals = np.asarray(self._rule(size - 1), dtype=float)
            if vals.shape != (size,):
                raise InvalidSpectrumError(
                    f"{self.name}: rule returned shape {vals.shape}, expected ({size},)"
                )
            vals.setflags(write=False)
            self._cache = vals
            return vals

    def values(self, n_max: int, *, check: bool = True) -> np.ndarray:
        """Read-only array ``[e_0, ..., e_{n_max}]``.

        With ``check=True`` a non-finite entry in range raises
        :class:`SingularSpectrumError`; with ``check=False`` the raw values are
        returned (used by tail scans that stop at the first bad entry).
        """
        n_max = int(n_max)
        if n_max < 0:
            raise ValueError("n_max must be non-negative")
        if self.max_index is not None and n_max > self.max_index:
            raise InvalidSpectrumError(
                f"{self.name}: index {n_max} beyond tabulated range 0..{self.max_index}"
            )
        vals = self._extend(n_max)[: n_max + 1]
        if check:
            self._check(vals)
        return vals

    def _check(self, vals: np.ndarray) -> None:
        bad = np.flatnonzero(~np.isfinite(vals))
        if bad.size:
            k = int(bad[0])
            raise SingularSpectrumError(
                f"{self.name}: e_{k} is singular (zero denominator or vanishing nonlinearity)"
            )

    def available(self, n_max: int) -> int:
        """Largest usable index <= n_max (tables have a finite length)."""
        if self.max_index is None:
            return n_max
        return min(n_max, self.max_index)

    def __call__(self, n: int) -> float:
        return eigenvalue(self, n)

    def dual(self) -> DualSpectrum:
        """The dual spectrum; one shared instance so its cache is reused."""
        with self._lock:
            if self._dual is None:
                self._dual = DualSpectrum(self)
            return self._dual

    def diagnostics(self, n_max: int) -> list[str]:
        """Extra notes for :func:`validate`; empty by default."""
        return []


class DualSpectrum(Spectrum):
    """Dual sequence eps_n = n**2 / e_n (eps_0 = 0) of a base spectrum."""

    def __init__(self, base: Spectrum):
        self.base = base
        super().__init__(
            f"dual({base.name})", self._dual_rule, base.params, max_index=base.max_index
        )

    def _dual_rule(self, n_max: int) -> np.ndarray:
        e = self.base.values(n_max, check=False)
        n = np.arange(n_max + 1, dtype=float)
        out = np.zeros(n_max + 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[1:] = n[1:] ** 2 / e[1:]
        out[1:][e[1:] == 0] = np.nan
        return out

    def _check(self, vals: np.ndarray) -> None:
        base_vals = self.base.values(vals.size - 1, check=False)
        zero = np.flatnonzero(base_vals[1:] == 0)
        if zero.size:
            raise SingularDualError(
                f"{self.base.name}: e_{int(zero[0]) + 1} = 0, dual eigenvalue undefined"
            )
        self.base._check(base_vals)
        super()._check(vals)

    def dual(self) -> Spectrum:
        return self.base

    def diagnostics(self, n_max: int) -> list[str]:
        return self.base.diagnostics(n_max)


# -- special functions -------------------------------------------------------


def laguerre_sequence(n_max: int, k: float, x: float) -> np.ndarray:
    """``[L_0^k(x), ..., L_{n_max}^k(x)]`` by the forward three-term recurrence."""
    n_max = int(n_max)
    out = np.empty(n_max + 1)
    out[0] = 1.0
    if n_max == 0:
        return out
    out[1] = 1.0 + k - x
    for m in range(1, n_max):
        out[m + 1] = ((2 * m + 1 + k - x) * out[m] - (m + k) * out[m - 1]) / (m + 1)
    return out


def laguerre(n: int, k: float, x: float) -> float:
    """Associated Laguerre polynomial L_n^k(x)."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    return float(laguerre_sequence(n, k, x)[n])


# -- built-in spectra --------------------------------------------------------


def harmonic() -> Spectrum:
    return Spectrum("harmonic", lambda n_max: np.arange(n_max + 1, dtype=float))


def _poschl_teller_rule(nu: float) -> Rule:
    def rule(n_max):
        n = np.arange(n_max + 1, dtype=float)
        return n * (n + nu)

    return rule


def poschl_teller(nu: float) -> Spectrum:
    """e_n = n (n + nu); nu <= 2 is accepted with a :class:`ParameterWarning`."""
    nu = float(nu)
    if not math.isfinite(nu):
        raise InvalidSpectrumError("nu must be finite")
    if nu <= 2:
        warnings.warn(
            f"Poschl-Teller nu={nu} violates nu > 2; computing anyway",
            ParameterWarning,
            stacklevel=2,
        )
    return Spectrum("poschl_teller", _poschl_teller_rule(nu), {"nu": nu})


def square_well() -> Spectrum:
    """Infinite square well: the nu = 2 member of the Poschl-Teller family."""
    return Spectrum("square_well", _poschl_teller_rule(2.0), {"nu": 2.0})


def hydrogen() -> Spectrum:
    """Hydrogen-like e_n = 1 - 1/(n+1)**2, written as n(n+2)/(n+1)**2."""

    def rule(n_max):
        n = np.arange(n_max + 1, dtype=float)
        return n * (n + 2) / (n + 1) ** 2

    return Spectrum("hydrogen", rule)


def _trapped_ion_f(eta: float, n_max: int) -> np.ndarray:
    x = eta * eta
    l1 = laguerre_sequence(n_max, 1, x)
    l0 = laguerre_sequence(n_max, 0, x)
    n = np.arange(n_max + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return l1 / ((n + 1) * l0)


def trapped_ion_nonlinearity(eta: float) -> Callable[[int], float]:
    """f(n) = L_n^1(eta^2) / ((n+1) L_n^0(eta^2)) as a scalar function."""
    eta = float(eta)

    def f(n: int) -> float:
        return float(_trapped_ion_f(eta, int(n))[int(n)])

    return f


class _TrappedIon(Spectrum):
    def __init__(self, eta: float):
        self.eta = eta
        super().__init__("trapped_ion", self._rule_impl, {"eta": eta})

    def _rule_impl(self, n_max):
        f = _trapped_ion_f(self.eta, n_max)
        n = np.arange(n_max + 1, dtype=float)
        e = n * f**2
        e[0] = 0.0
        return e

    def diagnostics(self, n_max):
        x = self.eta**2
        notes = []
        for k, label in ((0, "pole"), (1, "zero")):
            seq = laguerre_sequence(n_max, k, x)
            flips = np.flatnonzero(np.sign(seq[1:]) != np.sign(seq[:-1])) + 1
            if flips.size:
                shown = ", ".join(str(int(i)) for i in flips[:8])
                more = " ..." if flips.size > 8 else ""
                notes.append(
                    f"L_n^{k}(eta^2) changes sign before n = {shown}{more} "
                    f"(near-{label} of e_n)"
                )
        return notes


def trapped_ion(eta: float) -> Spectrum:
    """Center-of-mass motion of a trapped ion, e_n = n f(n)^2 with Lamb-Dicke eta.

    At eta = 0 this is exactly the harmonic spectrum.
    """
    eta = float(eta)
    if not math.isfinite(eta) or eta < 0:
        raise InvalidSpectrumError("eta must be finite and non-negative")
    return _TrappedIon(eta)


def table(values: Sequence[float], name: str = "table") -> Spectrum:
    """Spectrum given by an explicit list e_0, ..., e_M (e_0 must be 0)."""
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size < 2:
        raise InvalidSpectrumError("a table spectrum needs at least e_0 and e_1")
    if vals[0] != 0:
        raise InvalidSpectrumError(f"table spectrum must start with e_0 = 0, got {vals[0]}")
    frozen = vals.copy()

    def rule(n_max):
        return frozen[: n_max + 1].copy()

    return Spectrum(name, rule, max_index=vals.size - 1)


def spectrum_from_nonlinearity(
    f: Callable[[int], float], name: str = "nonlinear", params: Mapping[str, float] | None = None
) -> Spectrum:
    """Spectrum e_n = n f(n)^2 of a real nonlinearity function f (alpha = 0 case)."""

    def rule(n_max):
        e = np.zeros(n_max + 1)
        for n in range(1, n_max + 1):
            fn = float(f(n))
            e[n] = n * fn * fn if fn != 0 else np.nan
        return e

    return Spectrum(name, rule, params)


BUILTIN_KINDS = ("harmonic", "poschl_teller", "square_well", "hydrogen", "trapped_ion", "table")


def spectrum_from_config(cfg: Mapping) -> Spectrum:
    """Build a spectrum from ``{"kind": ..., "nu": ..., "eta": ..., "values": [...]}``."""
    if not isinstance(cfg, Mapping) or "kind" not in cfg:
        raise ConfigError("spectrum entry needs a 'kind'")
    kind = str(cfg["kind"]).replace("-", "_").lower()

    def need(key):
        if cfg.get(key) is None:
            raise ConfigError(f"spectrum kind '{kind}' requires '{key}'")
        try:
            return float(cfg[key])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"'{key}' must be a number, got {cfg[key]!r}") from exc

    if kind == "harmonic":
        return harmonic()
    if kind == "poschl_teller":
        return poschl_teller(need("nu"))
    if kind == "square_well":
        return square_well()
    if kind == "hydrogen":
        return hydrogen()
    if kind == "trapped_ion":
        return trapped_ion(need("eta"))
    if kind == "table":
        vals = cfg.get("values")
        if not isinstance(vals, Sequence) or isinstance(vals, str):
            raise ConfigError("table spectrum requires a list 'values'")
        try:
            floats = [float(v) for v in vals]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad table values: {exc}") from exc
        return table(floats)
    raise ConfigError(f"unknown spectrum kind '{cfg['kind']}' (expected one of {BUILTIN_KINDS})")


# -- scalar operations -------------------------------------------------------


def eigenvalue(s: Spectrum, n: int) -> float:
    if n < 0:
        raise ValueError("n must be non-negative")
    return float(s.values(n)[n])


def dual_eigenvalue(s: Spectrum, n: int) -> float:
    """eps_n = n^2 / e_n with eps_0 = 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 0.0
    e = eigenvalue(s, n)
    if e == 0:
        raise SingularDualError(f"{s.name}: e_{n} = 0, dual eigenvalue undefined")
    return n * n / e


def jackson_factorial_logs(s: Spectrum, n_max: int) -> np.ndarray:
    """Cumulative ``[ln [e_0]!, ..., ln [e_{n_max}]!]`` (first entry 0)."""
    e = s.values(n_max)
    bad = np.flatnonzero(e[1:] <= 0)
    if bad.size:
        k = int(bad[0]) + 1
        raise InvalidSpectrumError(f"{s.name}: e_{k} = {e[k]} <= 0, Jackson factorial undefined")
    out = np.zeros(n_max + 1)
    np.cumsum(np.log(e[1:]), out=out[1:])
    return out


def jackson_factorial_log(s: Spectrum, n: int) -> float:
    """ln [e_n]! = sum_{k=1}^n ln e_k; zero for n = 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return float(jackson_factorial_logs(s, n)[n])


# -- validation --------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    name: str
    n_max: int
    violations: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    first_non_monotonic: int | None = None
    params: Mapping[str, float] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        head = f"{self.name} {dict(self.params)} n_max={self.n_max}: "
        head += "valid" if self.valid else f"{len(self.violations)} violation(s)"
        return [head] + [f"  violation: {v}" for v in self.violations] + [
            f"  note: {n}" for n in self.notes
        ]


def validate(s: Spectrum, n_max: int) -> ValidationReport:
    """Check e_0 = 0, finiteness, positivity and strict growth on [0, n_max]."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    violations: list[str] = []
    notes: list[str] = []
    top = s.available(n_max)
    if top < n_max:
        violations.append(f"only tabulated up to n = {top}")
    vals = s.values(top, check=False)

    if vals[0] != 0:
        violations.append(f"e_0 = {vals[0]} (must be exactly 0)")
    nonfinite = np.flatnonzero(~np.isfinite(vals))
    if nonfinite.size:
        violations.append(f"non-finite e_n at n = {int(nonfinite[0])} ({nonfinite.size} total)")
    finite = np.isfinite(vals)
    nonpos = np.flatnonzero(finite[1:] & (vals[1:] <= 0)) + 1
    if nonpos.size:
        violations.append(f"e_n <= 0 at n = {int(nonpos[0])}")
    with np.errstate(invalid="ignore"):
        step = np.diff(vals)
    drops = np.flatnonzero(~(step > 0))
    first_drop = int(drops[0]) if drops.size else None
    if first_drop is not None:
        violations.append(
            f"not strictly increasing: e_{first_drop + 1} <= e_{first_drop} "
            f"({drops.size} drop(s) in range)"
        )

    nu = s.params.get("nu")
    if nu is not None and nu <= 2 and "poschl_teller" in s.name:
        notes.append(f"nu > 2 condition relaxed (nu = {nu:g})")
    notes.extend(s.diagnostics(top))
    return ValidationReport(
        name=s.name,
        n_max=n_max,
        violations=tuple(violations),
        notes=tuple(notes),
        first_non_monotonic=first_drop,
        params=dict(s.params),
    )
