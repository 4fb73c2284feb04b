"""Command-line front end.

    gksqueeze state  --spectrum harmonic --class I --r 1
    gksqueeze sweep  --spectrum trapped_ion --eta 0.7 --class IV --sweep-var r --range 0.1:2.5:25
    gksqueeze spectra --spectrum hydrogen --n-max 8
    gksqueeze verify

Exit codes: 0 ok, 1 verify failure, 2 config error, 3 divergent or
uncertified series, 4 invalid spectrum.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import (
    AsymptoticSeriesWarning,
    ConfigError,
    InvalidSpectrumError,
    ParameterWarning,
    SeriesError,
)
from .spectra import BUILTIN_KINDS, Spectrum, spectrum_from_config, validate
from .states import SqueezedParams, StateClass, TruncationPolicy, build_squeezed
from .stats import statistics

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_SERIES, EXIT_SPECTRUM = 0, 1, 2, 3, 4
SWEEP_VARS = ("r", "alpha", "eta")


def fmt(x: float) -> str:
    return format(x, ".17g")


@dataclass(frozen=True)
class SweepConfig:
    variable: str
    start: float
    stop: float
    steps: int
    spectrum: dict
    state_class: StateClass
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variable not in SWEEP_VARS:
            raise ConfigError(f"sweep variable must be one of {SWEEP_VARS}, got {self.variable!r}")
        if self.steps < 2:
            raise ConfigError("a sweep needs at least 2 steps")
        if not self.start < self.stop:
            raise ConfigError(f"sweep range needs start < stop, got {self.start}:{self.stop}")
        if self.variable in self.fixed:
            raise ConfigError(f"'{self.variable}' is swept and cannot also be fixed")
        if self.variable == "eta" and self.spectrum.get("kind") != "trapped_ion":
            raise ConfigError("sweeping eta requires the trapped_ion spectrum")

    def grid(self) -> list[float]:
        h = (self.stop - self.start) / (self.steps - 1)
        return [self.start + i * h for i in range(self.steps - 1)] + [self.stop]


def parse_range(text: str) -> tuple[float, float, int]:
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must look like a:b:n, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r}: {exc}") from exc


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        doc = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping")
    return doc


def _pick(args, cfg: dict, name: str, default=None):
    v = getattr(args, name, None)
    if v is not None:
        return v
    return cfg.get(name, default)


def _number(value, name: str) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'{name}' must be a number, got {value!r}") from exc
    if not math.isfinite(x):
        raise ConfigError(f"'{name}' must be finite")
    return x


def spectrum_spec(args, cfg: dict) -> dict:
    if not isinstance(cfg.get("spectrum", {}), (dict, type(None))):
        raise ConfigError("'spectrum' must be a mapping")
    spec = dict(cfg.get("spectrum") or {})
    if args.spectrum is not None:
        spec = {"kind": args.spectrum}
    for key in ("nu", "eta"):
        if getattr(args, key, None) is not None:
            spec[key] = getattr(args, key)
    spec.setdefault("kind", "harmonic")
    spec["kind"] = str(spec["kind"]).replace("-", "_").lower()
    if spec.get("eta") is not None and spec["kind"] != "trapped_ion":
        raise ConfigError("--eta only applies to the trapped_ion spectrum")
    return spec


def policy_from(args, cfg: dict) -> TruncationPolicy:
    kw = {}
    tol = _pick(args, cfg, "tol")
    if tol is not None:
        kw["tol"] = _number(tol, "tol")
    max_n = _pick(args, cfg, "max_n")
    if max_n is not None:
        kw["max_n"] = int(_number(max_n, "max_n"))
    try:
        return TruncationPolicy(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _params(r, phi, alpha) -> SqueezedParams:
    try:
        return SqueezedParams(r, phi, alpha)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _state_class(value) -> StateClass:
    try:
        return StateClass.parse(value)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


@contextlib.contextmanager
def _open_output(target: str | None):
    if target in (None, "-"):
        yield sys.stdout
    else:
        with open(target, "w", newline="") as fh:
            yield fh


# -- subcommands -------------------------------------------------------------


def cmd_state(args, cfg: dict) -> int:
    spectrum = spectrum_from_config(spectrum_spec(args, cfg))
    cls = _state_class(_pick(args, cfg, "cls", cfg.get("class", "I")))
    params = _params(
        _number(_pick(args, cfg, "r", 0.0), "r"),
        _number(_pick(args, cfg, "phi", 0.0), "phi"),
        _number(_pick(args, cfg, "alpha", 0.0), "alpha"),
    )
    forced = _pick(args, cfg, "force_truncate")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        st = build_squeezed(cls, spectrum, params, policy_from(args, cfg), force_truncate=forced)
    for w in caught:
        if issubclass(w.category, (ParameterWarning, AsymptoticSeriesWarning)):
            print(f"warning: {w.message}", file=sys.stderr)
    amps = st.amplitudes()
    with _open_output(args.output) as out:
        if st.forced:
            out.write(f"# truncated=forced N={st.truncation}\n")
        elif st.convergence.asymptotic:
            out.write(f"# truncated=asymptotic N={st.truncation}\n")
        out.write("n,re_c,im_c,P\n")
        for n, a in enumerate(amps):
            out.write(f"{n},{fmt(a.real)},{fmt(a.imag)},{fmt(abs(a) ** 2)}\n")
    return EXIT_OK


def _sweep_point(sc: SweepConfig, x: float, base: dict, policy: TruncationPolicy, forced):
    spec_cfg = dict(sc.spectrum)
    vals = dict(base)
    if sc.variable == "eta":
        spec_cfg["eta"] = x
    else:
        vals[sc.variable] = x
    try:
        st = build_squeezed(
            sc.state_class,
            spectrum_from_config(spec_cfg),
            SqueezedParams(vals["r"], vals["phi"], vals["alpha"]),
            policy,
            force_truncate=forced,
        )
    except (SeriesError, InvalidSpectrumError) as exc:
        msg = str(exc).replace(",", ";").replace("\n", " ")
        return f"{fmt(x)},,,,,,{type(exc).__name__}: {msg}"
    rep = statistics(st)
    q = "" if rep.Q is None else fmt(rep.Q)
    label = "forced" if st.forced else ("asymptotic" if st.convergence.asymptotic else "")
    return f"{fmt(x)},{q},{fmt(rep.var_x)},{fmt(rep.var_p)},{fmt(rep.mean_n)},{label},"


def sweep_config(args, cfg: dict) -> tuple[SweepConfig, dict]:
    scfg = cfg.get("sweep") or {}
    if not isinstance(scfg, dict):
        raise ConfigError("'sweep' must be a mapping")
    variable = args.sweep_var or scfg.get("variable")
    if variable is None:
        raise ConfigError("sweep needs --sweep-var (r, alpha or eta)")
    rng = args.range or scfg.get("range")
    if rng is None:
        raise ConfigError("sweep needs --range a:b:n")
    if isinstance(rng, (list, tuple)):
        if len(rng) != 3:
            raise ConfigError("range list must be [start, stop, steps]")
        start, stop, steps = _number(rng[0], "start"), _number(rng[1], "stop"), int(rng[2])
    else:
        start, stop, steps = parse_range(rng)
    fixed = {}
    for key in ("r", "phi", "alpha"):
        v = getattr(args, key, None)
        if v is None:
            v = cfg.get(key)
        if v is not None:
            fixed[key] = _number(v, key)
    spec = spectrum_spec(args, cfg)
    if variable == "eta":
        spec.pop("eta", None)
    sc = SweepConfig(
        variable=variable,
        start=start,
        stop=stop,
        steps=steps,
        spectrum=spec,
        state_class=_state_class(_pick(args, cfg, "cls", cfg.get("class", "I"))),
        fixed=fixed,
    )
    base = {"r": 0.0, "phi": 0.0, "alpha": 0.0, **fixed}
    return sc, base


def cmd_sweep(args, cfg: dict) -> int:
    sc, base = sweep_config(args, cfg)
    if sc.variable != "eta":
        spectrum_from_config(sc.spectrum)  # fail fast on a bad fixed spectrum
    policy = policy_from(args, cfg)
    forced = _pick(args, cfg, "force_truncate")
    grid = sc.grid()
    jobs = max(1, int(_pick(args, cfg, "jobs", 1)))
    # warning filters are process-global, so set them once outside the workers
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if jobs == 1:
            rows = [_sweep_point(sc, x, base, policy, forced) for x in grid]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(lambda x: _sweep_point(sc, x, base, policy, forced), grid))
    with _open_output(args.output) as out:
        if forced is not None:
            out.write(f"# truncated=forced N={forced}\n")
        out.write("x,Q,var_x,var_p,mean_n,truncation,error\n")
        for row in rows:
            out.write(row + "\n")
    return EXIT_OK


def cmd_spectra(args, cfg: dict) -> int:
    n_max = int(args.n_max)
    if args.spectrum is None and not cfg.get("spectrum"):
        with _open_output(args.output) as out:
            out.write("kind,params\n")
            for kind in BUILTIN_KINDS:
                need = {"poschl_teller": "nu", "trapped_ion": "eta", "table": "values"}.get(kind, "")
                out.write(f"{kind},{need}\n")
        return EXIT_OK
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spectrum: Spectrum = spectrum_from_config(spectrum_spec(args, cfg))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    report = validate(spectrum, n_max)
    top = min(n_max, spectrum.available(n_max))
    e = spectrum.values(top, check=False)
    with _open_output(args.output) as out:
        for line in report.lines():
            out.write(f"# {line}\n")
        out.write("n,e_n,eps_n\n")
        for n in range(top + 1):
            eps = 0.0 if n == 0 else (n * n / e[n] if e[n] != 0 else math.nan)
            out.write(f"{n},{fmt(e[n])},{fmt(eps)}\n")
    return EXIT_OK if report.valid else EXIT_SPECTRUM


def cmd_verify(args, cfg: dict) -> int:
    from .acceptance import run_all

    results = run_all(policy_from(args, cfg))
    with _open_output(args.output) as out:
        for res in results:
            out.write(res.line() + "\n")
            for d in res.details:
                out.write(f"    {d}\n")
        n_pass = sum(r.passed for r in results)
        out.write(f"{n_pass}/{len(results)} criteria pass\n")
    return EXIT_OK if n_pass == len(results) else EXIT_FAIL


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML/JSON document with spectrum and sweep settings")
    common.add_argument("--spectrum", choices=BUILTIN_KINDS)
    common.add_argument("--nu", type=float, help="Poschl-Teller parameter")
    common.add_argument("--eta", type=float, help="Lamb-Dicke parameter (trapped ion)")
    common.add_argument("--class", dest="cls", help="state class I, II, III or IV")
    common.add_argument("--r", type=float, help="squeezing amplitude |xi|")
    common.add_argument("--phi", type=float, help="squeezing phase arg xi (default 0)")
    common.add_argument("--alpha", type=float, help="time-like parameter (default 0)")
    common.add_argument("--tol", type=float, help="relative tail tolerance")
    common.add_argument("--max-n", dest="max_n", type=int, help="hard cap on series index")
    common.add_argument(
        "--force-truncate",
        dest="force_truncate",
        type=int,
        metavar="N",
        help="truncate at N even if the series diverges (output is labelled)",
    )
    common.add_argument("--output", default="-", help="output path, '-' for stdout")

    p = argparse.ArgumentParser(prog="gksqueeze", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("state", parents=[common], help="Fock coefficients and P(n) as CSV")
    sw = sub.add_parser("sweep", parents=[common], help="statistics over a parameter grid")
    sw.add_argument("--sweep-var", dest="sweep_var", choices=SWEEP_VARS)
    sw.add_argument("--range", help="start:stop:steps")
    sw.add_argument("--jobs", type=int, help="worker threads (row order is preserved)")
    sp = sub.add_parser("spectra", parents=[common], help="list or validate spectra")
    sp.add_argument("--n-max", dest="n_max", type=int, default=10)
    sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    return p


COMMANDS = {"state": cmd_state, "sweep": cmd_sweep, "spectra": cmd_spectra, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvalidSpectrumError as exc:
        print(f"invalid spectrum: {exc}", file=sys.stderr)
        return EXIT_SPECTRUM
    except SeriesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SERIES
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
