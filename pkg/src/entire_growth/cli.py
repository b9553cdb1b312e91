"""Command-line front end: config-driven analyses with CSV reports.

The config is INI-style text, one section per function spec:

    [exp_demo]
    family = exp
    analyses = coeff_bound, tauberian
    n_grid = 1:200
    r_grid = 2.718281828459045, 7.389056098930650

Each analysis writes one CSV under <out>/<section>/; a MANIFEST at the
output root lists every file with its sha-256 and row count, and
summary.txt carries the headline numbers.  Identical configs produce
byte-identical trees: floats are printed with 17 significant digits and
files use '\n' line endings.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import bounds, entire, multivar, probgen, scales
from .errors import ConfigError, EntireGrowthError

_FAMILIES = ("exp", "power_order", "log_power_growth", "double_exp",
             "custom_coeff_csv", "poisson", "factorized")

_ANALYSES = ("coeff_bound", "tauberian", "upper_bound", "gamma",
             "example_31", "example_32", "example_33", "order_type",
             "factorized")


def _fmt(x) -> str:
    """Fixed float formatting: 17 significant digits, '.' separator."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _write_csv(path: str, header: List[str], rows: List[List]) -> int:
    """Write a CSV with '\n' endings; returns the data row count."""
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join("" if v is None else
                              (v if isinstance(v, str) else _fmt(v))
                              for v in row) + "\n")
    return len(rows)


def _parse_floats(text: str) -> np.ndarray:
    """Grid syntax: 'a, b, c' literal values or 'lo:hi:count' linspace."""
    text = text.strip()
    if ":" in text and "," not in text:
        lo, hi, count = text.split(":")
        return np.linspace(float(lo), float(hi), int(count))
    return np.asarray([float(t) for t in text.split(",") if t.strip()])


def _parse_ints(text: str) -> np.ndarray:
    """Grid syntax: 'a, b, c' literal values or 'lo:hi' inclusive range."""
    text = text.strip()
    if ":" in text and "," not in text:
        lo, hi = text.split(":")
        return np.arange(int(lo), int(hi) + 1)
    return np.asarray([int(t) for t in text.split(",") if t.strip()])


class FunctionSpec:
    """One parsed config section: a family plus its analysis requests."""

    def __init__(self, name: str, section, config_dir: str):
        self.name = name
        self.family = section.get("family", "").strip()
        if self.family not in _FAMILIES:
            raise ConfigError(f"[{name}] unknown family {self.family!r}")
        self.analyses = [a.strip() for a in section.get("analyses", "").split(",")
                         if a.strip()]
        if not self.analyses:
            raise ConfigError(f"[{name}] no analyses requested")
        for a in self.analyses:
            if a not in _ANALYSES:
                raise ConfigError(f"[{name}] unknown analysis {a!r}")
        self.params = dict(section)
        self.config_dir = config_dir
        self.n_grid = _parse_ints(section.get("n_grid", "1:200"))
        self.r_grid = _parse_floats(section.get("r_grid",
                                                "2.718281828459045,7.389056098930650,"
                                                "20.085536923187668,54.598150033144236"))
        self.v_grid = _parse_floats(section.get("v_grid", "0.5:4.0:8"))
        self.eps0 = float(section.get("eps0", "0.5"))
        self.n_min = int(section.get("n_min", "100"))
        self.n_max = int(section.get("n_max", "1000"))
        self.parts = [p.strip() for p in section.get("parts", "").split(",")
                      if p.strip()]
        self._validate()

    def _validate(self) -> None:
        fam, p = self.family, self.params
        need = {"power_order": ["rho"], "log_power_growth": ["m"],
                "double_exp": [], "custom_coeff_csv": ["path"],
                "poisson": ["lam"], "factorized": ["parts"]}.get(fam, [])
        for key in need:
            if key not in p or not p[key].strip():
                raise ConfigError(f"[{self.name}] family {fam} needs key {key!r}")
        if fam == "custom_coeff_csv":
            path = os.path.join(self.config_dir, p["path"])
            if not os.path.exists(path):
                raise ConfigError(f"[{self.name}] coefficient file not found: {path}")
        allowed = self._allowed_analyses()
        for a in self.analyses:
            if a not in allowed:
                raise ConfigError(
                    f"[{self.name}] analysis {a!r} unsupported for family {fam}")

    def _allowed_analyses(self) -> Tuple[str, ...]:
        common = ("upper_bound", "gamma")
        return {
            "exp": ("coeff_bound", "tauberian", "order_type") + common,
            "power_order": ("coeff_bound", "tauberian", "example_32",
                            "order_type") + common,
            "log_power_growth": ("example_31",) + common,
            "double_exp": ("example_33",) + common,
            "custom_coeff_csv": ("coeff_bound", "tauberian", "order_type") + common,
            "poisson": ("coeff_bound", "tauberian") + common,
            "factorized": ("factorized",),
        }[self.family]

    # --- family model construction -------------------------------------

    def coefficients(self) -> entire.CoefficientSequence:
        fam, p = self.family, self.params
        if fam == "exp":
            return entire.exp_coefficients()
        if fam == "power_order":
            return entire.gamma_order_coefficients(float(p["rho"]),
                                                   float(p.get("c", "1.0")))
        if fam == "custom_coeff_csv":
            return entire.coefficients_from_csv(
                os.path.join(self.config_dir, p["path"]), name=self.name)
        if fam == "poisson":
            return probgen.poisson(float(p["lam"])).as_coefficients()
        raise ConfigError(f"[{self.name}] family {fam} has no coefficient model")

    def growth(self) -> bounds.GrowthFunction:
        fam, p = self.family, self.params
        if fam == "exp":
            return bounds.power_of_exp(C=1.0, rho=1.0)
        if fam == "power_order":
            return bounds.power_of_exp(C=float(p.get("c", "1.0")),
                                       rho=float(p["rho"]))
        if fam == "log_power_growth":
            return bounds.power_log(C=float(p.get("c", "1.0")), m=float(p["m"]))
        if fam == "double_exp":
            return bounds.exp_of_exp(C5=float(p.get("c5", "1.0")),
                                     C6=float(p.get("c6", "1.0")))
        if fam == "poisson":
            return probgen.poisson_growth(float(p["lam"]))
        return multivar.growth_of(self.coefficients(), name=self.name)

    def decay(self) -> bounds.GrowthFunction:
        """Decay profile Q(n) = -ln|c_n|, or the growth conjugate if no
        coefficient model exists."""
        if self.family in ("log_power_growth", "double_exp"):
            return self.growth().conjugate()
        f = self.coefficients()

        def q(ns):
            return -f.log_abs_array(np.maximum(np.asarray(ns, float), 0.0))

        return bounds.GrowthFunction(f"decay({self.name})", q, domain_min=0.0)


# --- analyses ----------------------------------------------------------


def _run_coeff_bound(spec: FunctionSpec, ctx) -> Tuple[List[str], List[List], List[str]]:
    f = spec.coefficients()
    Lam = spec.growth()
    la = f.log_abs_array(spec.n_grid)
    bnd = bounds.coeff_upper_bound_many(Lam, spec.n_grid)
    rows = [[int(n), lav, bv, bv - lav]
            for n, lav, bv in zip(spec.n_grid, la, bnd)]
    worst = float(np.min(bnd - la))
    return (["n", "ln_abs_c", "log_bound", "slack"], rows,
            [f"coeff_bound: min slack {_fmt(worst)} over n in "
             f"[{spec.n_grid[0]}, {spec.n_grid[-1]}]"])


def _run_tauberian(spec: FunctionSpec, ctx) -> Tuple[List[str], List[List], List[str]]:
    Lam = spec.growth()
    if spec.family == "poisson":
        rep = probgen.prob_tauberian_report(
            probgen.poisson(float(spec.params["lam"])), Lam,
            spec.r_grid, spec.n_grid)
    else:
        rep = bounds.tauberian_report(spec.coefficients(), Lam,
                                      spec.r_grid, spec.n_grid)
    rows = []
    n_rows = max(rep.r_grid.size, rep.n_grid.size)
    for i in range(n_rows):
        rows.append([
            _fmt(rep.r_grid[i]) if i < rep.r_grid.size else "",
            _fmt(rep.lhs_ratios[i]) if i < rep.r_grid.size else "",
            str(int(rep.n_grid[i])) if i < rep.n_grid.size else "",
            _fmt(rep.rhs_ratios[i]) if i < rep.n_grid.size else "",
        ])
    return (["r", "lhs_ratio", "n", "rhs_ratio"], rows,
            [f"tauberian: terminal lhs {_fmt(rep.terminal_lhs)}, "
             f"terminal rhs {_fmt(rep.terminal_rhs)}, "
             f"gap {_fmt(rep.terminal_gap)}"])


def _run_upper_bound(spec: FunctionSpec, ctx):
    Q = spec.decay()
    rows, notes = [], []
    eps_rows = None
    for v in spec.v_grid:
        b, rep = bounds.max_function_upper_bound(Q, float(v),
                                                 eps_points=ctx.eps_points)
        rows.append([v, b, rep.eps_star, rep.c_eff, rep.S0])
        eps_rows = rep
    notes.append(f"upper_bound: bound {_fmt(rows[-1][1])} at "
                 f"v={_fmt(spec.v_grid[-1])}, eps* {_fmt(eps_rows.eps_star)}")
    extra = (["eps", "ln_k", "ln_u", "ln_y"],
             [[e, k, u, y] for e, k, u, y in
              zip(eps_rows.eps_grid, eps_rows.K_vals,
                  eps_rows.U_vals, eps_rows.Y_vals)])
    return (["v", "log_bound", "eps_star", "c_eff", "s0"], rows, notes, extra)


def _run_gamma(spec: FunctionSpec, ctx):
    rep = bounds.gamma_condition(spec.growth(), spec.eps0, spec.v_grid)
    rows = [[v, r] for v, r in zip(rep.v_grid, rep.ratios)]
    return (["v", "ratio"], rows,
            [f"gamma: estimate {_fmt(rep.gamma_estimate)}, "
             f"holds {str(rep.holds).lower()}"])


def _run_example_31(spec: FunctionSpec, ctx):
    m = float(spec.params["m"])
    c = float(spec.params.get("c", "1.0"))
    rep = scales.example_31_check(m, c, spec.n_grid[spec.n_grid >= 2])
    rows = [[int(n), ls, ce, rep.exponent_fit]
            for n, ls, ce in zip(rep.n_grid, rep.lam_star, rep.constant_estimates)]
    return (["n", "conj_value", "constant_estimate", "exponent_fit"], rows,
            [f"example_31: exponent fit {_fmt(rep.exponent_fit)} "
             f"(conjugate exponent {_fmt(m / (m - 1.0))}), "
             f"constant {_fmt(rep.constant_estimate)}"])


def _run_example_32(spec: FunctionSpec, ctx):
    rho = float(spec.params["rho"])
    c4 = float(spec.params.get("c", "1.0"))
    f = spec.coefficients()
    rows = []
    worst = math.inf
    for n in spec.n_grid:
        la = f.log_abs(int(n))
        b = scales.example_32_bound(rho, c4, int(n))
        rows.append([int(n), la, b, b - la])
        if math.isfinite(la):
            worst = min(worst, b - la)
    return (["n", "ln_abs_c", "log_bound", "slack"], rows,
            [f"example_32: min slack {_fmt(worst)}"])


def _run_example_33(spec: FunctionSpec, ctx):
    c5 = float(spec.params.get("c5", "1.0"))
    c6 = float(spec.params.get("c6", "1.0"))
    c7 = float(spec.params.get("c7", "1.0"))
    grid = spec.n_grid[spec.n_grid >= 3]
    rep = scales.example_33_check(c5, c6, c7, grid)
    rows = [[int(n), ls, ld, rt] for n, ls, ld, rt in
            zip(rep.n_grid, rep.lam_star, rep.leading, rep.ratios)]
    return (["n", "conj_value", "leading_term", "ratio"], rows,
            [f"example_33: terminal leading-term ratio {_fmt(rep.ratios[-1])}"])


def _run_order_type(spec: FunctionSpec, ctx):
    f = spec.coefficients()
    order = entire.order_estimate(f, spec.n_min, spec.n_max)
    rows = [["order", order.value]]
    notes = [f"order_type: order estimate {_fmt(order.value)}"]
    rho = spec.params.get("rho")
    rho = float(rho) if rho else 1.0
    typ = entire.type_estimate(f, rho, spec.n_min, spec.n_max)
    rows.append(["type", typ.value])
    notes.append(f"order_type: type estimate {_fmt(typ.value)} (rho={_fmt(rho)})")
    return (["quantity", "value"], rows, notes)


def _run_factorized(spec: FunctionSpec, ctx, others: Dict[str, "FunctionSpec"]):
    if len(spec.parts) != 2:
        raise ConfigError(f"[{spec.name}] factorized needs exactly two parts")
    try:
        s1, s2 = (others[p] for p in spec.parts)
    except KeyError as exc:
        raise ConfigError(f"[{spec.name}] unknown part section {exc}")
    r1, r2 = (spec.r_grid[0], spec.r_grid[min(1, spec.r_grid.size - 1)])
    rep = multivar.factorizable_demo(s1.coefficients(), s2.coefficients(),
                                     float(r1), float(r2),
                                     s1.growth(), s2.growth(),
                                     k_grid=spec.n_grid[:50],
                                     l_grid=spec.n_grid[:50])
    rows = [["log_max_product", rep.log_max_product],
            ["log_max_factor_1", rep.log_max_factors[0]],
            ["log_max_factor_2", rep.log_max_factors[1]],
            ["residual", rep.residual],
            ["bound_holds", 1 if rep.bound_holds else 0]]
    return (["quantity", "value"], rows,
            [f"factorized: residual {_fmt(rep.residual)}, "
             f"coefficient bounds hold {str(rep.bound_holds).lower()}"])


class _Ctx:
    def __init__(self, max_terms: int, eps_points: int):
        self.max_terms = max_terms
        self.eps_points = eps_points


def _run_spec(spec: FunctionSpec, specs: Dict[str, FunctionSpec], ctx: _Ctx):
    """Run all analyses of one section.  Returns (artifacts, notes, error).

    artifacts: list of (relative path, header, rows) completed before any
    failure, so partial results can still be flushed.
    """
    artifacts, notes = [], []
    for analysis in spec.analyses:
        try:
            if analysis == "upper_bound":
                header, rows, nts, extra = _run_upper_bound(spec, ctx)
                artifacts.append((f"{spec.name}/epsilon_report.csv",) + extra)
            elif analysis == "factorized":
                header, rows, nts = _run_factorized(spec, ctx, specs)
            else:
                fn = {"coeff_bound": _run_coeff_bound,
                      "tauberian": _run_tauberian,
                      "gamma": _run_gamma,
                      "example_31": _run_example_31,
                      "example_32": _run_example_32,
                      "example_33": _run_example_33,
                      "order_type": _run_order_type}[analysis]
                header, rows, nts = fn(spec, ctx)
        except EntireGrowthError as exc:
            return artifacts, notes, f"[{spec.name}] {analysis}: {exc}"
        artifacts.append((f"{spec.name}/{analysis}.csv", header, rows))
        notes.extend(nts)
    return artifacts, notes, None


def _thread_count() -> int:
    raw = os.environ.get("ENTIRE_GROWTH_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return max(1, n)


def run(config_path: str, output_dir: str, quiet: bool = False,
        max_terms: int = entire.DEFAULT_MAX_TERMS,
        eps_points: int = bounds.DEFAULT_EPS_POINTS) -> int:
    """Execute a config; returns the process exit status (0, 2 or 3)."""
    parser = configparser.ConfigParser()
    try:
        with open(config_path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        loc = f" line {line}" if line else ""
        print(f"config error{loc}: {exc.message}", file=sys.stderr)
        return 2

    config_dir = os.path.dirname(os.path.abspath(config_path))
    try:
        specs = {name: FunctionSpec(name, parser[name], config_dir)
                 for name in parser.sections()}
        if not specs:
            raise ConfigError("config defines no sections")
        for spec in specs.values():
            if spec.family == "factorized":
                if len(spec.parts) != 2:
                    raise ConfigError(
                        f"[{spec.name}] factorized needs exactly two parts")
                for part in spec.parts:
                    if part not in specs:
                        raise ConfigError(
                            f"[{spec.name}] unknown part section {part!r}")
    except ConfigError as exc:
        loc = f" line {exc.line}" if exc.line else ""
        print(f"config error{loc}: {exc}", file=sys.stderr)
        return 2

    ctx = _Ctx(max_terms, eps_points)
    names = list(specs)
    workers = min(_thread_count(), len(names))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda n: _run_spec(specs[n], specs, ctx),
                                    names))
    else:
        results = [_run_spec(specs[n], specs, ctx) for n in names]

    os.makedirs(output_dir, exist_ok=True)
    manifest, summary, errors = [], [], []
    for name, (artifacts, notes, error) in zip(names, results):
        for relpath, header, rows in artifacts:
            count = _write_csv(os.path.join(output_dir, relpath), header, rows)
            digest = hashlib.sha256(
                open(os.path.join(output_dir, relpath), "rb").read()).hexdigest()
            manifest.append((relpath, digest, count))
        summary.extend(f"[{name}] {note}" for note in notes)
        if error:
            errors.append(error)

    with open(os.path.join(output_dir, "summary.txt"), "w", newline="\n") as fh:
        for line in summary:
            fh.write(line + "\n")
        for err in errors:
            fh.write(f"ERROR {err}\n")
    with open(os.path.join(output_dir, "MANIFEST"), "w", newline="\n") as fh:
        for relpath, digest, count in manifest:
            fh.write(f"{relpath},{digest},{count}\n")

    if not quiet:
        for line in summary:
            print(line)
    for err in errors:
        print(f"error: {err}", file=sys.stderr)
    return 3 if errors else 0


def main(argv: Optional[List[str]] = None) -> int:
    ap = argparse.ArgumentParser(
        prog="entire-growth",
        description="Bilateral growth/decay estimates for entire functions.")
    ap.add_argument("--config", required=True, metavar="PATH",
                    help="INI-style config, one section per function spec")
    ap.add_argument("--out", required=True, metavar="DIR",
                    help="output directory for CSV reports")
    ap.add_argument("--quiet", action="store_true",
                    help="suppress the summary on stdout")
    ap.add_argument("--max-terms", type=int, default=entire.DEFAULT_MAX_TERMS,
                    metavar="N", help="series truncation cap")
    ap.add_argument("--eps-points", type=int, default=bounds.DEFAULT_EPS_POINTS,
                    metavar="N", help="epsilon grid resolution for bounds")
    args = ap.parse_args(argv)
    return run(args.config, args.out, quiet=args.quiet,
               max_terms=args.max_terms, eps_points=args.eps_points)


if __name__ == "__main__":
    sys.exit(main())
