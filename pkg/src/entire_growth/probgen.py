"""Integer-valued random variables, generating functions, and the
probabilistic Tauberian diagnostics.

The generating function E z^xi is the power series with probability masses
as coefficients, so the whole growth/decay machinery applies verbatim when
the law is light-tailed enough for the series to be entire.  Heavy-tailed
laws (geometric) have a finite radius of convergence and are refused by the
Tauberian report rather than silently truncated.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln, logsumexp

from .bounds import GrowthFunction, TauberianReport, tauberian_report
from .entire import CoefficientSequence, ZERO
from .errors import DivergenceError, InputError, NotEntireError

_MASS_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteDistribution:
    """Law of a nonnegative integer random variable via log masses."""

    name: str
    log_mass_fn: Callable[[np.ndarray], np.ndarray]
    entire: bool
    radius: float = math.inf
    max_support: Optional[int] = None

    def log_mass(self, k: int) -> float:
        if k < 0:
            raise InputError("support index must be >= 0")
        if self.max_support is not None and k > self.max_support:
            return ZERO
        return float(self.log_mass_fn(np.asarray([k], dtype=float))[0])

    def log_mass_array(self, ks) -> np.ndarray:
        ks = np.asarray(ks, dtype=float)
        out = np.asarray(self.log_mass_fn(ks), dtype=float)
        if self.max_support is not None:
            out = np.where(ks > self.max_support, ZERO, out)
        return out

    def as_coefficients(self) -> CoefficientSequence:
        return CoefficientSequence(self.name, self.log_mass_array,
                                   sign_nonnegative=True,
                                   max_index=self.max_support)


def poisson(lam: float) -> DiscreteDistribution:
    """Poisson(lambda): entire generating function exp(lambda (z - 1))."""
    if lam <= 0:
        raise InputError("lambda must be positive")

    def lm(k):
        k = np.asarray(k, dtype=float)
        return -lam + k * math.log(lam) - gammaln(k + 1.0)

    return DiscreteDistribution(f"poisson(lam={lam:g})", lm, entire=True)


def poisson_growth(lam: float) -> GrowthFunction:
    """Closed-form growth profile of the Poisson g.f.: lambda (e^v - 1)."""
    return GrowthFunction(f"poisson_growth(lam={lam:g})",
                          lambda v: lam * (np.exp(np.asarray(v, float)) - 1.0))


def geometric(p: float) -> DiscreteDistribution:
    """Geometric(p) on {0, 1, ...}: masses (1-p) p^k; radius 1/p, not entire."""
    if not 0 < p < 1:
        raise InputError("p must lie in (0, 1)")

    def lm(k):
        k = np.asarray(k, dtype=float)
        return math.log1p(-p) + k * math.log(p)

    return DiscreteDistribution(f"geometric(p={p:g})", lm, entire=False, radius=1.0 / p)


def degenerate(k0: int) -> DiscreteDistribution:
    """Point mass at k0."""
    if k0 < 0:
        raise InputError("k0 must be >= 0")

    def lm(k):
        k = np.asarray(k, dtype=float)
        return np.where(k == k0, 0.0, ZERO)

    return DiscreteDistribution(f"degenerate(k={k0})", lm, entire=True, max_support=k0)


def distribution_from_csv(path, name: Optional[str] = None) -> DiscreteDistribution:
    """Load a mass table: CSV columns (k, ln_mass), "ZERO" allowed.

    Normalization sum_k P = 1 is checked to 1e-12 by direct summation.
    """
    entries = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().lower() in ("k", ""):
                continue
            k = int(row[0])
            v = row[1].strip()
            entries[k] = ZERO if v.upper() == "ZERO" else float(v)
    if not entries:
        raise InputError(f"no mass rows in {path}")
    top = max(entries)
    vals = np.full(top + 1, ZERO)
    for k, v in entries.items():
        vals[k] = v
    total = float(np.exp(logsumexp(vals[np.isfinite(vals)])))
    if abs(total - 1.0) > _MASS_TOL:
        raise InputError(f"masses in {path} sum to {total}, not 1")

    def lm(ks):
        ks = np.asarray(ks, dtype=float)
        idx = np.clip(ks.astype(int), 0, top)
        return np.where(ks <= top, vals[idx], ZERO)

    return DiscreteDistribution(name or str(path), lm, entire=True, max_support=top)


def generating_function_log(dist: DiscreteDistribution, r: float,
                            max_terms: int = 10 ** 6) -> float:
    """ln E r^xi = ln sum_k P(xi = k) r^k.

    Coefficients are nonnegative, so this is exactly ln M_g(r).  Radii at or
    beyond the convergence radius raise (geometric-type laws).
    """
    if r <= 0:
        raise InputError("r must be positive")
    if r >= dist.radius:
        raise DivergenceError(
            f"{dist.name}: series diverges at r={r} (radius {dist.radius})")
    lr = math.log(r)
    n_max = dist.max_support if dist.max_support is not None else max_terms
    ks = np.arange(0, n_max + 1, dtype=float)
    if ks.size <= 300_000:
        t = dist.log_mass_array(ks) + ks * lr
        t = t[np.isfinite(t)]
        return float(logsumexp(t)) if t.size else -math.inf
    # stream in blocks with the usual tail rule
    total = -math.inf
    run = 0
    n = 0
    while n <= n_max:
        ns = np.arange(n, min(n + 1024, n_max + 1), dtype=float)
        t = dist.log_mass_array(ns) + ns * lr
        finite = t[np.isfinite(t)]
        if finite.size:
            m = max(total, float(np.max(finite)))
            total = m + math.log(math.exp(total - m) + float(np.sum(np.exp(finite - m))))
        for term in t:
            run = run + 1 if term < total - 45.0 else 0
        if run >= 50:
            return total
        n += 1024
    return total


def prob_tauberian_report(dist: DiscreteDistribution, LambdaP: GrowthFunction,
                          r_grid, n_grid) -> TauberianReport:
    """Tauberian ratio diagnostics with the mass sequence as coefficients."""
    if not dist.entire:
        raise NotEntireError(f"{dist.name}: generating function is not entire")
    return tauberian_report(dist.as_coefficients(), LambdaP, r_grid, n_grid)
