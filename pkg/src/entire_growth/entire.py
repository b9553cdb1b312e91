"""Entire functions modeled by Taylor-coefficient rules.

Coefficients are handled in the log domain: an accessor returns ln|c_n|,
with -inf (the ZERO marker) standing in for vanishing coefficients.  The
maximal function is evaluated through the coefficient-sum upper bound
ln sum_n |c_n| r^n, which is exact for nonnegative coefficients.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln

from .errors import (
    InputError,
    NotEntireError,
    TruncationError,
    UndefinedOrderError,
)

#: log-domain marker for a vanishing coefficient (ln 0)
ZERO = float("-inf")

# series truncation: stop once this many consecutive terms fall below the
# running log-sum by more than _TAIL_LOG (relative tail < e^-45)
_TAIL_RUN = 50
_TAIL_LOG = 45.0
DEFAULT_MAX_TERMS = 10 ** 6


@dataclass(frozen=True)
class CoefficientSequence:
    """Rule or table producing ln|c_n| for each index n."""

    name: str
    log_abs_fn: Callable[[np.ndarray], np.ndarray]
    sign_nonnegative: bool = True
    max_index: Optional[int] = None
    _entire_checked: list = field(default_factory=list, repr=False, compare=False)

    def log_abs(self, n: int) -> float:
        """ln|c_n|, or ZERO (-inf) for a vanishing coefficient."""
        if n < 0:
            raise InputError("coefficient index must be >= 0")
        if self.max_index is not None and n > self.max_index:
            return ZERO
        return float(self.log_abs_fn(np.asarray([n], dtype=float))[0])

    def log_abs_array(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=float)
        if np.any(ns < 0):
            raise InputError("coefficient indices must be >= 0")
        out = np.asarray(self.log_abs_fn(ns), dtype=float)
        if self.max_index is not None:
            out = np.where(ns > self.max_index, ZERO, out)
        return out

    @property
    def is_polynomial(self) -> bool:
        return self.max_index is not None

    def assert_entire(self, n0: int = 16, n1: int = 2048) -> None:
        """Numerical radius-of-convergence check on the available range.

        Requires (1/n) ln|c_n| to trend down (toward -inf) past n0.
        Polynomials are entire by definition and skip the trend check.
        """
        if self._entire_checked:
            if self._entire_checked[0]:
                return
            raise NotEntireError(f"{self.name}: fails entirety trend check")
        ok = True
        if not self.is_polynomial:
            ns = np.arange(n0, n1 + 1)
            la = self.log_abs_array(ns)
            finite = np.isfinite(la)
            if np.count_nonzero(finite) >= 8:
                ratio = la[finite] / ns[finite]
                k = ratio.size // 4
                ok = (np.mean(ratio[-k:]) < np.mean(ratio[:k])) and ratio[-1] < 0
        self._entire_checked.append(ok)
        if not ok:
            raise NotEntireError(f"{self.name}: fails entirety trend check")


def exp_coefficients() -> CoefficientSequence:
    """c_n = 1/n!, the exponential function."""
    return CoefficientSequence("exp", lambda n: -gammaln(n + 1.0))


def gamma_order_coefficients(rho: float, c4: float = 1.0) -> CoefficientSequence:
    """c_n = (C4*rho/e)^{n/rho} ... simplified to c_n = 1/Gamma(n/rho + 1).

    Order-rho model matching ln M(r) ~ C4 r^rho for C4 = 1 (Mittag-Leffler
    style coefficients).
    """
    if rho <= 0:
        raise InputError("rho must be positive")
    return CoefficientSequence(f"gamma_order(rho={rho:g})",
                               lambda n: -gammaln(n / rho + 1.0))


def power_decay_coefficients(alpha: float) -> CoefficientSequence:
    """c_0 = 1 and c_n = n^(-alpha*n) for n >= 1."""
    if alpha <= 0:
        raise InputError("alpha must be positive")

    def la(n):
        n = np.asarray(n, dtype=float)
        return np.where(n > 0, -alpha * n * np.log(np.maximum(n, 1.0)), 0.0)

    return CoefficientSequence(f"power_decay(alpha={alpha:g})", la)


def gaussian_coefficients(a: float = 1.0) -> CoefficientSequence:
    """c_n = exp(-a*n^2)."""
    if a <= 0:
        raise InputError("a must be positive")
    return CoefficientSequence(f"gaussian(a={a:g})", lambda n: -a * np.asarray(n, float) ** 2)


def table_coefficients(log_abs_values, name: str = "table",
                       sign_nonnegative: bool = True) -> CoefficientSequence:
    """Finite table of ln|c_n| values, n = 0..len-1; ZERO marks gaps."""
    vals = np.asarray(log_abs_values, dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise InputError("table must be a nonempty 1-D sequence")

    def la(n):
        n = np.asarray(n, dtype=float)
        idx = np.clip(n.astype(int), 0, vals.size - 1)
        return np.where(n < vals.size, vals[idx], ZERO)

    return CoefficientSequence(name, la, sign_nonnegative=sign_nonnegative,
                               max_index=vals.size - 1)


def polynomial_coefficients(coeffs, name: str = "polynomial") -> CoefficientSequence:
    """Table built from plain coefficient values c_0..c_N."""
    c = np.asarray(coeffs, dtype=float)
    with np.errstate(divide="ignore"):
        la = np.where(c == 0.0, ZERO, np.log(np.abs(np.where(c == 0.0, 1.0, c))))
    return table_coefficients(la, name=name, sign_nonnegative=bool(np.all(c >= 0)))


def coefficients_from_csv(path, name: Optional[str] = None) -> CoefficientSequence:
    """Load a coefficient table: CSV columns (n, ln_abs_c), "ZERO" allowed."""
    entries = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().lower() in ("n", ""):
                continue
            n = int(row[0])
            v = row[1].strip()
            entries[n] = ZERO if v.upper() == "ZERO" else float(v)
    if not entries:
        raise InputError(f"no coefficient rows in {path}")
    top = max(entries)
    vals = np.full(top + 1, ZERO)
    for n, v in entries.items():
        vals[n] = v
    return table_coefficients(vals, name=name or str(path))


def _stream_logsumexp(term_fn, n_max: int, block: int = 256):
    """Log-sum of term_fn(n) over n = 0..n_max with tail-based early stop."""
    total = -np.inf
    run = 0
    n = 0
    while n <= n_max:
        ns = np.arange(n, min(n + block, n_max + 1))
        t = term_fn(ns)
        finite = t[np.isfinite(t)]
        if finite.size:
            m = max(total, float(np.max(finite)))
            total = m + math.log(math.exp(total - m) + float(np.sum(np.exp(finite - m))))
        # count trailing terms that are negligible w.r.t. the running sum
        small = t < total - _TAIL_LOG
        for s in small:
            run = run + 1 if s else 0
        n += block
        if run >= _TAIL_RUN:
            return total, True
    return total, False


def log_max_function(f: CoefficientSequence, r: float,
                     max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """ln of the coefficient-sum majorant sum_n |c_n| r^n at radius r.

    Exact equal to ln M_f(r) when all coefficients are nonnegative; an upper
    bound on it otherwise (flagged by f.sign_nonnegative).
    """
    if r <= 0:
        raise InputError("r must be positive")
    f.assert_entire()
    lr = math.log(r)
    n_max = f.max_index if f.max_index is not None else max_terms
    total, converged = _stream_logsumexp(
        lambda ns: f.log_abs_array(ns) + ns * lr, n_max)
    if not converged and f.max_index is None:
        raise TruncationError(
            f"series for {f.name} at r={r} not converged within {max_terms} terms")
    return total


@dataclass(frozen=True)
class LimsupEstimate:
    """Windowed running-max surrogate for a limsup, with trend diagnostics."""

    value: float
    ns: np.ndarray
    values: np.ndarray
    running_max: np.ndarray


def order_estimate(f: CoefficientSequence, n_min: int, n_max: int) -> LimsupEstimate:
    """Finite-range surrogate for the order: max of n ln n / |ln|c_n||."""
    if not (n_max > n_min >= 2):
        raise InputError("need n_max > n_min >= 2")
    ns = np.arange(n_min, n_max + 1)
    la = f.log_abs_array(ns)
    valid = np.isfinite(la) & (la != 0.0)
    if not np.any(valid):
        raise UndefinedOrderError(f"{f.name}: no usable coefficients in range (polynomial?)")
    ns_v = ns[valid]
    vals = ns_v * np.log(ns_v) / np.abs(la[valid])
    rmax = np.maximum.accumulate(vals)
    return LimsupEstimate(float(rmax[-1]), ns_v, vals, rmax)


def type_estimate(f: CoefficientSequence, rho: float, n_min: int, n_max: int) -> LimsupEstimate:
    """Finite-range surrogate for the type: max of n^(1/rho) |c_n|^(1/n).

    Implements the coefficient formula verbatim; this normalization differs
    from the classical sigma = (e*rho)^-1 limsup n |c_n|^(rho/n) by constants.
    """
    if rho <= 0:
        raise InputError("rho must be positive")
    if not (n_max > n_min >= 1):
        raise InputError("need n_max > n_min >= 1")
    ns = np.arange(n_min, n_max + 1)
    la = f.log_abs_array(ns)
    valid = np.isfinite(la)
    if not np.any(valid):
        raise UndefinedOrderError(f"{f.name}: no usable coefficients in range (polynomial?)")
    ns_v = ns[valid]
    vals = np.exp(np.log(ns_v) / rho + la[valid] / ns_v)
    rmax = np.maximum.accumulate(vals)
    return LimsupEstimate(float(rmax[-1]), ns_v, vals, rmax)


def derivative_coeffs(f: CoefficientSequence) -> CoefficientSequence:
    """Coefficient rule of f': c_k[f'] = (k+1) c_{k+1}[f]."""

    def la(k):
        k = np.asarray(k, dtype=float)
        return np.log(k + 1.0) + f.log_abs_array(k + 1.0)

    new_max = None if f.max_index is None else max(f.max_index - 1, 0)
    return CoefficientSequence(f"d/dz[{f.name}]", la,
                               sign_nonnegative=f.sign_nonnegative, max_index=new_max)
