"""Laurent series at the puncture Y = 0 of the mirror curve.

A :class:`YSeries` holds finitely many Y-exponents on a window [lo, hi] with
q-series coefficients.  The essential-singularity factor exp(mu (Y + q/Y)/s)
is graded-finite: its Y^{-m} coefficient carries q^m, so for any target
p-order only a bounded window of exponents can contribute to a residue.
Callers fix the window from their p-order and winding bounds; tests confirm
that enlarging the window does not change extracted residues.
"""

from __future__ import annotations

from math import comb, factorial

from .rings import NField, Q, nf_s
from .series import PrecisionError, QSeries


class YSeries:
    """Finite window of Y-exponents with QSeries coefficients."""

    __slots__ = ("c", "lo", "hi")

    def __init__(self, coeffs: dict[int, QSeries], lo: int, hi: int):
        self.lo = lo
        self.hi = hi
        self.c = {k: v for k, v in coeffs.items()
                  if lo <= k <= hi and not v.is_exact_zero()}

    @staticmethod
    def zero(lo: int, hi: int) -> "YSeries":
        return YSeries({}, lo, hi)

    @staticmethod
    def monomial(coeff: QSeries, k: int, lo: int, hi: int) -> "YSeries":
        return YSeries({k: coeff}, lo, hi)

    def __add__(self, other: "YSeries") -> "YSeries":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        out = {k: v for k, v in self.c.items() if lo <= k <= hi}
        for k, v in other.c.items():
            if lo <= k <= hi:
                out[k] = out[k] + v if k in out else v
        return YSeries(out, lo, hi)

    def __neg__(self) -> "YSeries":
        return YSeries({k: -v for k, v in self.c.items()}, self.lo, self.hi)

    def __sub__(self, other: "YSeries") -> "YSeries":
        return self + (-other)

    def __mul__(self, other: "YSeries") -> "YSeries":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        out: dict[int, QSeries] = {}
        for i, a in self.c.items():
            for j, b in other.c.items():
                k = i + j
                if k < lo or k > hi:
                    continue
                p = a * b
                out[k] = out[k] + p if k in out else p
        return YSeries(out, lo, hi)

    def scale(self, coeff) -> "YSeries":
        return YSeries({k: v * coeff for k, v in self.c.items()}, self.lo, self.hi)

    def shift(self, n: int) -> "YSeries":
        """Multiply by Y**n; the window shifts along."""
        return YSeries({k + n: v for k, v in self.c.items()}, self.lo + n, self.hi + n)

    def clip(self, lo: int, hi: int) -> "YSeries":
        return YSeries(self.c, max(lo, self.lo), min(hi, self.hi))

    def coefficient(self, k: int) -> QSeries:
        if k < self.lo or k > self.hi:
            raise PrecisionError(f"Y^{k} outside window [{self.lo}, {self.hi}]")
        return self.c.get(k, QSeries.zero())

    def residue_at_origin(self) -> QSeries:
        """Coefficient of Y^{-1}; exact per known p-order."""
        return self.coefficient(-1)

    def truncate_coeffs(self, prec: int) -> "YSeries":
        return YSeries({k: v.truncate(prec) for k, v in self.c.items()}, self.lo, self.hi)

    def derivative(self) -> "YSeries":
        out = {}
        for k, v in self.c.items():
            if k:
                out[k - 1] = v.scale(NField.from_int(k))
        return YSeries(out, self.lo - 1, self.hi - 1)

    def __repr__(self) -> str:
        ks = sorted(self.c)
        return f"YSeries(window=[{self.lo},{self.hi}], exps={ks})"


def exp_winding_factor(mu: int, prec: int, lo: int, hi: int) -> YSeries:
    """exp(mu (Y + q/Y)/s) on the window, truncated at p-order `prec`.

    The Y^l coefficient is sum_m (mu/s)^(2m+|l|') q^m-type terms with
    m >= max(0, -l); each negative exponent is suppressed by q^|l|.
    """
    s = nf_s()
    out: dict[int, QSeries] = {}
    for l in range(lo, hi + 1):
        coeffs = {}
        m = max(0, -l)
        while 2 * m < prec:
            n = m + l
            val = (NField.from_int(mu) / s) ** (n + m) / (factorial(n) * factorial(m))
            if not val.is_zero():
                coeffs[2 * m] = val
            m += 1
        series = QSeries(coeffs, prec)
        if not series.is_exact_zero():
            out[l] = series
    return YSeries(out, lo, hi)


def x_inverse_winding(mu: int, prec: int, lo: int, hi: int) -> YSeries:
    """X^{-mu} as a Y-series at t0 = 0: q^{mu/2} Y^{-mu} exp(mu (Y + q/Y)/s)."""
    base = exp_winding_factor(mu, prec - mu, lo + mu, hi + mu)
    shifted = base.shift(-mu)
    return shifted.scale(QSeries.monomial(NField.from_int(1), mu)).truncate_coeffs(prec)


def pole_at_small_root(p_small: QSeries, j: int, prec: int, lo: int, hi: int) -> YSeries:
    """1/(Y - P)^j expanded for |Y| > |P| where P = O(q).

    Equals sum_k C(k+j-1, j-1) P^k Y^{-k-j}; each term gains p-order from P.
    """
    if j < 1:
        raise ValueError("pole order must be positive")
    out = {}
    pk = QSeries.one(prec)
    k = 0
    while True:
        exp = -k - j
        if exp < lo:
            break
        if exp <= hi:
            out[exp] = pk.scale(NField.from_int(comb(k + j - 1, j - 1)))
        pk = pk * p_small
        if pk.valuation() >= prec:
            break
        k += 1
    return YSeries(out, lo, hi)


def pole_at_unit_root(p_unit: QSeries, j: int, prec: int, lo: int, hi: int) -> YSeries:
    """1/(Y - P)^j expanded for |Y| < |P| where P is a q-series unit.

    Equals (-1)^j sum_k C(k+j-1, j-1) Y^k / P^{k+j}.
    """
    if j < 1:
        raise ValueError("pole order must be positive")
    pinv = p_unit.inverse(prec=prec)
    out = {}
    power = pinv ** j
    sign = NField.from_int((-1) ** j)
    for k in range(0, hi + 1):
        if k >= lo:
            out[k] = power.scale(sign * comb(k + j - 1, j - 1))
        power = power * pinv
    return YSeries(out, lo, hi)


def y_laurent_monomial(k: int, prec: int, lo: int, hi: int) -> YSeries:
    return YSeries({k: QSeries.one(prec)}, lo, hi)
