"""Expansion of curve data into winding variables at the puncture.

The operator takes meromorphic functions or 1-forms on the punctured disk
around Y = 0 and produces Laurent series in X through residues against
X^{-mu}.  Functions and forms on the curve are carried as rational objects
with poles only at the branch points and at Y = 0/infinity (Laurent part),
expanded into :class:`YSeries` by the two-regime rule: the small root
P_1 = O(q) is expanded in powers of P_1/Y, the unit root P_2 in powers of
Y/P_2.
"""

from __future__ import annotations

from functools import lru_cache

from .bmodel import BranchData
from .rings import NF_ONE, NF_SQRT_M2, NField, Q, nf_s
from .series import QSeries
from .xlaurent import XLaurent
from .yseries import (
    YSeries, pole_at_small_root, pole_at_unit_root, x_inverse_winding,
)


class RationalY:
    """sum of c_{alpha,j} / (Y - P_alpha)^j plus a Laurent polynomial in Y."""

    __slots__ = ("poles", "mono")

    def __init__(self, poles: dict[tuple[int, int], QSeries] | None = None,
                 mono: dict[int, QSeries] | None = None):
        self.poles = {k: v for k, v in (poles or {}).items() if not v.is_exact_zero()}
        self.mono = {k: v for k, v in (mono or {}).items() if not v.is_exact_zero()}

    def __add__(self, other: "RationalY") -> "RationalY":
        poles = dict(self.poles)
        for k, v in other.poles.items():
            poles[k] = poles[k] + v if k in poles else v
        mono = dict(self.mono)
        for k, v in other.mono.items():
            mono[k] = mono[k] + v if k in mono else v
        return RationalY(poles, mono)

    def __neg__(self) -> "RationalY":
        return RationalY({k: -v for k, v in self.poles.items()},
                         {k: -v for k, v in self.mono.items()})

    def __sub__(self, other: "RationalY") -> "RationalY":
        return self + (-other)

    def scale(self, factor) -> "RationalY":
        return RationalY({k: v * factor for k, v in self.poles.items()},
                         {k: v * factor for k, v in self.mono.items()})

    def derivative(self) -> "RationalY":
        poles = {}
        for (alpha, j), v in self.poles.items():
            poles[(alpha, j + 1)] = poles.get((alpha, j + 1), QSeries.zero(None)) \
                + v.scale(NField.from_int(-j))
        mono = {}
        for k, v in self.mono.items():
            if k:
                mono[k - 1] = v.scale(NField.from_int(k))
        return RationalY(poles, mono)

    def matches(self, other: "RationalY", upto: int | None = None) -> bool:
        for k in set(self.poles) | set(other.poles):
            a = self.poles.get(k, QSeries.zero())
            b = other.poles.get(k, QSeries.zero())
            if not a.matches(b, upto=upto):
                return False
        for k in set(self.mono) | set(other.mono):
            a = self.mono.get(k, QSeries.zero())
            b = other.mono.get(k, QSeries.zero())
            if not a.matches(b, upto=upto):
                return False
        return True


class HXEngine:
    """Caches winding factors and pole expansions for repeated residues."""

    def __init__(self, branch: BranchData, prec: int, max_winding: int,
                 window_pad: int = 4):
        self.branch = branch
        self.prec = prec
        self.max_winding = max_winding
        w = max_winding + prec // 2 + window_pad
        self.lo, self.hi = -w, w
        self.s = nf_s()
        # dX/X = (-1/s + 1/Y + (q/s) Y^{-2}) dY
        self.dlog_x = YSeries({
            0: QSeries.const(-self.s.inverse()),
            -1: QSeries.one(),
            -2: QSeries.monomial(NF_ONE / self.s, 2),
        }, self.lo, self.hi)

    @lru_cache(maxsize=None)
    def x_inverse(self, mu: int) -> YSeries:
        return x_inverse_winding(mu, self.prec, self.lo, self.hi)

    @lru_cache(maxsize=None)
    def pole_series(self, alpha: int, j: int) -> YSeries:
        if alpha == 1:
            return pole_at_small_root(self.branch.p_small, j, self.prec,
                                      self.lo, self.hi)
        return pole_at_unit_root(self.branch.p_unit, j, self.prec, self.lo, self.hi)

    def to_yseries(self, f: RationalY) -> YSeries:
        out = YSeries.zero(self.lo, self.hi)
        for (alpha, j), v in f.poles.items():
            out = out + self.pole_series(alpha, j).scale(v)
        for k, v in f.mono.items():
            out = out + YSeries({k: v}, self.lo, self.hi)
        return out

    # -- the expansion operator ------------------------------------------------
    def hx_form(self, coeff_fn: RationalY) -> dict[int, QSeries]:
        """Winding coefficients of the form coeff_fn * dY:
        [X^mu] = (1/mu) Res(theta X^{-mu})."""
        ys = self.to_yseries(coeff_fn)
        out = {}
        for mu in self._windings():
            r = (ys * self.x_inverse(mu)).residue_at_origin()
            val = r.scale(NField.from_rational(Q(1, mu)))
            if not val.is_exact_zero():
                out[mu] = val
        return out

    def hx_function(self, f: RationalY) -> dict[int, QSeries]:
        """Winding coefficients of a function: [X^mu] = Res(f X^{-mu} dX/X)."""
        ys = self.to_yseries(f) * self.dlog_x
        out = {}
        for mu in self._windings():
            val = (ys * self.x_inverse(mu)).residue_at_origin()
            if not val.is_exact_zero():
                out[mu] = val
        return out

    def _windings(self):
        return [m for m in range(-self.max_winding, self.max_winding + 1) if m != 0]

    @lru_cache(maxsize=None)
    def hx_pole_leg(self, alpha: int, j: int) -> tuple:
        """Form-expansion table of dY/(Y - P_alpha)^(j+2), as ((mu, coeff), ...)."""
        leg = RationalY({(alpha, j + 2): QSeries.one()})
        return tuple(sorted(self.hx_form(leg).items()))

    def hx_dxi(self, alpha: int, d: int) -> dict[int, QSeries]:
        """Winding expansion of the form dxi_{alpha,d}."""
        table = self.branch.dxi_pole_table(alpha, d)
        out: dict[int, QSeries] = {}
        for j, m in table.items():
            for mu, v in self.hx_pole_leg(alpha, j):
                add = v * m
                out[mu] = out[mu] + add if mu in out else add
        return out


# ---------------------------------------------------------------------------
# B-model potentials for the unstable topologies
# ---------------------------------------------------------------------------


def w01(engine: HXEngine) -> XLaurent:
    """Disk potential: (-1/s) X dW/dX = hx(dY/Y), constant term zero."""
    phi0 = RationalY(mono={-1: QSeries.one()})
    table = engine.hx_form(phi0)
    s = nf_s()
    coeffs = {}
    for mu, v in table.items():
        coeffs[(mu,)] = v.scale(-s / mu)
    return XLaurent(1, engine.max_winding, coeffs)


def w02(engine: HXEngine) -> XLaurent:
    """Annulus potential: the double expansion of B minus the X-diagonal kernel.

    Both pieces are expanded in the region |X_2| < |X_1| (equivalently
    |Y_2| < |Y_1|); their difference is the expansion of the regular part.
    """
    prec = engine.prec
    mmax = engine.max_winding
    coeffs: dict[tuple[int, int], QSeries] = {}
    kmax = engine.hi
    for mu1 in engine._windings():
        x1 = engine.x_inverse(mu1)
        for mu2 in engine._windings():
            x2 = engine.x_inverse(mu2)
            acc = QSeries.zero(prec)
            for k in range(0, kmax):
                # B = sum_k (k+1) Y_2^k Y_1^{-k-2} dY_1 dY_2 in this region
                term = x1.coefficient(k + 1) * x2.coefficient(-k - 1)
                if not term.is_exact_zero():
                    acc = acc + term.scale(NField.from_int(k + 1))
            val = acc.scale(NField.from_rational(Q(1, mu1 * mu2)))
            if mu1 + mu2 == 0 and mu1 < 0:
                # subtract the expansion of dX1 dX2/(X1-X2)^2, which contributes
                # -1/m at (mu1, mu2) = (-m, m)
                val = val + QSeries.const(NField.from_rational(Q(1, mu2)), prec)
            if not val.is_exact_zero():
                coeffs[(mu1, mu2)] = val
    return XLaurent(2, mmax, coeffs)


# ---------------------------------------------------------------------------
# Printed closed-form functions on the curve (for the Bessel expansion checks)
# ---------------------------------------------------------------------------


def xi_zero_printed(branch: BranchData, alpha: int) -> RationalY:
    """xi_{alpha,0} = sqrt(-2/Delta^alpha) P_alpha / (Y - P_alpha)."""
    pref = branch.sqrt_minus_two_over_delta(alpha) * branch.P[alpha]
    return RationalY(poles={(alpha, 1): pref})


def eta_function(branch: BranchData) -> RationalY:
    """eta = xi_{2,0} - i xi_{1,0}."""
    from .rings import NF_I

    return xi_zero_printed(branch, 2) - xi_zero_printed(branch, 1).scale(NF_I)


def chi_function(branch: BranchData) -> RationalY:
    """chi = xi_{2,0} + i xi_{1,0}."""
    from .rings import NF_I

    return xi_zero_printed(branch, 2) + xi_zero_printed(branch, 1).scale(NF_I)


def eta_alt_form(branch: BranchData) -> RationalY:
    """eta as sqrt(-2 Delta^2) Y / (-s (Y-P1)(Y-P2)) in partial fractions."""
    s = nf_s()
    sq = branch.sqrt_delta[2].scale(NF_SQRT_M2)  # sqrt(-2 Delta^2)
    dd = branch.P[1] - branch.P[2]
    ddinv = dd.inverse(prec=branch.prec)
    # Y/((Y-P1)(Y-P2)) = [P1/(Y-P1) - P2/(Y-P2)] / (P1 - P2)
    # eta = (1/-s) sqrt(-2 Delta^2) * (-s) Y/((Y-P1)(Y-P2)) = sqrt(-2 Delta^2) Y/(...)
    a1 = branch.P[1] * ddinv
    a2 = -(branch.P[2] * ddinv)
    return RationalY(poles={(1, 1): sq * a1, (2, 1): sq * a2})


def chi_alt_form(branch: BranchData) -> RationalY:
    """chi as sqrt(-2/Delta^2) (s Y + 2q)/((Y-P1)(Y-P2)) in partial fractions."""
    s = nf_s()
    sq = branch.sqrt_minus_two_over_delta(2)
    q = QSeries.monomial(NF_ONE, 2)
    dd = branch.P[1] - branch.P[2]
    ddinv = dd.inverse(prec=branch.prec)
    # (sY + 2q)/((Y-P1)(Y-P2)) = [(s P1 + 2q)/(Y-P1) - (s P2 + 2q)/(Y-P2)]/(P1-P2)
    n1 = (branch.P[1].scale(s) + q * 2) * ddinv
    n2 = -((branch.P[2].scale(s) + q * 2) * ddinv)
    return RationalY(poles={(1, 1): sq * n1, (2, 1): sq * n2})
