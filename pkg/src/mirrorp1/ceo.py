"""Direct topological recursion on the mirror curve.

Produces the stable multidifferentials as exact decompositions over the
rational leg basis dY/(Y - P_alpha)^(j+2); one residue step per output.
This route is independent of the graph sums and serves as their oracle.

All local work happens in the coordinates zeta_alpha of the branch data:
the involution is zeta -> -zeta, the recursion kernel numerator is
dY0 (1/(Y0 - Y) - 1/(Y0 - Y-hat)), and the denominator
2 (y(Y) - y(Y-hat)) dx = 8 zeta (sum over odd k of h_k zeta^k) d zeta.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .bmodel import BranchData
from .hx import HXEngine
from .rings import NField, Q
from .series import QSeries, TSeries
from .xlaurent import XLaurent

Leg = tuple[int, int]  # (branch point alpha, rational pole index j >= 0)


class CEORecursion:
    """Memoized recursion for omega_{g,n} over the rational leg basis."""

    def __init__(self, branch: BranchData):
        self.branch = branch
        self.ring = branch.ring
        self.K = branch.zeta_order

    # -- local ingredients --------------------------------------------------
    @lru_cache(maxsize=None)
    def _kernel_denominator_inverse(self, alpha: int) -> TSeries:
        """1 / [2 (y(zeta) - y(-zeta)) dx/dzeta] = -1 / (8 zeta sum_odd h_k zeta^k)."""
        h = self.branch.h_coeffs(alpha)
        odd = TSeries(self.ring, {k: v for k, v in h.items() if k % 2 == 1}, self.K)
        # y(z) - y(-z) = -2 sum_odd h_k zeta^k and dx/dzeta = -2 zeta
        denom = odd.shift(1).scale(QSeries.const(NField.from_int(8)))
        return denom.inverse()

    @lru_cache(maxsize=None)
    def _numerator_odd_powers(self, alpha: int, j: int) -> TSeries:
        """Odd part u(zeta)^j - u(-zeta)^j (series in zeta)."""
        u = self.branch.u_of_zeta(alpha)
        uj = u ** j
        return TSeries(self.ring, {k: v.scale(NField.from_int(2))
                                   for k, v in uj.c.items() if k % 2 == 1}, uj.order)

    @lru_cache(maxsize=None)
    def _pole_base(self, alpha: int, at: int) -> TSeries:
        """1/(Y - P_alpha) expanded at the branch point `at`."""
        u = self.branch.u_of_zeta(at)
        if at == alpha:
            return u.inverse()
        dd = self.branch.P[at] - self.branch.P[alpha]
        return (u + TSeries(self.ring, {0: dd}, self.K)).inverse()

    @lru_cache(maxsize=None)
    def _pole_base_power(self, alpha: int, at: int, power: int) -> TSeries:
        if power == 1:
            return self._pole_base(alpha, at)
        return self._pole_base_power(alpha, at, power - 1) * self._pole_base(alpha, at)

    @lru_cache(maxsize=None)
    def leg_local(self, leg: Leg, at: int, sign: int) -> TSeries:
        """Expansion of dY/(Y - P_alpha)^(j+2) / dzeta_at at zeta or -zeta."""
        alpha, j = leg
        du = self.branch.du_dzeta(at)
        series = self._pole_base_power(alpha, at, j + 2) * du
        if sign < 0:
            # substitute zeta -> -zeta including the d(zeta)-orientation factor
            series = TSeries(self.ring,
                             {k: (v if (k + 1) % 2 == 0 else -v)
                              for k, v in series.c.items()}, series.order)
        return series

    @lru_cache(maxsize=None)
    def _loop_b_local(self, alpha: int) -> TSeries:
        """B(Y(zeta), Y(-zeta)) / (dzeta)^2 = -u'(z) u'(-z) / (u(z) - u(-z))^2."""
        u = self.branch.u_of_zeta(alpha)
        du = self.branch.du_dzeta(alpha)
        du_neg = TSeries(self.ring, {k: (v if k % 2 == 0 else -v)
                                     for k, v in du.c.items()}, du.order)
        odd = TSeries(self.ring, {k: v.scale(NField.from_int(2))
                                  for k, v in u.c.items() if k % 2 == 1}, u.order)
        return -(du * du_neg) * (odd * odd).inverse()

    @lru_cache(maxsize=None)
    def _b_leg_expansion(self, alpha: int, sign: int) -> tuple:
        """B(Y(+-zeta), Y_i) decomposed as sum_j scalar_j(zeta) * leg (alpha, j).

        B(Y(z), Y_i) = sum_j (j+1) u(z)^j u'(z) dY_i/(Y_i - P_alpha)^(j+2) dzeta.
        """
        u = self.branch.u_of_zeta(alpha)
        du = self.branch.du_dzeta(alpha)
        out = []
        upow = TSeries.one(self.ring, self.K)
        for j in range(0, self.K - 1):
            scal = (upow * du).scale(QSeries.const(NField.from_int(j + 1)))
            if sign < 0:
                scal = TSeries(self.ring,
                               {k: (v if (k + 1) % 2 == 0 else -v)
                                for k, v in scal.c.items()}, scal.order)
            out.append(((alpha, j), scal))
            upow = upow * u
        return tuple(out)

    # -- the recursion ----------------------------------------------------------
    @lru_cache(maxsize=None)
    def omega(self, g: int, n: int) -> dict:
        """Decomposition {(leg_1, ..., leg_n): QSeries} of omega_{g,n}."""
        if 2 * g - 2 + n <= 0:
            raise ValueError(f"omega_({g},{n}) is unstable")
        result: dict[tuple[Leg, ...], QSeries] = {}
        for alpha in (1, 2):
            kinv = self._kernel_denominator_inverse(alpha)
            # assemble the bracket: list of (scalar in zeta, legs for Y_1..Y_{n-1})
            pieces: list[tuple[TSeries, tuple[Leg, ...], QSeries]] = []
            # (a) omega_{g-1, n+1}(Y, Y-hat, rest)
            if g >= 1:
                if (g - 1, n + 1) == (0, 2):
                    pieces.append((self._loop_b_local(alpha), (), QSeries.one()))
                elif 2 * (g - 1) - 2 + (n + 1) > 0:
                    for key, coeff in self.omega(g - 1, n + 1).items():
                        la = self.leg_local(key[0], alpha, +1)
                        lb = self.leg_local(key[1], alpha, -1)
                        pieces.append((la * lb, key[2:], coeff))
            # (b) splits omega_{g1, |I|+1}(Y, Y_I) omega_{g2, |J|+1}(Y-hat, Y_J)
            rest = tuple(range(n - 1))
            for g1 in range(0, g + 1):
                g2 = g - g1
                for r in range(0, n):
                    for idx in combinations(rest, r):
                        jdx = tuple(i for i in rest if i not in idx)
                        if not self._stable_or_b(g1, len(idx) + 1):
                            continue
                        if not self._stable_or_b(g2, len(jdx) + 1):
                            continue
                        terms1 = list(self._factor_terms(g1, idx, alpha, +1))
                        terms2 = list(self._factor_terms(g2, jdx, alpha, -1))
                        for (scal1, c1), placed1 in terms1:
                            v1 = scal1.valuation()
                            if not isinstance(v1, int):
                                continue
                            for (scal2, c2), placed2 in terms2:
                                v2 = scal2.valuation()
                                # the kernel has valuation -2 and the numerator
                                # at least +1, so deeper products cannot reach
                                # the residue slot
                                if not isinstance(v2, int) or v1 + v2 > 0:
                                    continue
                                legs = [None] * (n - 1)
                                for pos, leg in placed1 + placed2:
                                    legs[pos] = leg
                                pieces.append((scal1 * scal2, tuple(legs), c1 * c2))
            # integrate against the kernel
            for scal, legs, coeff in pieces:
                if any(l is None for l in legs):
                    continue
                bracket = scal * kinv
                bv = bracket.valuation()
                if not isinstance(bv, int):
                    continue
                # u^j - u(-zeta)^j has valuation at least j
                jmax = min(self.K - 2, -1 - bv)
                for j in range(1, jmax + 1):
                    num = self._numerator_odd_powers(alpha, j)
                    term = bracket * num
                    if -1 not in term.c:
                        continue
                    res = term.c[-1] * coeff
                    if res.is_zero_known():
                        continue
                    key = legs + ((alpha, j - 1),)
                    result[key] = result.get(key, QSeries.zero(None)) + res
        return result

    def _stable_or_b(self, g: int, n: int) -> bool:
        if (g, n) == (0, 1):
            return False  # omega_{0,1} = 0
        return (g, n) == (0, 2) or 2 * g - 2 + n > 0

    def _factor_terms(self, g: int, idx: tuple[int, ...], alpha: int, sign: int):
        """Terms of omega_{g,|idx|+1}(Y(+-zeta), Y_idx) as
        ((scalar, extra-coeff), [(position, leg), ...])."""
        if (g, len(idx) + 1) == (0, 2):
            i = idx[0]
            for leg, scal in self._b_leg_expansion(alpha, sign):
                yield (scal, QSeries.one()), [(i, leg)]
            return
        for key, coeff in self.omega(g, len(idx) + 1).items():
            scal = self.leg_local(key[0], alpha, sign)
            yield (scal, coeff), list(zip(idx, key[1:]))

    # -- expansion into winding variables ------------------------------------------
    def w_potential(self, engine: HXEngine, g: int, n: int) -> XLaurent:
        """W_{g,n}: the winding expansion of omega_{g,n}, leg by leg."""
        decomposition = self.omega(g, n)
        total = XLaurent(n, engine.max_winding, {})
        for key, coeff in decomposition.items():
            tables = []
            for alpha, j in key:
                tables.append(dict(engine.hx_pole_leg(alpha, j)))
            from .xlaurent import tensor

            total = total + tensor(tables, engine.max_winding).scale(coeff)
        return total
