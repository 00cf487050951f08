"""Mirror-curve data at the branch points.

The curve is parametrized by Y with
x(Y) = t0 + (s/2) log q + Y + q/Y - s log Y and y = log Y; dx vanishes at
P_1 = (s - s*sigma)/2 and P_2 = (s + s*sigma)/2.  Near P_alpha the local
coordinate zeta solves x = x(P_alpha) - zeta^2; only differences x - x(P_alpha)
and y - y(P_alpha) are ever formed, so no logarithms survive.

Branch choice: zeta = t_alpha * u * (1 + ...) with
t_alpha = i * sqrt(Delta^alpha(q)) / (sqrt(2) P_alpha), which makes
(h^alpha_1)^2 = -2/Delta^alpha(q) with h^alpha_1 = i sqrt(2)/sqrt(Delta^alpha).
The 1-forms dxi_{alpha,d} follow the residue definition
(2d-1)!! 2^{-d} Res_{p' -> P_alpha} B(p, p') (i zeta')^{-2d-1}; their printed
closed forms then hold up to one global factor of i, which the mirror
comparisons fix empirically.
"""

from __future__ import annotations

from functools import lru_cache

from .rings import NF_I, NF_ONE, NF_SQRT2, NF_SQRT_M2, NField, Q, nf_s
from .series import (
    QSRing, QSeries, TSRing, TSeries, double_factorial, known_zero, log1p,
    qs_sigma,
)


def _tseries_sqrt_unit(x: TSeries) -> TSeries:
    """Square root of a series with constant term 1 over its coefficient ring."""
    ring = x.ring
    c0 = x.coefficient(0)
    if not known_zero(c0 - ring.one()):
        raise ValueError("sqrt requires constant term 1")
    order = x.order
    if order is None:
        raise ValueError("sqrt of an exact series needs a truncation")
    half = ring.from_rational(Q(1, 2))
    r = {0: ring.one()}
    for k in range(1, order):
        acc = x.c.get(k, ring.zero())
        for i in range(1, k):
            if i in r and (k - i) in r:
                acc = acc - r[i] * r[k - i]
        r[k] = acc * half
    return TSeries(ring, r, order)


class BranchData:
    """Local expansions, Bergman coefficients, dxi tables and the R-matrix."""

    def __init__(self, prec: int, zeta_order: int = 14):
        self.prec = prec
        self.zeta_order = zeta_order
        self.ring = QSRing(prec)
        s = nf_s()
        self.s = s
        self.sigma = qs_sigma(prec)
        self.sqrt_sigma = self.sigma.sqrt()
        one = QSeries.one()
        self.p_small = (one - self.sigma).scale(s / 2)   # P_1 = -q/s + ...
        self.p_unit = (one + self.sigma).scale(s / 2)    # P_2 = s + q/s - ...
        self.P = {1: self.p_small, 2: self.p_unit}
        d2 = self.sigma.scale(s)
        self.delta = {1: -d2, 2: d2}
        w = NField.w_power(1)
        sq = self.sqrt_sigma.scale(w)
        self.sqrt_delta = {1: sq.scale(NF_I), 2: sq}
        # t_alpha = i sqrt(Delta^alpha) / (sqrt(2) P_alpha)
        self.t = {a: (self.sqrt_delta[a].scale(NF_I / NF_SQRT2)
                      * self.P[a].inverse(prec=prec)) for a in (1, 2)}
        self.h1 = {a: -(self.t[a] * self.P[a]).inverse(prec=prec) for a in (1, 2)}
        self._check_branch()

    def _check_branch(self):
        # (h1)^2 = -2/Delta and t^2 = -Delta/(2 P^2), exact series identities
        for a in (1, 2):
            lhs = self.h1[a] * self.h1[a] * self.delta[a]
            if not lhs.matches(QSeries.const(NField.from_int(-2))):
                raise AssertionError("branch data inconsistent: h1^2 != -2/Delta")

    # -- local coordinate ---------------------------------------------------
    @lru_cache(maxsize=None)
    def x_shift_series(self, alpha: int) -> TSeries:
        """x(P_alpha + u) - x(P_alpha) as a series in u."""
        ring, K = self.ring, self.zeta_order
        P = self.P[alpha]
        Pinv = P.inverse(prec=self.prec)
        u = TSeries.variable(ring, K)
        u_over_p = u.scale(Pinv)
        # q * (1/(P+u) - 1/P) = -q u / (P^2 (1 + u/P))
        q = QSeries.monomial(NF_ONE, 2)
        geom = (TSeries.one(ring, K) + u_over_p).inverse()
        term2 = (u * geom).scale(-(q * Pinv * Pinv))
        term3 = log1p(u_over_p).scale(QSeries.const(-self.s))
        return u + term2 + term3

    @lru_cache(maxsize=None)
    def zeta_of_u(self, alpha: int) -> TSeries:
        """zeta as a series in u = Y - P_alpha, with x = x(P_alpha) - zeta^2."""
        ring, K = self.ring, self.zeta_order
        # the linear slot of x(P+u) - x(P) vanishes exactly at a branch point
        phi = self.x_shift_series(alpha).prune()
        if phi.valuation() != 2:
            raise AssertionError("branch point is not a double zero of dx")
        # -phi = t^2 u^2 (1 + ...); take the branch zeta = t u sqrt(1 + ...)
        t2 = self.t[alpha] * self.t[alpha]
        unit = (-phi).shift(-2).map(lambda c: c * t2.inverse(prec=self.prec))
        root = _tseries_sqrt_unit(unit)
        return (TSeries.variable(ring, K) * root).map(lambda c: c * self.t[alpha])

    @lru_cache(maxsize=None)
    def u_of_zeta(self, alpha: int) -> TSeries:
        return self.zeta_of_u(alpha).revert()

    @lru_cache(maxsize=None)
    def du_dzeta(self, alpha: int) -> TSeries:
        return self.u_of_zeta(alpha).derivative()

    # -- y-expansion ----------------------------------------------------------
    @lru_cache(maxsize=None)
    def h_coeffs(self, alpha: int) -> dict[int, QSeries]:
        """y = y(P_alpha) - sum_k h^alpha_k zeta^k."""
        u = self.u_of_zeta(alpha)
        logy = log1p(u.map(lambda c: c * self.P[alpha].inverse(prec=self.prec)))
        out = {}
        for k, v in logy.c.items():
            out[k] = -v
        return out

    # -- Bergman expansions -----------------------------------------------------
    @lru_cache(maxsize=None)
    def bergman(self, alpha: int, beta: int) -> TSeries:
        """Regular part of B in (zeta_alpha, zeta'_beta): coefficients B_{k,l}.

        Returned as a series in zeta whose coefficients are series in zeta'.
        """
        K = self.zeta_order
        inner_ring = self.ring
        outer_ring = TSRing(inner_ring, K)
        u_out = self._u_outer(alpha)
        u_in = self._u_inner(beta)
        du_out = u_out.derivative()
        # derivative in the inner variable, applied coefficientwise
        du_in = u_in.map(lambda c: c.derivative())
        if alpha == beta:
            g = self._difference_quotient(alpha)
            num = du_out * du_in - g * g
            h1 = _divide_by_zeta_difference(num)
            h2 = _divide_by_zeta_difference(h1)
            return h2 * (g * g).inverse()
        dd = self.P[alpha] - self.P[beta]
        denom = (u_out - u_in) + TSeries(
            outer_ring, {0: TSeries(inner_ring, {0: dd}, K)}, K)
        return du_out * du_in * (denom * denom).inverse()

    def _u_outer(self, alpha: int) -> TSeries:
        K = self.zeta_order
        inner = self.ring
        outer = TSRing(inner, K)
        u = self.u_of_zeta(alpha)
        return TSeries(outer, {k: TSeries(inner, {0: v}, K) for k, v in u.c.items()},
                       u.order)

    def _u_inner(self, beta: int) -> TSeries:
        K = self.zeta_order
        inner = self.ring
        outer = TSRing(inner, K)
        u = self.u_of_zeta(beta)
        return TSeries(outer, {0: TSeries(inner, dict(u.c), u.order)}, K)

    @lru_cache(maxsize=None)
    def _difference_quotient(self, alpha: int) -> TSeries:
        """(u(zeta) - u(zeta')) / (zeta - zeta') as a bivariate series."""
        K = self.zeta_order
        inner = self.ring
        outer = TSRing(inner, K)
        u = self.u_of_zeta(alpha)
        order = u.order if u.order is not None else K
        coeffs: dict[int, TSeries] = {}
        for k, a in u.c.items():
            # (zeta^k - zeta'^k)/(zeta - zeta') = sum_{i<k} zeta^i zeta'^{k-1-i}
            for i in range(k):
                mono = TSeries(inner, {k - 1 - i: a}, order - 1 - i)
                coeffs[i] = coeffs[i] + mono if i in coeffs else mono
        return TSeries(outer, coeffs, order - 1)

    def bergman_coefficient(self, alpha: int, beta: int, k: int, l: int) -> QSeries:
        return self.bergman(alpha, beta).coefficient(k).coefficient(l)

    # -- dxi forms ---------------------------------------------------------------
    @lru_cache(maxsize=None)
    def dxi_pole_table(self, alpha: int, d: int) -> dict[int, QSeries]:
        """dxi_{alpha,d} = sum_j m_j dY/(Y - P_alpha)^(j+2); returns {j: m_j}.

        From the residue definition, m_j = (2d-1)!! 2^{-d} i^{-2d-1} (j+1)
        [zeta^{2d}] (u^j du/dzeta).
        """
        u = self.u_of_zeta(alpha)
        du = self.du_dzeta(alpha)
        pref = NField.from_rational(Q(double_factorial(2 * d - 1), 2 ** d)) \
            * NF_I ** (-2 * d - 1)
        if 2 * d + 2 > self.zeta_order:
            raise ValueError(
                f"dxi order {d} needs zeta_order > {2 * d + 1}, have {self.zeta_order}")
        out = {}
        upow = du
        for j in range(0, 2 * d + 1):
            if j > 0:
                upow = upow * u
            c = upow.coefficient(2 * d)
            val = c.scale(pref * (j + 1))
            if not val.is_zero_known():
                out[j] = val
        return out

    @lru_cache(maxsize=None)
    def dxi_local(self, alpha: int, d: int, at: int) -> TSeries:
        """Local expansion of dxi_{alpha,d} / dzeta_at at the branch point `at`."""
        table = self.dxi_pole_table(alpha, d)
        u = self.u_of_zeta(at)
        du = self.du_dzeta(at)
        total = TSeries.zero(self.ring, None)
        if at == alpha:
            uinv = u.inverse()
            for j, m in table.items():
                total = total + (uinv ** (j + 2) * du).map(lambda c, m=m: c * m)
        else:
            dd = self.P[at] - self.P[alpha]
            base = (u + TSeries(self.ring, {0: dd}, self.zeta_order)).inverse()
            for j, m in table.items():
                total = total + (base ** (j + 2) * du).map(lambda c, m=m: c * m)
        return total

    # -- R-matrix -----------------------------------------------------------------
    @lru_cache(maxsize=None)
    def r_matrix_entry(self, beta: int, alpha: int) -> TSeries:
        """R^alpha_beta(z) from the formal Laplace transform of dxi_{beta,0}
        along the steepest path at P_alpha, normalized so R(0) = Id."""
        c = self.dxi_local(beta, 0, alpha)
        ring = self.ring
        z_order = (self.zeta_order - 1) // 2
        out: dict[int, QSeries] = {}
        # -i * ( -c_{-2} + sum_k c_{2k} (2k-1)!! z^{k+1} / 2^{k+1} )
        cm2 = c.c.get(-2)
        if cm2 is not None:
            out[0] = cm2.scale(NF_I)
        for k in range(0, z_order - 1):
            ck = c.c.get(2 * k)
            if ck is None:
                continue
            val = ck.scale(
                (-NF_I) * NField.from_rational(Q(double_factorial(2 * k - 1), 2 ** (k + 1))))
            if not val.is_zero_known():
                out[k + 1] = val
        return TSeries(ring, out, z_order)

    def r_matrix(self) -> dict[tuple[int, int], TSeries]:
        """All four entries R^alpha_beta(z) as z-series (lower index first)."""
        return {(b, a): self.r_matrix_entry(b, a) for a in (1, 2) for b in (1, 2)}

    def r_unitarity_defect(self, alpha: int, beta: int) -> TSeries:
        """(R^T(-z) R(z) - Id)_{alpha beta} = sum_g R_g^alpha(-z) R_g^beta(z) - delta."""
        total = None
        for gamma in (1, 2):
            a = self.r_matrix_entry(gamma, alpha)
            b = self.r_matrix_entry(gamma, beta)
            a_neg = TSeries(a.ring, {k: (v if k % 2 == 0 else -v) for k, v in a.c.items()},
                            a.order)
            prod = a_neg * b
            total = prod if total is None else total + prod
        target = TSeries.one(total.ring, total.order) if alpha == beta \
            else TSeries.zero(total.ring, total.order)
        return total - target

    # -- printed closed forms -------------------------------------------------
    def sqrt_minus_two_over_delta(self, alpha: int) -> QSeries:
        """sqrt(-2/Delta^alpha(q)) with the engine branch: sqrt(-2)/sqrt(Delta)."""
        return self.sqrt_delta[alpha].inverse(prec=self.prec).scale(NF_SQRT_M2)

    def curve_relation_checks(self) -> bool:
        """P_1 + P_2 = s and P_1 P_2 = -q as series identities."""
        s_ok = (self.P[1] + self.P[2]).matches(QSeries.const(self.s))
        q_ok = (self.P[1] * self.P[2]).matches(QSeries.monomial(-NF_ONE, 2))
        return s_ok and q_ok

    def x_inversion_check(self, alpha: int) -> bool:
        """x(Y(zeta)) - x(P_alpha) = -zeta^2 modulo truncation."""
        phi = self.x_shift_series(alpha)
        composed = phi.compose(self.u_of_zeta(alpha))
        target = TSeries(self.ring, {2: QSeries.const(NField.from_int(-1))}, None)
        return composed.matches(target)


def _divide_by_zeta_difference(num: TSeries) -> TSeries:
    """Divide a bivariate series by (zeta - zeta'), checking the diagonal.

    With num(z, z) = 0 the quotient is sum_a N_a(z') (z^a - z'^a)/(z - z');
    termwise this is exact.  Only total degree < order - 1 of the result is
    known, so inner orders are capped accordingly.
    """
    order = num.order
    if order is None:
        order = (max(num.c) + 2) if num.c else 1
    diag = None
    for a, na in num.c.items():
        t = na.shift(a).truncate(order)
        diag = t if diag is None else diag + t
    if diag is not None and not known_zero(diag):
        raise ArithmeticError("series does not vanish on the diagonal")
    h: dict[int, TSeries] = {}
    for a, na in num.c.items():
        for i in range(a):
            t = na.shift(a - 1 - i).truncate(order - 1 - i)
            h[i] = h[i] + t if i in h else t
    return TSeries(num.ring, h, order - 1)
