"""Equivariant quantum cohomology of the projective line.

Carries the canonical-basis data (discriminants, transition matrix, quantum
product), the modified-Bessel building blocks, and the two rows of the
fundamental solution ("S-matrix").  The S-matrix appears in two forms:

* a reduced 1/z-series with honest q-series coefficients, obtained by
  stripping the divisor-equation exponential prefactor; all structural
  identities (quantum differential equation, symplectic pairing) are checked
  on this form;

* exact evaluations at z = s/d for a nonzero winding d, where the prefactor
  resums to the half-integer power p^|d|.  These evaluations feed the open
  leaves of the graph sum.

Conventions: fixed points carry weights w(p1) = -s, w(p2) = s; classical
discriminants Delta^1 = -s, Delta^2 = s; quantum ones Delta^2(q) = s*sigma
with sigma = sqrt(1 + 4q/s^2) and Delta^1(q) = -Delta^2(q).  Square-root
branches: sqrt(Delta^2) = w*sqrt(sigma) and sqrt(Delta^1) = i*w*sqrt(sigma).
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial

from .rings import NF_I, NF_ONE, NField, Q, nf_s
from .series import PrecisionError, QSRing, QSeries, TSeries, qs_sigma


def bessel_I(mu: int, nu: int, prec: int) -> QSeries:
    """Series of I_nu(2*sqrt(q)*mu/s) in p = q^(1/2): sum_m (mu*p/s)^(2m+nu) / (m! (m+nu)!).

    nu must be nonnegative; the sign of the argument enters through mu.
    """
    if nu < 0:
        raise ValueError("Bessel order must be nonnegative; use I_n = I_{-n}")
    s = nf_s()
    coeffs = {}
    m = 0
    while 2 * m + nu < prec:
        k = 2 * m + nu
        c = (NField.from_int(mu) / s) ** k / (factorial(m) * factorial(m + nu))
        coeffs[k] = c
        m += 1
    return QSeries(coeffs, prec)


def bessel_I_signed(d: int, prec: int) -> QSeries:
    """I_d(2*sqrt(q)*d/s) for any nonzero integer d, using I_{-n} = I_n."""
    if d == 0:
        raise ValueError("winding must be nonzero")
    return bessel_I(d, abs(d), prec)


def bessel_I_deriv(d: int, prec: int) -> QSeries:
    """I'_d evaluated at 2*sqrt(q)*d/s, via I'_a(x) = I_{a+1}(x) + (a/x) I_a(x).

    At the argument x = 2*sqrt(q)*d/s the correction term is (s/2p) I_d.
    """
    s = nf_s()
    halfs_over_p = QSeries.monomial(s / 2, -1)
    ix = bessel_I(d, abs(d) + 1, prec + 1) if d > 0 else bessel_I(d, abs(d) - 1, prec + 1)
    return ix + halfs_over_p * bessel_I_signed(d, prec + 1)


class FrobeniusData:
    """Canonical-basis data of quantum cohomology, built once per precision."""

    def __init__(self, prec: int, z_order: int = 8):
        self.prec = prec
        self.z_order = z_order
        s = nf_s()
        self.s = s
        self.sigma = qs_sigma(prec)
        self.sqrt_sigma = self.sigma.sqrt()
        d2 = self.sigma.scale(s)
        self.delta = {1: -d2, 2: d2}
        self.delta_classical = {1: -s, 2: s}
        w = NField.w_power(1)
        sq2 = self.sqrt_sigma.scale(w)
        self.sqrt_delta = {1: sq2.scale(NF_I), 2: sq2}
        self.inv_sqrt_delta = {a: self.sqrt_delta[a].inverse() for a in (1, 2)}
        # Psi_i^alpha with T_i = sum_alpha Psi_i^alpha phi-hat_alpha(q)
        self.psi = {(0, a): self.inv_sqrt_delta[a] for a in (1, 2)}
        self.psi.update({(1, a): self.sqrt_delta[a].scale(NField.from_rational(Q(1, 2)))
                         for a in (1, 2)})
        # inverse transition matrix
        self.psi_inv = {(a, 0): self.sqrt_delta[a].scale(NField.from_rational(Q(1, 2)))
                        for a in (1, 2)}
        self.psi_inv.update({(a, 1): self.inv_sqrt_delta[a] for a in (1, 2)})
        self._uring = QSRing(prec)

    # -- classical structure -----------------------------------------------
    def quantum_h_square(self) -> QSeries:
        """H * H = s^2/4 + q in the quantum product."""
        return QSeries({0: self.s * self.s / 4, 2: NF_ONE}, None)

    def psi_product_check(self) -> bool:
        """Psi^{-1} Psi = identity, coefficientwise."""
        ok = True
        for a in (1, 2):
            for b in (1, 2):
                acc = QSeries.zero(self.prec)
                for i in (0, 1):
                    acc = acc + self.psi_inv[(a, i)] * self.psi[(i, b)]
                target = QSeries.one() if a == b else QSeries.zero()
                ok = ok and acc.matches(target)
        return ok

    # -- reduced S-matrix as series in u = 1/z ------------------------------
    @lru_cache(maxsize=None)
    def g_series(self, alpha: int) -> TSeries:
        """Reduced J-component: the divisor prefactor stripped off J^alpha.

        Returned as a series in u = 1/z whose coefficients are q-series; the
        degree-d part is q^d u^(2d) / (d!)^2 * prod_m (1 + Delta_cl u / m)^{-1}.
        """
        ring = self._uring
        order = self.z_order
        delta = self.delta_classical[alpha]
        total = TSeries.zero(ring, order)
        d = 0
        while 2 * d < order and 2 * d < self.prec:
            denom = TSeries.one(ring, order - 2 * d)
            for m in range(1, d + 1):
                denom = denom * TSeries(
                    ring, {0: ring.one(), 1: ring.from_int(1).scale(delta / m)},
                    order - 2 * d)
            term = denom.inverse().shift(2 * d)
            qd = QSeries.monomial(NField.from_rational(Q(1, factorial(d) ** 2)), 2 * d)
            total = total + term.map(lambda c, qd=qd: c * qd)
            d += 1
        return total

    @lru_cache(maxsize=None)
    def s_reduced(self, i: int, alpha: int) -> TSeries:
        """Reduced S_z(T_i, phi_alpha) as a series in u = 1/z.

        The true matrix entry is exp(t1 * Delta_cl^alpha / (2z)) times this.
        """
        delta_cl = self.delta_classical[alpha]
        s1 = self.g_series(alpha).map(lambda c: c.scale(delta_cl.inverse()))
        if i == 0:
            return s1
        if i != 1:
            raise ValueError("flat index must be 0 or 1")
        # S(H, .) = [z q d/dq + Delta_cl/2] applied to the reduced S(1, .).
        # The u^0 coefficient of the reduced series is the exact constant
        # 1/Delta_cl, so z q d/dq produces no u^{-1} term.
        dq_c = {k - 1: v.q_dq() for k, v in s1.c.items() if k >= 1}
        dq = TSeries(s1.ring, dq_c, None if s1.order is None else s1.order - 1)
        return dq + s1.scale(QSeries.const(delta_cl / 2))

    @lru_cache(maxsize=None)
    def s_hat_reduced(self, gamma: int, alpha: int) -> TSeries:
        """Reduced S_z(phi-hat_gamma(q), phi_alpha) in u = 1/z."""
        return (self.s_reduced(0, alpha).map(lambda c: c * self.psi_inv[(gamma, 0)])
                + self.s_reduced(1, alpha).map(lambda c: c * self.psi_inv[(gamma, 1)]))

    # -- evaluations at z = s/d ---------------------------------------------
    def j_upper_eval(self, d: int) -> QSeries:
        """J^alpha evaluated at z = s/d (alpha fixed by the sign of d).

        Equals |d|! (s/|d|)^|d| I_|d|(2 sqrt(q) |d| / s); the divisor
        prefactor has been resummed into the leading p^|d|.
        """
        if d == 0:
            raise ValueError("winding must be nonzero")
        e = abs(d)
        pref = NField.from_int(factorial(e)) * (self.s / e) ** e
        return bessel_I(e, e, self.prec).scale(pref)

    def alpha_of_winding(self, d: int) -> int:
        return 2 if d > 0 else 1

    def s1_eval(self, d: int) -> QSeries:
        """S_z(1, phi_alpha)|_{z = s/d} = J_alpha(s/d), alpha matching sign(d)."""
        alpha = self.alpha_of_winding(d)
        return self.j_upper_eval(d).scale(self.delta_classical[alpha].inverse())

    def sh_eval(self, d: int) -> QSeries:
        """S_z(H, phi_alpha)|_{z = s/d} = (s/d) q d/dq of the evaluated first row."""
        return self.s1_eval(d).q_dq().scale(self.s / d)

    def t_eval(self, gamma: int, d: int) -> QSeries:
        """S_z(phi-hat_gamma(q), phi_alpha)|_{z = s/d}; the open-leaf kernel."""
        return (self.s1_eval(d) * self.psi_inv[(gamma, 0)]
                + self.sh_eval(d) * self.psi_inv[(gamma, 1)])

    # -- structural checks ----------------------------------------------------
    def qde_eval_check(self, d: int) -> bool:
        """(s/d) q d/dq S(H,.)|_{s/d} = (s^2/4 + q) S(1,.)|_{s/d}."""
        lhs = self.sh_eval(d).q_dq().scale(self.s / d)
        rhs = self.quantum_h_square() * self.s1_eval(d)
        return lhs.matches(rhs)

    def qde_series_check(self, alpha: int) -> bool:
        """[z q d/dq + Delta_cl/2] S_red(H,.) = (s^2/4 + q) S_red(1,.) as u-series."""
        sh = self.s_reduced(1, alpha)
        lhs = sh.map(lambda c: c.q_dq()).shift(-1) \
            + sh.scale(QSeries.const(self.delta_classical[alpha] / 2))
        rhs = self.s_reduced(0, alpha).map(lambda c: c * self.quantum_h_square())
        return lhs.matches(rhs, upto=self.z_order - 1)

    def symplectic_check(self, alpha: int, beta: int) -> bool:
        """sum_gamma S(phi-hat_gamma, phi_alpha)(z) S(phi-hat_gamma, phi_beta)(-z)
        equals the Poincare pairing (phi_alpha, phi_beta); reduced form."""
        total = None
        for gamma in (1, 2):
            a = self.s_hat_reduced(gamma, alpha)
            b = self.s_hat_reduced(gamma, beta)
            bneg = TSeries(b.ring, {k: (v if k % 2 == 0 else -v) for k, v in b.c.items()},
                           b.order)
            prod = a * bneg
            total = prod if total is None else total + prod
        if alpha == beta:
            target = TSeries(total.ring,
                             {0: QSeries.const(self.delta_classical[alpha].inverse())},
                             total.order)
        else:
            target = TSeries.zero(total.ring, total.order)
        return total.matches(target)
