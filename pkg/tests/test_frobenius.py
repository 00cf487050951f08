import pytest

from mirrorp1.frobenius import FrobeniusData, bessel_I, bessel_I_deriv, bessel_I_signed
from mirrorp1.rings import NF_ONE, NField, Q, nf_s
from mirrorp1.series import QSeries


S = nf_s()


@pytest.fixture(scope="module")
def frob():
    return FrobeniusData(prec=13, z_order=10)


class TestBessel:
    def test_i0_at_zero(self):
        assert bessel_I(0, 0, 8).coefficient(0) == NF_ONE

    def test_positive_order_vanishes_at_zero(self):
        assert bessel_I(3, 3, 8).coefficient(0) == NField.from_int(0)
        assert bessel_I(3, 3, 8).valuation() == 3

    def test_index_symmetry(self):
        # I_{-3} = I_3 termwise
        assert bessel_I_signed(-3, 12).matches(
            bessel_I(-3, 3, 12))

    def test_d1_expansion(self):
        # I_1(2 sqrt(q)/s) = (sqrt(q)/s)(1 + q/(2 s^2) + q^2/(12 s^4) + ...)
        i1 = bessel_I_signed(1, 8)
        assert i1.coefficient(1) == NF_ONE / S
        assert i1.coefficient(3) == NField.from_rational(Q(1, 2)) / S ** 3
        assert i1.coefficient(5) == NField.from_rational(Q(1, 12)) / S ** 5

    def test_argument_parity(self):
        # I_d(-x) = (-1)^d I_d(x): winding sign flip
        for d in (1, 2, 3):
            neg = bessel_I_signed(-d, 10)
            pos = bessel_I_signed(d, 10)
            expect = pos if d % 2 == 0 else -pos
            assert neg.matches(expect)

    def test_derivative_identity_consistency(self):
        # recurrence: I'_d = I_{d+1} + (d/x) I_d must match the term-by-term
        # derivative of the series in x at x = 2 sqrt(q) d / s.
        for d in (1, 2, -2):
            prec = 10
            deriv = bessel_I_deriv(d, prec)
            # d/dx acts as (s/(2 d)) * d/d(sqrt q) ... check via q d/dq:
            # x = 2 p d / s so q d/dq I = (p/2) dI/dp = (x/2) I'(x)
            lhs = bessel_I_signed(d, prec + 2).q_dq()
            x_half = QSeries.monomial(NField.from_int(d) / S, 1)
            assert lhs.matches(x_half * deriv)


class TestCanonicalData:
    def test_delta_relation(self, frob):
        assert frob.delta[1].matches(-frob.delta[2])

    def test_delta_square(self, frob):
        # Delta^2(q)^2 = s^2 + 4q
        target = QSeries({0: S * S, 2: NField.from_int(4)}, None)
        assert (frob.delta[2] * frob.delta[2]).matches(target)

    def test_sqrt_delta_squares(self, frob):
        for a in (1, 2):
            assert (frob.sqrt_delta[a] * frob.sqrt_delta[a]).matches(frob.delta[a])

    def test_psi_inverse(self, frob):
        assert frob.psi_product_check()

    def test_h_star_h(self, frob):
        hh = frob.quantum_h_square()
        assert hh.coefficient(0) == S * S / 4
        assert hh.coefficient(2) == NF_ONE

    def test_canonical_data_s_rational(self, frob):
        assert frob.sigma.is_rational_in_s()
        assert frob.delta[2].is_rational_in_s()


class TestSMatrix:
    def test_classical_limit(self, frob):
        # q -> 0: S(1, phi_alpha) -> (1, phi_alpha) = 1/Delta_cl
        for a in (1, 2):
            s1 = frob.s_reduced(0, a)
            c0 = s1.coefficient(0).coefficient(0)
            assert c0 == frob.delta_classical[a].inverse()

    def test_reduced_j_component_degree_one(self, frob):
        # the q^1 part of the reduced J^2 is u^2/(1 + s u), i.e. (-s)^j at u^{2+j}
        g2 = frob.g_series(2)
        for j in range(0, 6):
            c = g2.coefficient(2 + j).coefficient(2)
            assert c == (-S) ** j, f"u^{2+j}"

    def test_j_symmetry_under_s_negation(self, frob):
        # J^1 is J^2 with s -> -s, coefficientwise
        g1 = frob.g_series(1)
        g2 = frob.g_series(2)
        for k in range(frob.z_order):
            assert g1.coefficient(k).matches(
                g2.coefficient(k).substitute_s_negation(), upto=9)

    def test_qde_series(self, frob):
        assert frob.qde_series_check(1)
        assert frob.qde_series_check(2)

    def test_qde_evaluated(self, frob):
        for d in (1, 2, 3, -1, -2):
            assert frob.qde_eval_check(d)

    def test_symplectic_pairing(self, frob):
        for a in (1, 2):
            for b in (1, 2):
                assert frob.symplectic_check(a, b), (a, b)

    def test_eval_matches_defining_sum(self, frob):
        # p^|d| * sum_m q^m / (m! z^m prod_{l<=m} (Delta_cl + l z)) at z = s/d
        # must reproduce the Bessel closed form of the evaluation.
        import math

        for d in (1, 2, -1, -3):
            alpha = frob.alpha_of_winding(d)
            delta = frob.delta_classical[alpha]
            z0 = S / d
            acc = QSeries.zero(frob.prec)
            m = 0
            while 2 * m + abs(d) < frob.prec:
                denom = NField.from_int(math.factorial(m)) * z0 ** m
                for l in range(1, m + 1):
                    denom = denom * (delta + l * z0)
                acc = acc + QSeries.monomial(denom.inverse(), 2 * m)
                m += 1
            assert frob.j_upper_eval(d).matches(acc.shift(abs(d)))

    def test_j_eval_leading(self, frob):
        # J-evaluation starts at p^|d| with unit coefficient
        for d in (1, 2, 3, -1, -2):
            j = frob.j_upper_eval(d)
            assert j.valuation() == abs(d)
            assert j.coefficient(abs(d)) == NF_ONE
