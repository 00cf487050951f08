import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from mirrorp1.rings import NF_ONE, NField, Q, nf_s
from mirrorp1.series import (
    NF_RING, PrecisionError, QSRing, QSeries, TSRing, TSeries, double_factorial,
    log1p, qs_sigma,
)


def qp(k, num, den=1):
    return QSeries.monomial(NField.from_rational(Q(num, den)), k)


class TestQSeries:
    def test_sqrt_of_discriminant_argument(self):
        # sqrt(1 + 4q/s^2) = 1 + 2q/s^2 - 2q^2/s^4 + 4q^3/s^6 + ...
        s = nf_s()
        sig = qs_sigma(8)
        assert sig.coefficient(0) == NF_ONE
        assert sig.coefficient(2) == NField.from_int(2) / (s * s)
        assert sig.coefficient(4) == NField.from_int(-2) / (s ** 2) ** 2
        assert sig.coefficient(6) == NField.from_int(4) / (s ** 2) ** 3
        assert (sig * sig).matches(QSeries({0: NF_ONE, 2: NField.from_int(4) / (s * s)}))

    def test_sqrt_of_one(self):
        assert QSeries.one().sqrt() == QSeries.one()

    def test_sqrt_of_one_plus_p_squared(self):
        x = QSeries({0: NF_ONE, 2: NF_ONE}, 6)
        r = x.sqrt()
        assert r.coefficient(2) == NField.from_rational(Q(1, 2))
        assert r.coefficient(4) == NField.from_rational(Q(-1, 8))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(min_value=-4, max_value=4), min_size=1, max_size=6))
    def test_sqrt_squares_back(self, coeffs):
        x = QSeries({0: NF_ONE}, 10)
        for k, a in enumerate(coeffs, start=1):
            x = x + QSeries.monomial(NField.from_int(a), k, 10)
        r = x.sqrt()
        assert (r * r).matches(x)

    def test_nonunit_sqrt_rejected(self):
        with pytest.raises(ValueError):
            QSeries({0: NField.from_int(2)}, 5).sqrt()

    def test_inverse_round_trip(self):
        x = QSeries({0: NF_ONE, 1: NField.from_int(3), 2: nf_s()}, 9)
        assert (x * x.inverse()).matches(QSeries.one())

    def test_laurent_inverse(self):
        x = qp(-2, 1) + qp(0, 1)
        x = x.truncate(6)
        inv = x.inverse()
        assert (x * inv).matches(QSeries.one())
        assert inv.valuation() == 2

    def test_monomial_inverse_exact(self):
        x = qp(3, 2)
        assert x.inverse().prec is None
        assert x * x.inverse() == QSeries.one()

    def test_precision_propagation(self):
        a = QSeries({0: NF_ONE}, 5)
        b = QSeries({2: NF_ONE}, 4)
        assert (a * b).prec == 4  # min(5 + 2, 4 + 0) = 4
        assert (a + b).prec == 4

    def test_coefficient_beyond_truncation_rejected(self):
        with pytest.raises(PrecisionError):
            QSeries({0: NF_ONE}, 3).coefficient(5)

    def test_q_dq(self):
        x = qp(1, 1) + qp(4, 1)
        d = x.q_dq()
        assert d.coefficient(1) == NField.from_rational(Q(1, 2))
        assert d.coefficient(4) == NField.from_int(2)

    def test_p_negation(self):
        x = qp(1, 1) + qp(2, 3)
        y = x.substitute_p_negation()
        assert y.coefficient(1) == NField.from_int(-1)
        assert y.coefficient(2) == NField.from_int(3)


class TestTSeries:
    def test_mul_and_order(self):
        r = NF_RING
        t = TSeries.variable(r, 5)
        x = TSeries.one(r, 5) + t
        y = x * x
        assert y.coefficient(1) == NField.from_int(2)
        assert y.order == 5

    def test_inverse(self):
        r = NF_RING
        t = TSeries.variable(r, 7)
        x = TSeries.one(r, 7) + t
        inv = x.inverse()
        assert inv.coefficient(3) == NField.from_int(-1)
        assert (x * inv).matches(TSeries.one(r, 7))

    def test_laurent_inverse(self):
        r = NF_RING
        x = TSeries(r, {2: NF_ONE, 3: NF_ONE}, 8)
        inv = x.inverse()
        assert inv.valuation() == -2
        assert (x * inv).matches(TSeries.one(r, 8))

    def test_revert(self):
        r = NF_RING
        t = TSeries.variable(r, 8)
        f = t + t * t
        g = f.revert()
        assert f.compose(g).matches(t)
        assert g.compose(f).matches(t)
        # catalan signs: g = t - t^2 + 2t^3 - 5t^4 + ...
        assert g.coefficient(3) == NField.from_int(2)
        assert g.coefficient(4) == NField.from_int(-5)

    def test_log1p(self):
        r = NF_RING
        t = TSeries.variable(r, 6)
        lg = log1p(t)
        assert lg.coefficient(1) == NF_ONE
        assert lg.coefficient(2) == NField.from_rational(Q(-1, 2))
        assert lg.coefficient(3) == NField.from_rational(Q(1, 3))

    def test_derivative(self):
        r = NF_RING
        x = TSeries(r, {-1: NF_ONE, 2: NField.from_int(3)}, 9)
        d = x.derivative()
        assert d.coefficient(-2) == NField.from_int(-1)
        assert d.coefficient(1) == NField.from_int(6)

    def test_bivariate(self):
        inner = QSRing(6)
        outer = TSRing(inner, 5)
        # f(z, w) = 1 + z*w with QSeries entries
        one_w = TSeries.one(inner, 5)
        w_var = TSeries.variable(inner, 5)
        f = TSeries(outer, {0: one_w, 1: w_var}, 5)
        sq = f * f
        assert sq.coefficient(1).coefficient(1).matches(QSeries.const(NField.from_int(2)))

    def test_qseries_coefficients(self):
        ring = QSRing(8)
        t = TSeries.variable(ring, 4)
        x = TSeries.one(ring, 4) + t.scale(qs_sigma(8))
        y = x * x
        c1 = y.coefficient(1)
        assert c1.coefficient(0) == NField.from_int(2)


def test_double_factorial():
    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(5) == 15
    assert double_factorial(6) == 48
    assert double_factorial(7) == 105
