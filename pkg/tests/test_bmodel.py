import pytest

from mirrorp1.bmodel import BranchData
from mirrorp1.rings import NF_I, NF_ONE, NF_SQRT2, NField, Q, nf_s
from mirrorp1.series import QSeries, TSeries, known_zero

S = nf_s()


@pytest.fixture(scope="module")
def bd():
    return BranchData(prec=11, zeta_order=14)


class TestCurve:
    def test_branch_point_relations(self, bd):
        assert bd.curve_relation_checks()

    def test_branch_limits(self, bd):
        # q -> 0: P1 = 0, P2 = s
        assert bd.P[1].valuation() == 2
        assert bd.P[2].coefficient(0) == S

    def test_local_coordinate_inverts_x(self, bd):
        for a in (1, 2):
            assert bd.x_inversion_check(a)

    def test_zeta_u_round_trip(self, bd):
        for a in (1, 2):
            z = bd.zeta_of_u(a)
            u = bd.u_of_zeta(a)
            assert z.compose(u).matches(TSeries.variable(bd.ring, bd.zeta_order))


class TestYExpansion:
    def test_h1_branch_identity(self, bd):
        # h^alpha_1 = i sqrt(2) / sqrt(Delta^alpha), and h_coeffs agrees
        for a in (1, 2):
            expect = bd.sqrt_delta[a].inverse(prec=bd.prec).scale(NF_I * NF_SQRT2)
            assert bd.h1[a].matches(expect)
            assert bd.h_coeffs(a)[1].matches(expect)

    def test_h1_squared(self, bd):
        for a in (1, 2):
            sq = bd.h_coeffs(a)[1] ** 2
            assert (sq * bd.delta[a]).matches(QSeries.const(NField.from_int(-2)))


class TestBergman:
    def test_symmetry(self, bd):
        for a in (1, 2):
            for b in (1, 2):
                for k in range(4):
                    for l in range(4):
                        lhs = bd.bergman_coefficient(a, b, k, l)
                        rhs = bd.bergman_coefficient(b, a, l, k)
                        assert lhs.matches(rhs), (a, b, k, l)

    def test_no_spurious_poles(self, bd):
        # the delta-part was removed exactly: expansion starts at (0, 0)
        reg = bd.bergman(2, 2)
        assert all(k >= 0 for k in reg.c)
        for k, inner in reg.c.items():
            assert all(l >= 0 for l in inner.c)


class TestDxi:
    def test_order_zero_closed_form(self, bd):
        # dxi_{alpha,0} = m dY/(Y-P)^2 with m^2 Delta = 2 P^2 (sign is the branch)
        for a in (1, 2):
            table = bd.dxi_pole_table(a, 0)
            assert set(table) == {0}
            m = table[0]
            assert (m * m * bd.delta[a]).matches(bd.P[a] * bd.P[a] * 2)

    def test_zero_residue(self, bd):
        # no j = -1-type term exists in the pole table by construction;
        # the local expansion must have no zeta^{-1} either
        for a in (1, 2):
            for d in (0, 1, 2):
                loc = bd.dxi_local(a, d, a)
                assert -1 not in loc.c or known_zero(loc.c[-1])

    def test_singular_part_order_one(self, bd):
        # leading singularity of dxi_{alpha,1}: (3 i / 2) zeta^{-4}
        for a in (1, 2):
            loc = bd.dxi_local(a, 1, a)
            lead = loc.coefficient(-4)
            assert lead.matches(QSeries.const(NField.from_rational(Q(3, 2)) * NF_I))
            assert known_zero(loc.coefficient(-3))
            assert known_zero(loc.coefficient(-2))
            assert known_zero(loc.coefficient(-1))

    def test_cross_expansion_analytic(self, bd):
        loc = bd.dxi_local(1, 0, 2)
        assert all(k >= 0 for k in loc.c)


class TestRMatrix:
    def test_identity_at_z_zero(self, bd):
        for a in (1, 2):
            for b in (1, 2):
                r = bd.r_matrix_entry(b, a)
                c0 = r.coefficient(0)
                if a == b:
                    assert c0.matches(QSeries.one())
                else:
                    assert c0.is_zero_known()

    def test_unitarity(self, bd):
        for a in (1, 2):
            for b in (1, 2):
                defect = bd.r_unitarity_defect(a, b)
                assert all(known_zero(v) for v in defect.c.values()), (a, b)

    def test_bernoulli_limit(self, bd):
        # q -> 0 diagonal limit: exp(-sum B_2n / (2n(2n-1)) (z/Delta)^{2n-1})
        # with B_2 = 1/6, B_4 = -1/30, B_6 = 1/42
        bern = {1: Q(1, 6), 2: Q(-1, 30), 3: Q(1, 42)}
        zmax = bd.r_matrix_entry(2, 2).order
        for beta in (1, 2):
            delta0 = bd.delta[beta].coefficient(0)
            # exponent series f(z), then exp(f)
            f = {}
            for n in (1, 2, 3):
                f[2 * n - 1] = NField.from_rational(
                    -bern[n] / (2 * n * (2 * n - 1))) * delta0.inverse() ** (2 * n - 1)
            expf = {0: NF_ONE}
            for order in range(1, min(zmax, 6)):
                acc = NField.from_int(0)
                for k, fk in f.items():
                    if k <= order and (order - k) in expf:
                        acc = acc + fk * expf[order - k] * k
                expf[order] = acc / order
            r = bd.r_matrix_entry(beta, beta)
            for order in range(min(zmax, 6)):
                got = r.coefficient(order).coefficient(0)
                assert got == expf[order], (beta, order)

    def test_off_diagonal_vanishes_at_q_zero(self, bd):
        for (b, a) in ((1, 2), (2, 1)):
            r = bd.r_matrix_entry(b, a)
            for k, v in r.c.items():
                if k >= 1:
                    assert v.valuation() >= 1, (b, a, k)

    def test_bernoulli_first_order_value(self, bd):
        # [z^1] R_2^2 at q = 0 equals -1/(12 s)
        got = bd.r_matrix_entry(2, 2).coefficient(1).coefficient(0)
        assert got == NField.from_rational(Q(-1, 12)) / S
