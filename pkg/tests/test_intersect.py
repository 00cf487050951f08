import math

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from mirrorp1.intersect import (
    UnstableError, hodge_lambda1_number, psi_number, psi_number_reduced,
)
from mirrorp1.rings import Q
from mirrorp1.series import double_factorial


def test_base_cases():
    assert psi_number(0, (0, 0, 0)) == Q(1)
    assert psi_number(1, (1,)) == Q(1, 24)


def test_dimension_mismatch_vanishes():
    assert psi_number(0, (1, 0, 0)) == Q(0)
    assert psi_number(1, (3,)) == Q(0)
    assert psi_number(2, (1, 1)) == Q(0)


def test_unstable_rejected():
    with pytest.raises(UnstableError):
        psi_number(0, (0, 0))
    with pytest.raises(UnstableError):
        psi_number(1, ())


def test_genus_zero_closed_form():
    # <tau_{k_1}...tau_{k_n}>_0 = (n-3)! / prod k_i!
    cases = [(1, 0, 0, 0), (2, 0, 0, 0, 0), (1, 1, 0, 0, 0), (2, 1, 0, 0, 0, 0),
             (1, 1, 1, 0, 0, 0), (3, 0, 0, 0, 0, 0)]
    for ks in cases:
        n = len(ks)
        expect = Q(math.factorial(n - 3))
        for k in ks:
            expect /= math.factorial(k)
        assert psi_number(0, ks) == expect


def test_genus_one_values():
    assert psi_number(1, (0, 2)) == Q(1, 24)
    assert psi_number(1, (1, 1)) == Q(1, 24)
    assert psi_number(1, (0, 1, 2)) == Q(1, 12)
    assert psi_number(1, (1, 1, 1)) == Q(1, 12)
    assert psi_number(1, (0, 0, 3)) == Q(1, 24)


def test_genus_two_values():
    assert psi_number(2, (4,)) == Q(1, 1152)
    assert psi_number(2, (5, 0)) == Q(1, 1152)  # string equation from <tau_4>_2
    assert psi_number(2, (3, 2)) == Q(29, 5760)


def test_witten_one_point():
    # <tau_{3g-2}>_g = 1 / (24^g g!)
    for g in range(1, 6):
        assert psi_number(g, (3 * g - 2,)) == Q(1, 24 ** g * math.factorial(g))


def test_kontsevich_dressed_table():
    # independent oracle: F(g,n,ks) = <prod tau_{k_i}>_g * prod (2k_i+1)!!
    table = [
        (0, (0, 0, 0), Q(1)),
        (1, (1,), Q(1, 8)),
        (0, (1, 0, 0, 0), Q(3)),
        (0, (2, 0, 0, 0, 0), Q(15)),
        (0, (1, 1, 0, 0, 0), Q(18)),
        (1, (2, 0), Q(5, 8)),
        (1, (1, 1), Q(3, 8)),
        (2, (4,), Q(105, 128)),
        (2, (5, 0), Q(1155, 128)),
        (2, (4, 1), Q(945, 128)),
        (2, (3, 2), Q(1015, 128)),
        (1, (3, 0, 0), Q(35, 8)),
        (1, (2, 1, 0), Q(15, 4)),
        (1, (1, 1, 1), Q(9, 4)),
        (3, (7,), Q(25025, 1024)),
        (2, (6, 0, 0), Q(15015, 128)),
        (2, (3, 2, 1), Q(3045, 32)),
    ]
    for g, ks, dressed in table:
        dress = 1
        for k in ks:
            dress *= double_factorial(2 * k + 1)
        assert psi_number(g, ks) * dress == dressed


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2),
       st.lists(st.integers(min_value=0, max_value=6), min_size=1, max_size=4))
def test_string_equation(g, ks):
    n = len(ks) + 1
    if 2 * g - 2 + n <= 0 or 2 * g - 2 + len(ks) <= 0:
        return
    lhs = psi_number(g, tuple(ks) + (0,))
    rhs = Q(0)
    for j in range(len(ks)):
        if ks[j] >= 1:
            rhs += psi_number(g, tuple(ks[:j]) + (ks[j] - 1,) + tuple(ks[j + 1:]))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2),
       st.lists(st.integers(min_value=0, max_value=6), min_size=1, max_size=4))
def test_dilaton_equation(g, ks):
    n = len(ks) + 1
    if 2 * g - 2 + n <= 0 or 2 * g - 2 + len(ks) <= 0:
        return
    lhs = psi_number(g, tuple(ks) + (1,))
    rhs = Q(2 * g - 2 + len(ks)) * psi_number(g, tuple(ks))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2),
       st.lists(st.integers(min_value=0, max_value=7), min_size=1, max_size=5))
def test_reduced_rederivation_agrees(g, ks):
    if 2 * g - 2 + len(ks) <= 0:
        return
    assert psi_number(g, ks) == psi_number_reduced(g, ks)


def test_hodge_lambda1():
    assert hodge_lambda1_number((0,)) == Q(1, 24)
    assert hodge_lambda1_number((1, 0)) == Q(1, 24)
    assert hodge_lambda1_number((2, 0, 0)) == Q(1, 24)
    assert hodge_lambda1_number((1, 1, 0)) == Q(1, 12)
    # wrong dimension vanishes
    assert hodge_lambda1_number((3, 0)) == Q(0)
    with pytest.raises(UnstableError):
        hodge_lambda1_number(())
