"""Exact psi-class intersection numbers on moduli of curves.

``psi_number`` evaluates <tau_{k_1} ... tau_{k_n}>_g by the
Dijkgraaf-Verlinde-Verlinde recursion with memoization; these rationals are
the vertex weights of every graph sum in the engine.  ``hodge_lambda1_number``
supplies the one Hodge integral the genus-1 localization oracle needs, via the
boundary reduction <lambda_1 prod tau>_1 = (1/24) <tau_0 tau_0 prod tau>_0.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .rings import Q
from .series import double_factorial


class UnstableError(ValueError):
    """(g, n) outside the stable range 2g - 2 + n > 0."""


def _normalize(genus: int, heights) -> tuple[int, tuple[int, ...]]:
    ks = tuple(sorted(int(k) for k in heights))
    if any(k < 0 for k in ks):
        raise ValueError(f"negative psi exponent in {ks}")
    return int(genus), ks


def is_stable(genus: int, n: int) -> bool:
    return 2 * genus - 2 + n > 0


def psi_number(genus: int, heights) -> Q:
    """<tau_{k_1} ... tau_{k_n}>_g as an exact rational."""
    g, ks = _normalize(genus, heights)
    if not is_stable(g, len(ks)):
        raise UnstableError(f"unstable moduli space (g={g}, n={len(ks)})")
    if sum(ks) != 3 * g - 3 + len(ks):
        return Q(0)
    return _psi(g, ks)


@lru_cache(maxsize=None)
def _psi(g: int, ks: tuple[int, ...]) -> Q:
    n = len(ks)
    if sum(ks) != 3 * g - 3 + n:
        return Q(0)
    if g == 0 and ks == (0, 0, 0):
        return Q(1)
    if g == 1 and ks == (1,):
        return Q(1, 24)
    # remove the largest insertion via the DVV recursion
    k1 = max(ks)
    rest = list(ks)
    rest.remove(k1)
    rest = tuple(rest)
    if k1 == 0:
        # all heights zero is only consistent with (0, 3), handled above
        return Q(0)
    total = Q(0)
    # joining terms
    for j in range(len(rest)):
        kj = rest[j]
        others = rest[:j] + rest[j + 1:]
        if is_stable(g, len(others) + 1):
            coef = Q(double_factorial(2 * (k1 + kj) - 1), double_factorial(2 * kj - 1))
            total += coef * _psi(g, tuple(sorted(others + (k1 + kj - 1,))))
    # splitting terms
    for a in range(k1 - 1):
        b = k1 - 2 - a
        coef = Q(double_factorial(2 * a + 1) * double_factorial(2 * b + 1), 2)
        if g >= 1 and is_stable(g - 1, len(rest) + 2):
            total += coef * _psi(g - 1, tuple(sorted(rest + (a, b))))
        for g1 in range(g + 1):
            g2 = g - g1
            for r in range(len(rest) + 1):
                for idx in combinations(range(len(rest)), r):
                    chosen = tuple(rest[i] for i in idx)
                    others = tuple(rest[i] for i in range(len(rest)) if i not in idx)
                    if not is_stable(g1, r + 1) or not is_stable(g2, len(others) + 1):
                        continue
                    total += coef * _psi(g1, tuple(sorted(chosen + (a,)))) \
                        * _psi(g2, tuple(sorted(others + (b,))))
    return total / double_factorial(2 * k1 + 1)


def psi_number_reduced(genus: int, heights) -> Q:
    """Alternative evaluation using string/dilaton reductions first.

    Used as an independent re-derivation path in tests; values must agree
    with :func:`psi_number`.
    """
    g, ks = _normalize(genus, heights)
    n = len(ks)
    if not is_stable(g, n):
        raise UnstableError(f"unstable moduli space (g={g}, n={n})")
    if sum(ks) != 3 * g - 3 + n:
        return Q(0)
    if g == 0 and ks == (0, 0, 0):
        return Q(1)
    if g == 1 and ks == (1,):
        return Q(1, 24)
    if ks and ks[0] == 0 and is_stable(g, n - 1):
        # string equation
        rest = ks[1:]
        total = Q(0)
        for j in range(len(rest)):
            if rest[j] >= 1:
                reduced = rest[:j] + (rest[j] - 1,) + rest[j + 1:]
                total += psi_number_reduced(g, reduced)
        return total
    if 1 in ks and is_stable(g, n - 1):
        # dilaton equation
        rest = list(ks)
        rest.remove(1)
        return Q(2 * g - 2 + n - 1) * psi_number_reduced(g, tuple(rest))
    return psi_number(g, ks)


def hodge_lambda1_number(heights) -> Q:
    """Integral of lambda_1 * prod psi^{k_i} over genus-1 moduli with |heights| points."""
    ks = tuple(sorted(int(k) for k in heights))
    m = len(ks)
    if not is_stable(1, m):
        raise UnstableError(f"unstable genus-1 space with {m} points")
    if sum(ks) != m - 1:
        return Q(0)
    return Q(1, 24) * psi_number(0, ks + (0, 0))
