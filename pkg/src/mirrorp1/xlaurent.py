"""Laurent coefficients in winding variables X_1..X_n with q-series entries."""

from __future__ import annotations

from itertools import permutations

from .rings import NField, Q
from .series import QSeries


class XLaurent:
    """Map from winding tuples to QSeries coefficients.

    Winding entries are nonzero integers bounded by `max_winding`; the
    all-zero tuple (constant slot) is representable but every generating
    function produced by the engine keeps it empty.
    """

    __slots__ = ("nvars", "max_winding", "c")

    def __init__(self, nvars: int, max_winding: int,
                 coeffs: dict[tuple[int, ...], QSeries] | None = None):
        self.nvars = nvars
        self.max_winding = max_winding
        self.c = {}
        for mu, v in (coeffs or {}).items():
            if len(mu) != nvars:
                raise ValueError(f"winding tuple {mu} has wrong arity")
            if any(abs(m) > max_winding for m in mu):
                continue
            if not v.is_exact_zero():
                self.c[tuple(mu)] = v

    def coefficient(self, mu) -> QSeries:
        return self.c.get(tuple(mu), QSeries.zero())

    def __add__(self, other: "XLaurent") -> "XLaurent":
        if self.nvars != other.nvars:
            raise ValueError("arity mismatch")
        out = dict(self.c)
        for mu, v in other.c.items():
            out[mu] = out[mu] + v if mu in out else v
        return XLaurent(self.nvars, min(self.max_winding, other.max_winding), out)

    def __neg__(self) -> "XLaurent":
        return XLaurent(self.nvars, self.max_winding,
                        {mu: -v for mu, v in self.c.items()})

    def __sub__(self, other: "XLaurent") -> "XLaurent":
        return self + (-other)

    def scale(self, factor) -> "XLaurent":
        return XLaurent(self.nvars, self.max_winding,
                        {mu: v * factor for mu, v in self.c.items()})

    def truncate(self, prec: int) -> "XLaurent":
        return XLaurent(self.nvars, self.max_winding,
                        {mu: v.truncate(prec) for mu, v in self.c.items()})

    def symmetrize(self) -> "XLaurent":
        """Average over permutations of the winding variables."""
        acc: dict[tuple[int, ...], QSeries] = {}
        perms = list(permutations(range(self.nvars)))
        inv_n = NField.from_rational(Q(1, len(perms)))
        for perm in perms:
            for mu, v in self.c.items():
                key = tuple(mu[p] for p in perm)
                acc[key] = acc[key] + v if key in acc else v
        return XLaurent(self.nvars, self.max_winding,
                        {mu: v.scale(inv_n) for mu, v in acc.items()})

    def t0_derivative(self) -> "XLaurent":
        """d/dt0 in the winding-marker sense: multiply X^mu by (sum mu_i)/s."""
        from .rings import nf_s

        s_inv = nf_s().inverse()
        return XLaurent(self.nvars, self.max_winding,
                        {mu: v.scale(NField.from_int(sum(mu)) * s_inv)
                         for mu, v in self.c.items()})

    def x_log_derivative(self, i: int) -> "XLaurent":
        """(1/s) X_i d/dX_i."""
        from .rings import nf_s

        s_inv = nf_s().inverse()
        return XLaurent(self.nvars, self.max_winding,
                        {mu: v.scale(NField.from_int(mu[i]) * s_inv)
                         for mu, v in self.c.items()})

    # -- structural checks ---------------------------------------------------
    def parity_violations(self) -> list[tuple[int, ...]]:
        """Winding tuples whose coefficient breaks the p-parity grading.

        The X^mu coefficient may only involve p-powers congruent to
        sum |mu_i| mod 2.
        """
        bad = []
        for mu, v in self.c.items():
            parity = sum(abs(m) for m in mu) % 2
            if any(k % 2 != parity for k in v.c):
                bad.append(mu)
        return bad

    def is_rational_in_s(self) -> bool:
        return all(v.is_rational_in_s() for v in self.c.values())

    def has_constant_slot(self) -> bool:
        return tuple([0] * self.nvars) in self.c

    def matches(self, other: "XLaurent", upto: int | None = None) -> bool:
        if self.nvars != other.nvars:
            return False
        for mu in set(self.c) | set(other.c):
            a = self.c.get(mu, QSeries.zero())
            b = other.c.get(mu, QSeries.zero())
            if not a.matches(b, upto=upto):
                return False
        return True

    def mismatch_report(self, other: "XLaurent", upto: int | None = None):
        """List of (winding tuple, p-order) slots where coefficients differ."""
        bad = []
        for mu in sorted(set(self.c) | set(other.c)):
            a = self.c.get(mu, QSeries.zero())
            b = other.c.get(mu, QSeries.zero())
            prec_cands = [x for x in (a.prec, b.prec, upto) if x is not None]
            prec = min(prec_cands) if prec_cands else None
            for k in sorted(set(a.c) | set(b.c)):
                if prec is not None and k >= prec:
                    continue
                from .rings import NF_ZERO

                if a.c.get(k, NF_ZERO) != b.c.get(k, NF_ZERO):
                    bad.append((mu, k))
        return bad

    def __repr__(self) -> str:
        return f"XLaurent(nvars={self.nvars}, slots={sorted(self.c)})"


def tensor(factors: list[dict[int, QSeries]], max_winding: int) -> XLaurent:
    """Combine per-variable winding series into a joint XLaurent."""
    n = len(factors)
    slots: dict[tuple[int, ...], QSeries] = {(): QSeries.one()}
    for f in factors:
        new: dict[tuple[int, ...], QSeries] = {}
        for mu, v in slots.items():
            for m, w in f.items():
                new[mu + (m,)] = v * w
        slots = new
    return XLaurent(n, max_winding, slots)
