"""Truncated series arithmetic.

Two layers live here:

* :class:`QSeries` - Laurent series in ``p`` with ``p**2 = q`` and NField
  coefficients.  Half-integer powers of q are exactly the odd powers of p.
  Every series carries the exponent bound below which its coefficients are
  known; arithmetic propagates that bound ultrametrically, so a final result
  can certify how far it is trustworthy.

* :class:`TSeries` - truncated Laurent series in one abstract variable over an
  arbitrary coefficient ring (NField, QSeries, or another TSeries for
  bivariate work), used for local coordinates at branch points, descendant
  z-series, and edge (z, w)-series.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .rings import NF_ONE, NF_ZERO, NField, Q


class PrecisionError(ArithmeticError):
    """A coefficient beyond the known truncation order was requested."""


_INF = float("inf")


def _minprec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class QSeries:
    """Laurent series in p (p**2 = q) over NField, known below exponent `prec`.

    ``prec is None`` means the series is exact (a Laurent polynomial).
    """

    __slots__ = ("c", "prec")

    def __init__(self, coeffs: dict[int, NField] | None = None, prec: int | None = None):
        c = {}
        for k, v in (coeffs or {}).items():
            if prec is not None and k >= prec:
                continue
            if not v.is_zero():
                c[k] = v
        self.c = c
        self.prec = prec

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(prec: int | None = None) -> "QSeries":
        return QSeries({}, prec)

    @staticmethod
    def one(prec: int | None = None) -> "QSeries":
        return QSeries({0: NF_ONE}, prec)

    @staticmethod
    def monomial(coeff: NField, k: int, prec: int | None = None) -> "QSeries":
        return QSeries({k: coeff}, prec)

    @staticmethod
    def const(coeff: NField, prec: int | None = None) -> "QSeries":
        return QSeries({0: coeff}, prec)

    @staticmethod
    def coerce(x) -> "QSeries":
        if isinstance(x, QSeries):
            return x
        if isinstance(x, NField):
            return QSeries.const(x)
        return QSeries.const(NField.coerce(x))

    # -- inspection -------------------------------------------------------
    def valuation(self):
        """Smallest known exponent, or `prec` for a series with no known terms."""
        if self.c:
            return min(self.c)
        return _INF if self.prec is None else self.prec

    def coefficient(self, k: int) -> NField:
        if self.prec is not None and k >= self.prec:
            raise PrecisionError(f"coefficient p^{k} beyond truncation {self.prec}")
        return self.c.get(k, NF_ZERO)

    def is_exact_zero(self) -> bool:
        return not self.c and self.prec is None

    def is_zero_known(self) -> bool:
        """No nonzero coefficient in the known range."""
        return not self.c

    def known_breadth(self) -> tuple[int, int | None]:
        lo = min(self.c) if self.c else 0
        return lo, self.prec

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "QSeries":
        other = QSeries.coerce(other)
        prec = _minprec(self.prec, other.prec)
        out = dict(self.c)
        for k, v in other.c.items():
            if k in out:
                s = out[k] + v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = v
        return QSeries(out, prec)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries({k: -v for k, v in self.c.items()}, self.prec)

    def __sub__(self, other) -> "QSeries":
        return self + (-QSeries.coerce(other))

    def __rsub__(self, other) -> "QSeries":
        return QSeries.coerce(other) + (-self)

    def __mul__(self, other) -> "QSeries":
        other = QSeries.coerce(other)
        if self.prec is None and other.prec is None:
            prec = None
        else:
            va, vb = self.valuation(), other.valuation()
            cands = []
            if self.prec is not None:
                cands.append(self.prec + (vb if vb is not _INF else 0) if vb is not _INF else None)
            if other.prec is not None:
                cands.append(other.prec + (va if va is not _INF else 0) if va is not _INF else None)
            cands = [x for x in cands if x is not None]
            prec = min(cands) if cands else None
        out: dict[int, NField] = {}
        for i, a in self.c.items():
            for j, b in other.c.items():
                k = i + j
                if prec is not None and k >= prec:
                    continue
                p = a * b
                if k in out:
                    out[k] = out[k] + p
                else:
                    out[k] = p
        return QSeries(out, prec)

    __rmul__ = __mul__

    def scale(self, coeff: NField) -> "QSeries":
        if coeff.is_zero():
            return QSeries.zero(self.prec)
        return QSeries({k: v * coeff for k, v in self.c.items()}, self.prec)

    def shift(self, k: int) -> "QSeries":
        prec = None if self.prec is None else self.prec + k
        return QSeries({e + k: v for e, v in self.c.items()}, prec)

    def truncate(self, prec: int) -> "QSeries":
        return QSeries(self.c, _minprec(self.prec, prec))

    def inverse(self, prec: int | None = None) -> "QSeries":
        """1/self, computed to absolute precision `prec` when self is exact."""
        if not self.c:
            raise ZeroDivisionError("inverse of a series with no known nonzero term")
        if self.prec is None and len(self.c) == 1:
            ((k, v),) = self.c.items()
            out = QSeries({-k: v.inverse()}, None)
            return out if prec is None else out.truncate(prec)
        v = min(self.c)
        rel_in = None if self.prec is None else self.prec - v
        rel_tgt = None if prec is None else prec + v
        rel = _minprec(rel_in, rel_tgt)
        if rel is None:
            raise PrecisionError("inverse of an exact series needs a target precision")
        unit = {k - v: c for k, c in self.c.items()}
        c0inv = unit[0].inverse()
        inv = {0: c0inv}
        for k in range(1, rel):
            acc = NF_ZERO
            for j, cj in unit.items():
                if 0 < j <= k:
                    b = inv.get(k - j)
                    if b is not None:
                        acc = acc + cj * b
            if not acc.is_zero():
                inv[k] = -(c0inv * acc)
        return QSeries({k - v: c for k, c in inv.items()}, rel - v)

    def __truediv__(self, other) -> "QSeries":
        other = QSeries.coerce(other)
        if other.prec is None and len(other.c) == 1:
            return self * other.inverse()
        if other.prec is None and self.prec is None:
            if self.is_exact_zero():
                return QSeries.zero()
            raise PrecisionError("division of exact series needs a truncation")
        return self * other.inverse(prec=self.prec if other.prec is None else None)

    def sqrt(self) -> "QSeries":
        """Square root of a series with constant term 1 (branch with +1)."""
        if self.c.get(0, NF_ZERO) != NF_ONE or self.valuation() != 0:
            raise ValueError("series square root requires constant term 1")
        if self.prec is None and len(self.c) == 1:
            return QSeries.one()
        rel = self.prec
        if rel is None:
            raise PrecisionError("sqrt of an exact series needs a truncation")
        half = NField.from_rational(Q(1, 2))
        r = {0: NF_ONE}
        for k in range(1, rel):
            acc = self.c.get(k, NF_ZERO)
            for i in range(1, k):
                ri, rk = r.get(i), r.get(k - i)
                if ri is not None and rk is not None:
                    acc = acc - ri * rk
            acc = acc * half
            if not acc.is_zero():
                r[k] = acc
        return QSeries(r, rel)

    def q_dq(self) -> "QSeries":
        """q d/dq acting on half-integer q-powers: p^k -> (k/2) p^k."""
        out = {}
        for k, v in self.c.items():
            if k:
                out[k] = v * NField.from_rational(Q(k, 2))
        return QSeries(out, self.prec)

    def map_coeffs(self, f: Callable[[NField], NField]) -> "QSeries":
        return QSeries({k: f(v) for k, v in self.c.items()}, self.prec)

    def substitute_s_negation(self) -> "QSeries":
        return self.map_coeffs(lambda x: x.substitute_s_negation())

    def substitute_p_negation(self) -> "QSeries":
        """p -> -p, flipping odd coefficients."""
        return QSeries({k: (v if k % 2 == 0 else -v) for k, v in self.c.items()}, self.prec)

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.inverse() ** (-n)
        out = QSeries.one(None)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    # -- comparison ---------------------------------------------------------
    def matches(self, other, upto: int | None = None) -> bool:
        """Equality of all coefficients on the common known range."""
        other = QSeries.coerce(other)
        prec = _minprec(_minprec(self.prec, other.prec), upto)
        keys = set(self.c) | set(other.c)
        for k in keys:
            if prec is not None and k >= prec:
                continue
            if self.c.get(k, NF_ZERO) != other.c.get(k, NF_ZERO):
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, (QSeries, NField, int)):
            return NotImplemented
        other = QSeries.coerce(other)
        return self.prec == other.prec and self.c == other.c

    def __hash__(self):
        return hash((self.prec, tuple(sorted(self.c.items(), key=lambda kv: kv[0]))))

    def is_rational_in_s(self) -> bool:
        return all(v.is_rational_in_s() for v in self.c.values())

    def __repr__(self) -> str:
        from .rings import to_string

        terms = ", ".join(f"p^{k}: {to_string(v)}" for k, v in sorted(self.c.items()))
        return f"QSeries({{{terms}}}, prec={self.prec})"


def qs_sigma(prec: int) -> QSeries:
    """sigma(q) = sqrt(1 + 4q/s^2), the square-root unit of the quantum discriminant."""
    from .rings import nf_s

    base = QSeries({0: NF_ONE, 2: NField.from_int(4) / nf_s(2)}, prec)
    return base.sqrt()


# ---------------------------------------------------------------------------
# Generic truncated series over an abstract coefficient ring
# ---------------------------------------------------------------------------


class Ring:
    """Coefficient-ring adapter used by :class:`TSeries`."""

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def from_rational(self, r):
        raise NotImplementedError


class NFRing(Ring):
    def zero(self):
        return NF_ZERO

    def one(self):
        return NF_ONE

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def inv(self, x):
        return x.inverse()

    def from_int(self, n: int):
        return NField.from_int(n)

    def from_rational(self, r):
        return NField.from_rational(r)


class QSRing(Ring):
    """QSeries coefficients; `prec` supplies the default truncation for inverses."""

    def __init__(self, prec: int | None = None):
        self.prec = prec

    def zero(self):
        return QSeries.zero(self.prec)

    def one(self):
        return QSeries.one(self.prec)

    def is_zero(self, x) -> bool:
        return x.is_exact_zero()

    def inv(self, x):
        return x.inverse(prec=self.prec)

    def from_int(self, n: int):
        return QSeries.const(NField.from_int(n), self.prec)

    def from_rational(self, r):
        return QSeries.const(NField.from_rational(r), self.prec)


NF_RING = NFRing()


class TSRing(Ring):
    """TSeries-valued coefficients, for bivariate series; `order` bounds inverses."""

    def __init__(self, inner: Ring, order: int | None = None):
        self.inner = inner
        self.order = order

    def zero(self):
        return TSeries.zero(self.inner, self.order)

    def one(self):
        return TSeries.one(self.inner, self.order)

    def is_zero(self, x) -> bool:
        return not x.c and x.order is None

    def inv(self, x):
        return x.inverse(order=self.order)

    def from_int(self, n: int):
        return TSeries(self.inner, {0: self.inner.from_int(n)}, self.order)

    def from_rational(self, r):
        return TSeries(self.inner, {0: self.inner.from_rational(r)}, self.order)


class TSeries:
    """Truncated Laurent series in one formal variable over `ring`.

    Coefficients are known for exponents strictly below `order`
    (``order is None`` marks an exact Laurent polynomial).
    """

    __slots__ = ("c", "order", "ring")

    def __init__(self, ring: Ring, coeffs: dict | None = None, order: int | None = None):
        self.ring = ring
        c = {}
        for k, v in (coeffs or {}).items():
            if order is not None and k >= order:
                continue
            if not ring.is_zero(v):
                c[k] = v
        self.c = c
        self.order = order

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(ring: Ring, order: int | None = None) -> "TSeries":
        return TSeries(ring, {}, order)

    @staticmethod
    def one(ring: Ring, order: int | None = None) -> "TSeries":
        return TSeries(ring, {0: ring.one()}, order)

    @staticmethod
    def variable(ring: Ring, order: int | None = None) -> "TSeries":
        return TSeries(ring, {1: ring.one()}, order)

    @staticmethod
    def monomial(ring: Ring, coeff, k: int, order: int | None = None) -> "TSeries":
        return TSeries(ring, {k: coeff}, order)

    def coerce(self, x) -> "TSeries":
        if isinstance(x, TSeries):
            return x
        return TSeries(self.ring, {0: x}, None)

    # -- inspection -------------------------------------------------------
    def valuation(self):
        if self.c:
            return min(self.c)
        return _INF if self.order is None else self.order

    def coefficient(self, k: int):
        if self.order is not None and k >= self.order:
            raise PrecisionError(f"coefficient ^{k} beyond order {self.order}")
        return self.c.get(k, self.ring.zero())

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "TSeries":
        other = self.coerce(other)
        order = _minprec(self.order, other.order)
        out = dict(self.c)
        for k, v in other.c.items():
            if k in out:
                out[k] = out[k] + v
            else:
                out[k] = v
        return TSeries(self.ring, out, order)

    def __neg__(self) -> "TSeries":
        return TSeries(self.ring, {k: -v for k, v in self.c.items()}, self.order)

    def __sub__(self, other) -> "TSeries":
        return self + (-self.coerce(other))

    def __mul__(self, other) -> "TSeries":
        other = self.coerce(other)
        if self.order is None and other.order is None:
            order = None
        else:
            va, vb = self.valuation(), other.valuation()
            cands = []
            if self.order is not None and vb is not _INF:
                cands.append(self.order + vb)
            if other.order is not None and va is not _INF:
                cands.append(other.order + va)
            order = min(cands) if cands else None
        out: dict = {}
        for i, a in self.c.items():
            for j, b in other.c.items():
                k = i + j
                if order is not None and k >= order:
                    continue
                p = a * b
                if k in out:
                    out[k] = out[k] + p
                else:
                    out[k] = p
        return TSeries(self.ring, out, order)

    def scale(self, coeff) -> "TSeries":
        return TSeries(self.ring, {k: v * coeff for k, v in self.c.items()}, self.order)

    def shift(self, k: int) -> "TSeries":
        order = None if self.order is None else self.order + k
        return TSeries(self.ring, {e + k: v for e, v in self.c.items()}, order)

    def truncate(self, order: int) -> "TSeries":
        return TSeries(self.ring, self.c, _minprec(self.order, order))

    def derivative(self) -> "TSeries":
        out = {}
        for k, v in self.c.items():
            if k:
                out[k - 1] = v * self.ring.from_int(k)
        order = None if self.order is None else self.order - 1
        return TSeries(self.ring, out, order)

    def inverse(self, order: int | None = None) -> "TSeries":
        if not self.c:
            raise ZeroDivisionError("inverse of series with no known nonzero term")
        if self.order is None and len(self.c) == 1:
            ((k, v),) = self.c.items()
            out = TSeries(self.ring, {-k: self.ring.inv(v)}, None)
            return out if order is None else out.truncate(order)
        v = min(self.c)
        rel_in = None if self.order is None else self.order - v
        rel_tgt = None if order is None else order + v
        rel = _minprec(rel_in, rel_tgt)
        if rel is None:
            raise PrecisionError("inverse of an exact series needs a target order")
        unit = {k - v: c for k, c in self.c.items()}
        c0inv = self.ring.inv(unit[0])
        inv = {0: c0inv}
        for k in range(1, rel):
            acc = None
            for j, cj in unit.items():
                if 0 < j <= k and (k - j) in inv:
                    t = cj * inv[k - j]
                    acc = t if acc is None else acc + t
            if acc is not None:
                inv[k] = -(c0inv * acc)
        return TSeries(self.ring, {k - v: c for k, c in inv.items()}, rel - v)

    def __truediv__(self, other) -> "TSeries":
        other = self.coerce(other)
        tgt = self.order if other.order is None else None
        if tgt is None and other.order is None and self.order is None:
            raise PrecisionError("division of exact series needs a truncation")
        return self * other.inverse(order=tgt)

    def compose(self, inner: "TSeries") -> "TSeries":
        """self(inner); inner must have positive valuation, self nonnegative."""
        if inner.c and min(inner.c) < 1:
            raise ValueError("composition requires positive valuation")
        if self.c and min(self.c) < 0:
            raise ValueError("composition of Laurent series is not supported")
        order = _minprec(self.order, inner.order)
        result = TSeries.zero(self.ring, order)
        power = TSeries.one(self.ring, order)
        top = max(self.c) if self.c else -1
        for k in range(0, top + 1):
            if k:
                power = power * inner
            if k in self.c:
                result = result + power.scale(self.c[k])
        return result

    def __pow__(self, n: int) -> "TSeries":
        if n < 0:
            return self.inverse() ** (-n)
        out = TSeries.one(self.ring, None)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def revert(self) -> "TSeries":
        """Functional inverse of a series with valuation exactly 1."""
        if self.valuation() != 1:
            raise ValueError("revert requires valuation 1")
        order = self.order
        if order is None:
            order = max(self.c) + 1
        a1inv = self.ring.inv(self.c[1])
        g = TSeries(self.ring, {1: a1inv}, order)
        for k in range(2, order):
            fg = self.compose(g.truncate(k + 1))
            defect = fg.c.get(k)
            if defect is not None and not self.ring.is_zero(defect):
                g = g + TSeries(self.ring, {k: -(a1inv * defect)}, order)
        return g

    def map(self, f) -> "TSeries":
        return TSeries(self.ring, {k: f(v) for k, v in self.c.items()}, self.order)

    def prune(self) -> "TSeries":
        """Drop coefficients with no known nonzero part.

        Only safe when those slots are exactly zero for structural reasons;
        the caller asserts that by calling this.
        """
        return TSeries(self.ring,
                       {k: v for k, v in self.c.items() if not known_zero(v)},
                       self.order)

    def matches(self, other, upto: int | None = None) -> bool:
        other = self.coerce(other)
        order = _minprec(_minprec(self.order, other.order), upto)
        for k in set(self.c) | set(other.c):
            if order is not None and k >= order:
                continue
            a = self.c.get(k, self.ring.zero())
            b = other.c.get(k, self.ring.zero())
            if not known_zero(a - b):
                return False
        return True

    def __repr__(self) -> str:
        ks = ", ".join(f"{k}: {v!r}" for k, v in sorted(self.c.items()))
        return f"TSeries({{{ks}}}, order={self.order})"


def log1p(x: TSeries) -> TSeries:
    """log(1 + x) for a series x of positive valuation."""
    if x.c and min(x.c) < 1:
        raise ValueError("log1p requires positive valuation")
    order = x.order
    if order is None:
        raise PrecisionError("log1p of an exact series needs a truncation")
    v = x.valuation()
    if v is _INF:
        return TSeries.zero(x.ring, order)
    result = TSeries.zero(x.ring, order)
    power = TSeries.one(x.ring, order)
    sign = 1
    m = 0
    while (m + 1) * v < order:
        m += 1
        power = power * x
        result = result + power.scale(x.ring.from_rational(Q(sign, m)))
        sign = -sign
    return result


def known_zero(x) -> bool:
    """All known coefficients of x vanish (recursively for nested series)."""
    if isinstance(x, NField):
        return x.is_zero()
    if isinstance(x, QSeries):
        return x.is_zero_known()
    if isinstance(x, TSeries):
        return all(known_zero(v) for v in x.c.values())
    return not x


def double_factorial(n: int) -> int:
    """(n)!! with (-1)!! = 1."""
    if n <= 0:
        return 1
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out
