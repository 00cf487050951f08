"""Exact coefficient tower: rationals, the eighth-root extension, and K = Q(z8)(w).

Every weight produced by the engine lives in the field K of rational functions
in a transcendental ``w`` whose coefficients are degree-<4 polynomials in a
primitive eighth root of unity ``z8`` (``z8**4 == -1``).  The equivariant
parameter is ``s = w**2``; square roots such as sqrt(2), sqrt(-1) and sqrt(s)
all exist inside K:

    i       = z8**2
    sqrt(2) = z8 - z8**3
    sqrt(s) = w
"""

from __future__ import annotations

from typing import Iterable, Union

try:
    from gmpy2 import mpq as _mpq

    def Q(a=0, b=1):
        return _mpq(a, b)
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _Fraction

    def Q(a=0, b=1):
        return _Fraction(a, b)


_Q0 = Q(0)
_Q1 = Q(1)


class Zeta8:
    """An element a0 + a1*z8 + a2*z8^2 + a3*z8^3 with rational a_i, z8^4 = -1."""

    __slots__ = ("c",)

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self.c = (Q(c0), Q(c1), Q(c2), Q(c3))

    @staticmethod
    def _raw(c):
        z = object.__new__(Zeta8)
        z.c = c
        return z

    def __add__(self, other: "Zeta8") -> "Zeta8":
        a, b = self.c, other.c
        return Zeta8._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    def __sub__(self, other: "Zeta8") -> "Zeta8":
        a, b = self.c, other.c
        return Zeta8._raw((a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]))

    def __neg__(self) -> "Zeta8":
        a = self.c
        return Zeta8._raw((-a[0], -a[1], -a[2], -a[3]))

    def __mul__(self, other: "Zeta8") -> "Zeta8":
        a, b = self.c, other.c
        # fast paths: purely rational factors dominate in practice
        if not (a[1] or a[2] or a[3]):
            a0 = a[0]
            return Zeta8._raw((a0 * b[0], a0 * b[1], a0 * b[2], a0 * b[3]))
        if not (b[1] or b[2] or b[3]):
            b0 = b[0]
            return Zeta8._raw((a[0] * b0, a[1] * b0, a[2] * b0, a[3] * b0))
        out = [_Q0, _Q0, _Q0, _Q0]
        for i in range(4):
            ai = a[i]
            if not ai:
                continue
            for j in range(4):
                bj = b[j]
                if not bj:
                    continue
                k = i + j
                if k < 4:
                    out[k] += ai * bj
                else:
                    out[k - 4] -= ai * bj
        return Zeta8._raw(tuple(out))

    def scale(self, r) -> "Zeta8":
        a = self.c
        return Zeta8._raw((a[0] * r, a[1] * r, a[2] * r, a[3] * r))

    def galois(self, k: int) -> "Zeta8":
        """Image under z8 -> z8^k for odd k; the four of these are Gal(Q(z8)/Q)."""
        out = [_Q0, _Q0, _Q0, _Q0]
        for j, aj in enumerate(self.c):
            if not aj:
                continue
            m = (j * k) % 8
            if m < 4:
                out[m] += aj
            else:
                out[m - 4] -= aj
        return Zeta8._raw(tuple(out))

    def inverse(self) -> "Zeta8":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(z8)")
        conj = self.galois(3) * self.galois(5) * self.galois(7)
        norm = self * conj
        n = norm.c
        assert not n[1] and not n[2] and not n[3], "norm must be rational"
        return conj.scale(1 / n[0])

    def is_zero(self) -> bool:
        a = self.c
        return not (a[0] or a[1] or a[2] or a[3])

    def is_rational(self) -> bool:
        a = self.c
        return not (a[1] or a[2] or a[3])

    def rational_part(self):
        return self.c[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, Zeta8) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        return f"Zeta8{self.c}"


Z8_ZERO = Zeta8(0)
Z8_ONE = Zeta8(1)
Z8_GEN = Zeta8(0, 1)
Z8_I = Zeta8(0, 0, 1)          # sqrt(-1)
Z8_SQRT2 = Zeta8(0, 1, 0, -1)  # (z8 - z8^3)^2 = 2
Z8_SQRT_M2 = Zeta8(0, 1, 0, 1)  # (z8 + z8^3)^2 = -2


class WPoly:
    """Sparse polynomial in w with Zeta8 coefficients (nonnegative exponents)."""

    __slots__ = ("c",)

    def __init__(self, coeffs: dict[int, Zeta8] | None = None):
        self.c = {k: v for k, v in (coeffs or {}).items() if not v.is_zero()}

    @staticmethod
    def const(z: Zeta8) -> "WPoly":
        return WPoly({0: z})

    @staticmethod
    def monomial(z: Zeta8, k: int) -> "WPoly":
        return WPoly({k: z})

    def __add__(self, other: "WPoly") -> "WPoly":
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
        return WPoly(out)

    def __neg__(self) -> "WPoly":
        return WPoly({k: -v for k, v in self.c.items()})

    def __sub__(self, other: "WPoly") -> "WPoly":
        return self + (-other)

    def __mul__(self, other: "WPoly") -> "WPoly":
        if len(self.c) == 1:
            ((i, a),) = self.c.items()
            return WPoly({i + j: a * b for j, b in other.c.items()})
        if len(other.c) == 1:
            ((j, b),) = other.c.items()
            return WPoly({i + j: a * b for i, a in self.c.items()})
        out: dict[int, Zeta8] = {}
        for i, a in self.c.items():
            for j, b in other.c.items():
                k = i + j
                p = a * b
                if k in out:
                    out[k] = out[k] + p
                else:
                    out[k] = p
        return WPoly(out)

    def scale(self, z: Zeta8) -> "WPoly":
        return WPoly({k: v * z for k, v in self.c.items()})

    def is_zero(self) -> bool:
        return not self.c

    def degree(self) -> int:
        return max(self.c) if self.c else -1

    def valuation(self) -> int:
        return min(self.c) if self.c else -1

    def leading(self) -> Zeta8:
        return self.c[self.degree()]

    def shift(self, k: int) -> "WPoly":
        return WPoly({e + k: v for e, v in self.c.items()})

    def divmod(self, other: "WPoly") -> tuple["WPoly", "WPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q: dict[int, Zeta8] = {}
        r = self
        dlead = other.leading()
        dinv = dlead.inverse()
        ddeg = other.degree()
        while not r.is_zero() and r.degree() >= ddeg:
            k = r.degree() - ddeg
            coef = r.leading() * dinv
            q[k] = coef
            r = r - other.shift(k).scale(coef)
        return WPoly(q), r

    def is_even(self) -> bool:
        return all(k % 2 == 0 for k in self.c)

    def is_rational_coeffs(self) -> bool:
        return all(v.is_rational() for v in self.c.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, WPoly) and self.c == other.c

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.c.items(), key=lambda kv: kv[0])))

    def __repr__(self) -> str:
        return f"WPoly({self.c})"


def _wpoly_gcd(a: WPoly, b: WPoly) -> WPoly:
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    if a.is_zero():
        return a
    return a.scale(a.leading().inverse())


NFieldLike = Union["NField", Zeta8, int]


class NField:
    """Element of K = Q(z8)(w), kept as a reduced fraction num/den of WPoly.

    Normal form: gcd(num, den) = 1, den monic, and den has zero w-valuation
    whenever possible (pure w-powers are pushed into a single shared factor).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: WPoly, den: WPoly | None = None, reduce: bool = True):
        if den is None:
            den = WPoly.const(Z8_ONE)
        if den.is_zero():
            raise ZeroDivisionError("NField with zero denominator")
        if reduce:
            num, den = self._reduce(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(num: WPoly, den: WPoly) -> tuple[WPoly, WPoly]:
        if num.is_zero():
            return num, WPoly.const(Z8_ONE)
        # strip the common pure w-power first; keeps gcd inputs small
        v = min(num.valuation(), den.valuation())
        if v > 0:
            num = num.shift(-v)
            den = den.shift(-v)
        if len(den.c) == 1 and den.degree() == 0:
            lead = den.leading()
            if lead == Z8_ONE:
                return num, den
            return num.scale(lead.inverse()), WPoly.const(Z8_ONE)
        g = _wpoly_gcd(num, den)
        if g.degree() > 0:
            num, _ = num.divmod(g)
            den, _ = den.divmod(g)
        lead = den.leading().inverse()
        return num.scale(lead), den.scale(lead)

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_rational(r) -> "NField":
        return NField(WPoly.const(Zeta8(r)), reduce=False)

    @staticmethod
    def from_int(n: int) -> "NField":
        return NField.from_rational(Q(n))

    @staticmethod
    def from_zeta(z: Zeta8) -> "NField":
        return NField(WPoly.const(z), reduce=False)

    @staticmethod
    def w_power(k: int, coeff: Zeta8 = Z8_ONE) -> "NField":
        """coeff * w**k for any integer k."""
        if k >= 0:
            return NField(WPoly.monomial(coeff, k), reduce=False)
        return NField(WPoly.const(coeff), WPoly.monomial(Z8_ONE, -k), reduce=False)

    @staticmethod
    def coerce(x: NFieldLike) -> "NField":
        if isinstance(x, NField):
            return x
        if isinstance(x, Zeta8):
            return NField.from_zeta(x)
        return NField.from_rational(Q(x))

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: NFieldLike) -> "NField":
        other = NField.coerce(other)
        if self.den == other.den:
            return NField(self.num + other.num, self.den)
        return NField(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "NField":
        return NField(-self.num, self.den, reduce=False)

    def __sub__(self, other: NFieldLike) -> "NField":
        return self + (-NField.coerce(other))

    def __rsub__(self, other: NFieldLike) -> "NField":
        return NField.coerce(other) + (-self)

    def __mul__(self, other: NFieldLike) -> "NField":
        other = NField.coerce(other)
        return NField(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "NField":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in K")
        return NField(self.den, self.num)

    def __truediv__(self, other: NFieldLike) -> "NField":
        return self * NField.coerce(other).inverse()

    def __rtruediv__(self, other: NFieldLike) -> "NField":
        return NField.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "NField":
        if n < 0:
            return self.inverse() ** (-n)
        out = NF_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_rational_in_s(self) -> bool:
        """True iff the element is z8-free and even in w, i.e. lies in Q(s)."""
        return (self.num.is_rational_coeffs() and self.den.is_rational_coeffs()
                and self.num.is_even() and self.den.is_even())

    def substitute_s_negation(self) -> "NField":
        """The image under w -> i*w, which realizes s -> -s on Q(s)."""
        def twist(p: WPoly) -> WPoly:
            out: dict[int, Zeta8] = {}
            for k, v in p.c.items():
                out[k] = v * _I_POWERS[k % 4]
            return WPoly(out)

        return NField(twist(self.num), twist(self.den))

    def __eq__(self, other) -> bool:
        if not isinstance(other, (NField, Zeta8, int)):
            return NotImplemented
        other = NField.coerce(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"NField({to_string(self)!r})"


_I_POWERS = (Z8_ONE, Z8_I, Zeta8(-1), Zeta8(0, 0, -1))

NF_ZERO = NField.from_int(0)
NF_ONE = NField.from_int(1)
NF_I = NField.from_zeta(Z8_I)
NF_SQRT2 = NField.from_zeta(Z8_SQRT2)
NF_SQRT_M2 = NField.from_zeta(Z8_SQRT_M2)


def nf_s(power: int = 1) -> NField:
    """s**power with s = w**2."""
    return NField.w_power(2 * power)


# -- normal-form text rendering and parsing ----------------------------
#
# Grammar (whitespace-free canonical form; the parser also accepts spaces):
#
#   elem    := laurent | "(" laurent ")/(" laurent ")"
#   laurent := term (("+"|"-") term)*
#   term    := rat factors | factors          (a bare factor list means coeff 1)
#   factors := ("*"? "z8" ("^" int)?)? ("*"? "w" ("^" int)?)?
#   rat     := int ("/" int)?
#
# Terms are emitted with w-exponents ascending, z8-exponents ascending inside
# each w-exponent.  A pure w-power denominator is folded into negative
# w-exponents so most values render as a single Laurent polynomial.


def _rat_str(r) -> str:
    return str(r)


def _laurent_terms(p: WPoly, wshift: int) -> list[tuple[int, int, object]]:
    terms = []
    for k in sorted(p.c):
        z = p.c[k]
        for j, a in enumerate(z.c):
            if a:
                terms.append((k + wshift, j, a))
    return terms


def _render_laurent(terms: list[tuple[int, int, object]]) -> str:
    if not terms:
        return "0"
    parts = []
    for k, j, a in terms:
        mag = a if a > 0 else -a
        factors = []
        if j:
            factors.append("z8" if j == 1 else f"z8^{j}")
        if k:
            factors.append("w" if k == 1 else f"w^{k}")
        if not factors or mag != 1:
            factors.insert(0, _rat_str(mag))
        body = "*".join(factors)
        parts.append(("-" if a < 0 else ("+" if parts else "")) + body)
    return "".join(parts)


def to_string(x: NField) -> str:
    """Canonical text form; bit-exact round trip through :func:`parse`."""
    den = x.den
    if len(den.c) == 1:
        k = den.degree()
        lead = den.leading()
        assert lead == Z8_ONE
        return _render_laurent(_laurent_terms(x.num, -k))
    return "(%s)/(%s)" % (_render_laurent(_laurent_terms(x.num, 0)),
                          _render_laurent(_laurent_terms(x.den, 0)))


class _ParseError(ValueError):
    pass


def _parse_laurent(text: str) -> NField:
    import re

    token = re.compile(
        r"\s*(?P<sign>[+-])?\s*"
        r"(?:(?P<num>\d+)(?:/(?P<den>\d+))?)?"
        r"(?:\*?(?P<z8>z8)(?:\^(?P<zexp>\d+))?)?"
        r"(?:\*?(?P<w>w)(?:\^(?P<wexp>-?\d+))?)?"
    )
    pos = 0
    total = NF_ZERO
    first = True
    text = text.strip()
    while pos < len(text):
        m = token.match(text, pos)
        if not m or m.end() == pos:
            raise _ParseError(f"cannot parse NField text at {text[pos:]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("sign") is None and not first:
            raise _ParseError(f"missing sign at {text[pos:]!r}")
        if m.group("num") is None and m.group("z8") is None and m.group("w") is None:
            raise _ParseError(f"empty term at {text[pos:]!r}")
        r = Q(int(m.group("num")), int(m.group("den") or 1)) if m.group("num") else Q(1)
        zexp = int(m.group("zexp") or (1 if m.group("z8") else 0))
        wexp = int(m.group("wexp") or (1 if m.group("w") else 0))
        coeff = [Q(0)] * 4
        coeff[zexp] = Q(sign) * r
        total = total + NField.w_power(wexp, Zeta8(*coeff))
        pos = m.end()
        first = False
    return total


def parse(text: str) -> NField:
    """Inverse of :func:`to_string`."""
    text = text.strip()
    if text.startswith("("):
        try:
            numtxt, dentxt = text.split(")/(")
        except ValueError as exc:
            raise _ParseError(f"malformed fraction {text!r}") from exc
        num = _parse_laurent(numtxt[1:])
        den = _parse_laurent(dentxt[:-1])
        return num / den
    return _parse_laurent(text)
