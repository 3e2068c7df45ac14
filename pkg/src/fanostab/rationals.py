"""Exact scalars: rationals, quadratic extensions Q(sqrt(d)), and rationals
carrying a formal infinitesimal.

``Rat`` is an alias for :class:`fractions.Fraction`, which already stores
values in lowest terms with a positive denominator.  :class:`QuadExt`
represents ``a + b*sqrt(d)`` with rational ``a, b`` and a squarefree integer
``d``; arithmetic never leaves the field, and mixing two different ``d`` is
rejected loudly.  Anything of higher algebraic degree is out of scope here
and surfaces as ``None`` from :func:`field_sqrt`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from sympy import factorint

from .errors import FanostabError

Rat = Fraction

Scalar = "Fraction | QuadExt"  # informal union used in docstrings


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rat_sqrt(r: Fraction):
    """Exact square root of a rational, or None if r is not a perfect square."""
    r = as_rat(r)
    if r < 0:
        return None
    pn, pd = isqrt(r.numerator), isqrt(r.denominator)
    if pn * pn == r.numerator and pd * pd == r.denominator:
        return Fraction(pn, pd)
    return None


def squarefree_decomp(r: Fraction):
    """Write a nonzero rational as s^2 * d with d a squarefree integer.

    Returns (s, d), both exact.  The sign of r goes into d.
    """
    r = as_rat(r)
    if r == 0:
        return Fraction(0), 1
    n = abs(r.numerator) * r.denominator
    s_num = 1
    d = 1
    for p, e in factorint(n).items():
        s_num *= p ** (e // 2)
        if e % 2:
            d *= p
    sign = 1 if r > 0 else -1
    return Fraction(s_num, r.denominator), sign * d


@dataclass(frozen=True)
class QuadExt:
    """Element a + b*sqrt(d) of a real or imaginary quadratic field.

    d is a squarefree integer != 0, 1.  b may be zero only transiently;
    :func:`quadext` demotes such values back to Fraction.
    """

    a: Fraction
    b: Fraction
    d: int

    # -- helpers -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d and other.b != 0 and self.b != 0:
                raise FanostabError(
                    f"mixed quadratic extensions sqrt({self.d}) and sqrt({other.d})"
                )
            d = self.d if self.b != 0 else other.d
            return QuadExt(other.a, other.b, d), d
        if isinstance(other, (int, Fraction)):
            return QuadExt(as_rat(other), Fraction(0), self.d), self.d
        return NotImplemented, None

    def conj(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    # -- ring operations -----------------------------------------------
    def __add__(self, other):
        o, d = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return quadext(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o, _ = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o, d = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return quadext(
            self.a * o.a + self.b * o.b * d,
            self.a * o.b + self.b * o.a,
            d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o, d = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        inv = QuadExt(o.a / n, -o.b / n, d)
        return self * inv

    def __rtruediv__(self, other):
        return QuadExt(as_rat(other), Fraction(0), self.d) / self

    def __pow__(self, k: int):
        if k < 0:
            return 1 / (self ** (-k))
        out = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    # -- comparisons -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadExt):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        mag = abs(self.b)
        tail = f"sqrt({self.d})" if mag == 1 else f"{mag}*sqrt({self.d})"
        if self.a == 0:
            return tail if self.b > 0 else f"-{tail}"
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {tail}"


def quadext(a, b, d):
    """Normalizing constructor: returns a Fraction when the sqrt part is zero."""
    a, b = as_rat(a), as_rat(b)
    if b == 0:
        return a
    if d in (0, 1):
        raise FanostabError("quadratic extension needs squarefree d != 0, 1")
    return QuadExt(a, b, d)


def conj(x):
    return x.conj() if isinstance(x, QuadExt) else as_rat(x)


def scalar_is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) or (isinstance(x, QuadExt) and x.b == 0)


def field_sqrt(x):
    """Square root of a Fraction or QuadExt inside some Q(sqrt(d)).

    Returns a Fraction, a QuadExt, or None when the root would require a
    second (nested) extension.
    """
    if isinstance(x, QuadExt) and x.b != 0:
        # sqrt(a + b*sqrt(d)) lies in Q(sqrt(d)) iff a^2 - b^2 d is a square
        # c^2 and (a +- c)/2 is a square.
        c = rat_sqrt(x.norm())
        if c is None:
            return None
        for cc in (c, -c):
            half = (x.a + cc) / 2
            u = rat_sqrt(half)
            if u is not None and u != 0:
                v = x.b / (2 * u)
                cand = quadext(u, v, x.d)
                if cand * cand == x:
                    return cand
        return None
    r = x.a if isinstance(x, QuadExt) else as_rat(x)
    if r == 0:
        return Fraction(0)
    exact = rat_sqrt(r)
    if exact is not None:
        return exact
    # imaginary quadratic fields are fine: geometric points may be complex
    s, d = squarefree_decomp(r)
    return QuadExt(Fraction(0), s, d)


def field_name(x) -> str:
    """Human-readable residue-field tag for report output."""
    if scalar_is_rational(x):
        return "Q"
    return f"Q(sqrt({x.d}))"


@dataclass(frozen=True, order=False)
class EpsRat:
    """Rational number plus a formal positive infinitesimal: c0 + c1*eps + c2*eps^2.

    Comparison is lexicographic in (c0, c1, c2), which is exactly the order
    relevant for 0 < eps << 1.  Products truncate above eps^2.
    """

    c0: Fraction
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)

    def _lift(self, other):
        if isinstance(other, EpsRat):
            return other
        return EpsRat(as_rat(other))

    def __add__(self, other):
        o = self._lift(other)
        return EpsRat(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2)

    __radd__ = __add__

    def __neg__(self):
        return EpsRat(-self.c0, -self.c1, -self.c2)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return EpsRat(
            self.c0 * o.c0,
            self.c0 * o.c1 + self.c1 * o.c0,
            self.c0 * o.c2 + self.c1 * o.c1 + self.c2 * o.c0,
        )

    __rmul__ = __mul__

    def _key(self):
        return (self.c0, self.c1, self.c2)

    def __eq__(self, other):
        return self._key() == self._lift(other)._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        return self._key() < self._lift(other)._key()

    def __le__(self, other):
        return self._key() <= self._lift(other)._key()

    def __gt__(self, other):
        return self._key() > self._lift(other)._key()

    def __ge__(self, other):
        return self._key() >= self._lift(other)._key()

    def __repr__(self):
        parts = []
        if self.c0 or not (self.c1 or self.c2):
            parts.append(str(self.c0))
        if self.c1:
            parts.append(f"{self.c1}*eps")
        if self.c2:
            parts.append(f"{self.c2}*eps^2")
        return " + ".join(parts).replace("+ -", "- ")


EPS = EpsRat(Fraction(0), Fraction(1))
