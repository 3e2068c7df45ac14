"""Truncated bivariate power series and square completion for curve germs.

A series lives in local variables (x, y); all terms of total degree >= the
precision N are discarded by every operation.  Inversion requires a nonzero
constant term.  The main consumer is germ classification: a multiplicity-two
germ f with a y^2 term is rewritten as  unit * (y - a(x))^2 - b(x)  and the
x-order of b reads off the A_n type.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

from .errors import (
    DegenerateInput,
    FanostabError,
    NeedsLinearPreparation,
    WrongMultiplicity,
)
from .poly import MPoly

LOCAL_VARS = ("x", "y")

DEFAULT_PRECISION = 24
MAX_PRECISION = 64


class TruncSeries:
    """Power series in (x, y) truncated at a fixed total degree."""

    __slots__ = ("terms", "prec")

    def __init__(self, terms: Dict[Tuple[int, int], object], prec: int):
        if prec <= 0:
            raise FanostabError("precision must be positive")
        object.__setattr__(self, "prec", int(prec))
        clean = {}
        for (i, j), c in terms.items():
            if i + j < prec and c != 0:
                clean[(i, j)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("TruncSeries is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_mpoly(cls, f: MPoly, prec: int) -> "TruncSeries":
        if len(f.vars) != 2:
            raise FanostabError("germ series need exactly two local variables")
        return cls({(e[0], e[1]): c for e, c in f.terms.items()}, prec)

    @classmethod
    def const(cls, c, prec: int) -> "TruncSeries":
        return cls({(0, 0): c}, prec)

    @classmethod
    def x(cls, prec: int) -> "TruncSeries":
        return cls({(1, 0): Fraction(1)}, prec)

    @classmethod
    def y(cls, prec: int) -> "TruncSeries":
        return cls({(0, 1): Fraction(1)}, prec)

    # -- queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        return self.terms.get((0, 0), Fraction(0))

    def coefficient(self, i: int, j: int):
        return self.terms.get((i, j), Fraction(0))

    def low_degree(self):
        """Smallest total degree with a nonzero term, or None."""
        if not self.terms:
            return None
        return min(i + j for i, j in self.terms)

    def x_order(self):
        """Order in x of a series with no y terms, or None if zero."""
        if any(j for _, j in self.terms):
            raise FanostabError("x_order applies to series in x only")
        if not self.terms:
            return None
        return min(i for i, _ in self.terms)

    def depends_on_y(self) -> bool:
        return any(j for _, j in self.terms)

    def to_mpoly(self) -> MPoly:
        return MPoly(LOCAL_VARS, dict(self.terms))

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.prec == other.prec and self.terms == other.terms

    def __hash__(self):
        return hash((self.prec, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"{self.to_mpoly()!r} + O(deg {self.prec})"

    # -- arithmetic --------------------------------------------------------
    def _join(self, other):
        if isinstance(other, TruncSeries):
            return other, min(self.prec, other.prec)
        return TruncSeries.const(other, self.prec), self.prec

    def __add__(self, other):
        o, prec = self._join(other)
        out = dict(self.terms)
        for k, c in o.terms.items():
            s = out.get(k, 0) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return TruncSeries(out, prec)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries({k: -c for k, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        o, _ = self._join(other)
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o, prec = self._join(other)
        out: Dict[Tuple[int, int], object] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in o.terms.items():
                i, j = i1 + i2, j1 + j2
                if i + j >= prec:
                    continue
                s = out.get((i, j), 0) + c1 * c2
                if s == 0:
                    out.pop((i, j), None)
                else:
                    out[(i, j)] = s
        return TruncSeries(out, prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = TruncSeries.const(Fraction(1), self.prec)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "TruncSeries":
        """Reciprocal of a unit series, by order doubling."""
        c = self.constant_term()
        if c == 0:
            raise FanostabError("inversion requires a nonzero constant term")
        inv = TruncSeries.const(1 / c, self.prec)
        order = 1
        while order < self.prec:
            inv = inv * (2 - self * inv)
            order *= 2
        return inv

    def __truediv__(self, other):
        o, _ = self._join(other)
        return self * o.inverse()

    # -- substitution -----------------------------------------------------
    def diff_y(self) -> "TruncSeries":
        out = {}
        for (i, j), c in self.terms.items():
            if j:
                out[(i, j - 1)] = c * j
        return TruncSeries(out, self.prec)

    def subs_y(self, a: "TruncSeries") -> "TruncSeries":
        """Substitute y -> a(x); a must be a series in x only."""
        if a.depends_on_y():
            raise FanostabError("substitution image must be a series in x")
        prec = min(self.prec, a.prec)
        by_j: Dict[int, Dict[Tuple[int, int], object]] = {}
        for (i, j), c in self.terms.items():
            by_j.setdefault(j, {})[(i, 0)] = c
        out = TruncSeries({}, prec)
        apow = TruncSeries.const(Fraction(1), prec)
        for j in range(0, max(by_j) + 1 if by_j else 0):
            if j in by_j:
                out = out + TruncSeries(by_j[j], prec) * apow
            apow = apow * a
        return out

    def shift_y(self, a: "TruncSeries") -> "TruncSeries":
        """Substitute y -> y + a(x)."""
        if a.depends_on_y():
            raise FanostabError("shift amount must be a series in x")
        prec = min(self.prec, a.prec)
        out = TruncSeries({}, prec)
        y = TruncSeries.y(prec)
        target = y + a
        tpow = TruncSeries.const(Fraction(1), prec)
        by_j: Dict[int, Dict[Tuple[int, int], object]] = {}
        for (i, j), c in self.terms.items():
            by_j.setdefault(j, {})[(i, 0)] = c
        for j in range(0, max(by_j) + 1 if by_j else 0):
            if j in by_j:
                out = out + TruncSeries(by_j[j], prec) * tpow
            tpow = tpow * target
        return out


def complete_square(f: TruncSeries):
    """Rewrite a multiplicity-two germ as unit*(y - a(x))^2 - b(x).

    Preconditions: f(0,0) = 0, the lowest total degree of f is two, and the
    monomial y^2 appears with nonzero coefficient (linear preparation is the
    caller's job).  Returns (a, b) as series in x; the expansion identity
    holds up to the precision of f.  ord_x(b) = n + 1 certifies an A_n germ.
    """
    if f.is_zero():
        raise DegenerateInput("zero germ")
    low = f.low_degree()
    if f.constant_term() != 0 or low != 2:
        raise WrongMultiplicity(f"multiplicity is {low}, need 2")
    if f.coefficient(0, 2) == 0:
        raise NeedsLinearPreparation("no y^2 term; change coordinates first")
    prec = f.prec
    fy = f.diff_y()
    fyy = fy.diff_y()
    a = TruncSeries({}, prec)
    # Newton iteration for the critical locus f_y(x, a(x)) = 0; each step
    # doubles the x-order of the defect, and f_yy is a unit at the origin.
    for _ in range(prec.bit_length() + 2):
        defect = fy.subs_y(a)
        if defect.is_zero():
            break
        a = a - defect / fyy.subs_y(a)
    else:
        raise FanostabError("square completion did not converge")
    b = -f.subs_y(a)
    return a, b


def expand_square(a: TruncSeries, b: TruncSeries, unit: TruncSeries) -> TruncSeries:
    """unit*(y - a)^2 - b, used by tests to check the round trip."""
    y = TruncSeries.y(min(a.prec, b.prec, unit.prec))
    w = y - a
    return unit * w * w - b


def square_unit(f: TruncSeries, a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """The unit h with f = h*(y - a)^2 - b, recovered from the completed data."""
    g = f.shift_y(a) + b
    if any(j < 2 for _, j in g.terms):
        raise FanostabError("square completion data does not match the germ")
    h = TruncSeries({(i, j - 2): c for (i, j), c in g.terms.items()}, f.prec)
    return h.shift_y(-a)
