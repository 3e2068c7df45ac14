"""Intersection calculus on P^3 x (parameter space) and the CM divisor class.

The ambient classes are h (hyperplane of P^3), eta (hyperplane pulled back
from the space of quadrics) and xi (the relative hyperplane of the bundle of
cubics on quadrics).  The only relation imposed is h^4 = 0; the computation
never exceeds total degree two in (eta, xi), so no relation there is needed.

``blowup_push`` evaluates the pushforward of H^a * E^b down the blow-up of
the incidence variety along the universal curve, deriving everything from
the stored center class, the first Chern class of its normal bundle and the
second Chern class.  The anticanonical fourth power then assembles into the
CM class 22*xi + 51*eta with slope 22/51.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import FanostabError, WrongDegree
from .poly import MPoly
from .rationals import Rat

CHOW_VARS = ("h", "eta", "xi")


class ChowClass:
    """Polynomial in h, eta, xi with the relation h^4 = 0."""

    __slots__ = ("poly",)

    def __init__(self, poly: MPoly):
        if poly.vars != CHOW_VARS:
            poly = poly.rename(CHOW_VARS)
        object.__setattr__(
            self, "poly", MPoly(CHOW_VARS, {e: c for e, c in poly.terms.items() if e[0] < 4})
        )

    def __setattr__(self, *a):
        raise AttributeError("ChowClass is immutable")

    @classmethod
    def from_terms(cls, terms):
        return cls(MPoly(CHOW_VARS, terms))

    @classmethod
    def scalar(cls, c):
        return cls(MPoly.const(CHOW_VARS, c))

    def __add__(self, other):
        other = other if isinstance(other, ChowClass) else ChowClass.scalar(other)
        return ChowClass(self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(-self.poly)

    def __sub__(self, other):
        other = other if isinstance(other, ChowClass) else ChowClass.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ChowClass):
            return ChowClass(self.poly * other.poly)
        return ChowClass(self.poly * other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ChowClass.scalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, ChowClass):
            return self.poly == other.poly
        return self.poly == other

    def __hash__(self):
        return hash(self.poly)

    def is_zero(self):
        return self.poly.is_zero()

    def coefficient(self, h=0, eta=0, xi=0) -> Fraction:
        return self.poly.terms.get((h, eta, xi), Fraction(0))

    def __repr__(self):
        return repr(self.poly)


H = ChowClass(MPoly.var(CHOW_VARS, "h"))
ETA = ChowClass(MPoly.var(CHOW_VARS, "eta"))
XI = ChowClass(MPoly.var(CHOW_VARS, "xi"))


def push_p3(c: ChowClass) -> ChowClass:
    """Pushforward along the P^3 factor: the coefficient of h^3."""
    out = {}
    for (eh, ee, ex), coeff in c.poly.terms.items():
        if eh == 3:
            out[(0, ee, ex)] = coeff
    return ChowClass.from_terms(out)


@dataclass(frozen=True)
class BlowupData:
    """Class of the universal curve and Chern data of its normal bundle.

    center: [Y] = (3h + xi)(2h + eta), codimension two.
    gamma:  c1 of the normal bundle, (5h + xi + eta).
    c2:     c2 of the normal bundle, (3h + xi)(2h + eta).
    """

    center: ChowClass = field(default_factory=lambda: (3 * H + XI) * (2 * H + ETA))
    gamma: ChowClass = field(default_factory=lambda: 5 * H + XI + ETA)
    c2: ChowClass = field(default_factory=lambda: (3 * H + XI) * (2 * H + ETA))

    def segre(self, k: int) -> ChowClass:
        """Segre class s_k of the rank-two normal bundle."""
        if k == 0:
            return ChowClass.scalar(1)
        if k == 1:
            return -self.gamma
        if k == 2:
            return self.gamma * self.gamma - self.c2
        raise FanostabError("only s_0, s_1, s_2 are meaningful here")


def blowup_push(a: int, b: int, data: BlowupData | None = None) -> ChowClass:
    """f_*(H^a * E^b) for the blow-up along the universal curve, a + b = 4.

    E over the codimension-two center is a P^1-bundle; powers of E push
    down through Segre classes of the normal bundle, with E^b carrying the
    sign (-1)^(b-1) from E restricted to itself.
    """
    if a < 0 or b < 0 or a + b != 4:
        raise WrongDegree(f"need a + b = 4 with a, b >= 0, got ({a}, {b})")
    data = data or BlowupData()
    if b <= 1:
        # H^4 dies by h^4 = 0; a single E pushes to zero over a curve center.
        return ChowClass.scalar(0)
    inner = (H ** a) * data.segre(b - 2) * data.center
    pushed = push_p3(inner)
    return pushed if (b - 1) % 2 == 0 else -pushed


@dataclass(frozen=True)
class CMClass:
    chow: ChowClass
    slope: Fraction

    def as_pair(self):
        return self.chow.coefficient(xi=1), self.chow.coefficient(eta=1)


def slope_of(c: ChowClass) -> Fraction:
    """Slope b/a of a divisor class a*eta + b*xi."""
    a = c.coefficient(eta=1)
    b = c.coefficient(xi=1)
    if a == 0:
        raise FanostabError("slope undefined: no eta component")
    return Fraction(b) / Fraction(a)


def cm_class(data: BlowupData | None = None) -> CMClass:
    """Minus the pushforward of the fourth anticanonical power.

    Expands -f_*((4H - E)^4) from blowup_push and returns the divisor class
    along with its slope.
    """
    data = data or BlowupData()
    total = ChowClass.scalar(0)
    for k in range(5):
        sign = 1 if k % 2 == 0 else -1
        total = total + sign * comb(4, k) * 4 ** (4 - k) * blowup_push(4 - k, k, data)
    cls = -total
    return CMClass(cls, slope_of(cls))


@dataclass(frozen=True)
class ParameterSpaceConstants:
    rank: int
    c1: ChowClass
    omega: ChowClass
    ample_range: tuple

    def as_dict(self):
        return {
            "rank": self.rank,
            "c1": repr(self.c1),
            "omega": repr(self.omega),
            "ample_range": (str(self.ample_range[0]), str(self.ample_range[1])),
        }


#: Upper end of the ample slope range for eta + t*xi on the parameter space;
#: a cited boundary for the projective bundle of cubics on quadrics.
AMPLE_SLOPE_BOUND = Fraction(1, 2)


def pe_constants() -> ParameterSpaceConstants:
    """Rank, c1 and canonical class of the parameter bundle.

    Derived from the Chern character 20 - 4*exp(-eta): sections of cubics on
    a quadric form a rank-16 bundle, its determinant is 4*eta, and the
    relative Euler sequence gives omega = -14*eta - 16*xi.
    """
    # ch = 20 - 4 * sum((-eta)^i / i!), truncated at degree 1 (all we need).
    ch0 = Fraction(20) - 4 * Fraction(1)
    ch1 = -4 * Fraction(-1)  # coefficient of eta in -4*exp(-eta)
    rank = int(ch0)
    c1 = ChowClass.from_terms({(0, 1, 0): ch1})
    omega_p9 = ChowClass.from_terms({(0, 1, 0): Fraction(-10)})
    omega = omega_p9 - c1 - rank * XI
    return ParameterSpaceConstants(
        rank=rank,
        c1=c1,
        omega=omega,
        ample_range=(Fraction(0), AMPLE_SLOPE_BOUND),
    )
