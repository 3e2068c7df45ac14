"""Classification of reduced plane-curve germs into Smooth / A(n) / D4.

A multiplicity-two germ is prepared so the y^2 coefficient is nonzero,
completed to unit*(y - a(x))^2 - b(x), and ord_x(b) - 1 gives the A-index.
Precision grows on demand up to a hard cap; whatever cannot be certified
below the cap is reported as WorseOrBeyond.  A multiplicity-three germ is
D4 exactly when its tangent cone is a squarefree binary cubic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DegenerateInput, FanostabError
from .poly import MPoly
from .series import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    TruncSeries,
    complete_square,
)


@dataclass(frozen=True)
class GermType:
    kind: str  # "smooth" | "A" | "D4" | "worse"
    n: Optional[int] = None

    @classmethod
    def smooth(cls):
        return cls("smooth")

    @classmethod
    def A(cls, n: int):
        if n < 1:
            raise FanostabError("A-index must be positive")
        return cls("A", n)

    @classmethod
    def D4(cls):
        return cls("D4")

    @classmethod
    def worse(cls, cap: int):
        return cls("worse", cap)

    @property
    def is_smooth(self):
        return self.kind == "smooth"

    @property
    def is_A(self):
        return self.kind == "A"

    @property
    def is_D4(self):
        return self.kind == "D4"

    @property
    def is_worse(self):
        return self.kind == "worse"

    def delta_invariant(self) -> int:
        """delta of the germ: ceil(n/2) for A(n), 3 for D4, 0 for smooth."""
        if self.is_smooth:
            return 0
        if self.is_A:
            return (self.n + 1) // 2
        if self.is_D4:
            return 3
        raise FanostabError("no delta invariant for unclassified germs")

    def __repr__(self):
        if self.kind == "A":
            return f"A{self.n}"
        if self.kind == "worse":
            return f"WorseOrBeyond({self.n})"
        return {"smooth": "Smooth", "D4": "D4"}[self.kind]


def _binary_cubic_discriminant(f3: MPoly):
    """Discriminant of a*x^3 + b*x^2 y + c*x y^2 + d*y^3."""
    a = f3.terms.get((3, 0), Fraction(0))
    b = f3.terms.get((2, 1), Fraction(0))
    c = f3.terms.get((1, 2), Fraction(0))
    d = f3.terms.get((0, 3), Fraction(0))
    return (
        18 * a * b * c * d
        - 4 * b**3 * d
        + b**2 * c**2
        - 4 * a * c**3
        - 27 * a**2 * d**2
    )


def _lowest_part(f: MPoly) -> MPoly:
    m = min(sum(e) for e in f.terms)
    return MPoly(f.vars, {e: c for e, c in f.terms.items() if sum(e) == m})


def _prepare(f: MPoly) -> MPoly:
    """Linear change of coordinates making the y^2 coefficient nonzero."""
    x, y = MPoly.gens(f.vars)
    quad = _lowest_part(f)
    if quad.terms.get((0, 2), 0) != 0:
        return f
    if quad.terms.get((2, 0), 0) != 0:
        return f.substitute({f.vars[0]: y, f.vars[1]: x})
    # quadratic part is a multiple of x*y: shear x -> x + y
    return f.substitute({f.vars[0]: x + y, f.vars[1]: y})


def classify_germ(f: MPoly, precision: int = DEFAULT_PRECISION) -> GermType:
    """Type of the curve germ of f at the origin of a smooth surface chart.

    f must vanish at the origin.  An identically-zero f means a non-reduced
    component through the point and raises DegenerateInput.
    """
    if len(f.vars) != 2:
        raise FanostabError("germ classification needs two local variables")
    if f.is_zero():
        raise DegenerateInput("zero germ: non-reduced component through the point")
    if f.terms.get((0, 0), 0) != 0:
        raise FanostabError("germ must vanish at the origin")
    mult = min(sum(e) for e in f.terms)
    if mult == 1:
        return GermType.smooth()
    if mult == 2:
        prepared = _prepare(f)
        n_cap = min(precision, MAX_PRECISION)
        while True:
            series = TruncSeries.from_mpoly(prepared, n_cap)
            _, b = complete_square(series)
            ord_b = b.x_order()
            # ord_x(b) = n + 1 is certified as soon as it clears truncation
            if ord_b is not None and ord_b - 1 <= n_cap - 2:
                return GermType.A(ord_b - 1)
            if n_cap >= MAX_PRECISION:
                return GermType.worse(MAX_PRECISION)
            n_cap = min(2 * n_cap, MAX_PRECISION)
    if mult == 3:
        cone = _lowest_part(f)
        if _binary_cubic_discriminant(cone) != 0:
            return GermType.D4()
        return GermType.worse(min(precision, MAX_PRECISION))
    return GermType.worse(min(precision, MAX_PRECISION))
