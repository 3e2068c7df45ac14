"""Singular points of (2,3)-intersection curves on their quadric.

On a smooth quadric the curve becomes a bidegree (3,3) form via the Segre
chart maps; singular points are the common zeros of the form and its
partials, solved chart by chart with resultants and exact root extraction
(rational roots, then quadratic roots in Q(sqrt(d))).  Anything needing a
cubic or nested extension is reported, never guessed.  On the quadric cone
the two honest charts of P(1,1,2) cover everything except the vertex, which
gets its own analysis through the smooth double cover.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy

from . import linalg
from .errors import (
    DegenerateInput,
    FanostabError,
    NotReduced,
    UnresolvedRoots,
    UnsupportedQuadric,
)
from .germs import GermType, classify_germ
from .hm import P3_VARS, CurvePair
from .poly import (
    MPoly,
    is_square_free,
    resultant,
    square_free_part,
    univariate_coeffs,
)
from .quadrics import QuadricInfo
from .rationals import QuadExt, conj, field_name, field_sqrt, scalar_is_rational

BIDEG_VARS = ("u", "v", "s", "w")
GERM_VARS = ("x", "y")

SEGRE_IMAGES = {
    "x0": ("u", "s"),
    "x1": ("u", "w"),
    "x2": ("v", "s"),
    "x3": ("v", "w"),
}


def segre_restrict(g: MPoly) -> MPoly:
    """Pull a cubic in x0..x3 back to a bidegree (3,3) form on P^1 x P^1.

    Assumes the quadric is already the model x0*x3 - x1*x2.
    """
    gens = {v: MPoly.var(BIDEG_VARS, v) for v in BIDEG_VARS}
    images = {x: gens[a] * gens[b] for x, (a, b) in SEGRE_IMAGES.items()}
    return g.substitute(images)


def bidegree_of(f: MPoly) -> Optional[Tuple[int, int]]:
    """Common (u,v)- and (s,w)-degree of all terms, or None if mixed."""
    if f.is_zero():
        return None
    degs = {(e[0] + e[1], e[2] + e[3]) for e in f.terms}
    return degs.pop() if len(degs) == 1 else None


def bidegree_to_p3(f: MPoly) -> MPoly:
    """Rewrite a (3,3) form as a cubic in x0..x3 (one fibre representative).

    Each monomial u^a v^(3-a) s^b w^(3-b) factors into three Segre pairs:
    k = min(a, b) copies of x0, then x1^(a-k), x2^(b-k), x3^(3-a-b+k).
    """
    if f.vars != BIDEG_VARS or bidegree_of(f) != (3, 3):
        raise FanostabError("expected a bidegree (3,3) form in u, v, s, w")
    out = {}
    for (a, _vb, b, _wb), c in f.terms.items():
        k = min(a, b)
        exp = (k, a - k, b - k, 3 - a - b + k)
        out[exp] = out.get(exp, 0) + c
    return MPoly(P3_VARS, out)


# -- univariate helpers ---------------------------------------------------------

def _uni_strip(coeffs):
    c = [Fraction(x) if isinstance(x, int) else x for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return c


def _uni_eval(coeffs, x):
    total = Fraction(0)
    for c in reversed(coeffs):
        total = total * x + c
    return total


def _uni_deriv(coeffs):
    return [k * c for k, c in enumerate(coeffs)][1:]


def _uni_monic(coeffs):
    lead = coeffs[-1]
    return [c / lead for c in coeffs]


def _uni_rem(a, b):
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while a and len(a) - 1 >= db:
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - f * c
        a.pop()
    return _uni_strip(a)


def _uni_gcd(a, b):
    a, b = _uni_strip(a), _uni_strip(b)
    while b:
        a, b = b, _uni_rem(a, b)
    return _uni_monic(a) if a else []


def _uni_exact_div(poly, g):
    if len(g) <= 1:
        return _uni_monic(_uni_strip(poly))
    out = []
    rem = list(poly)
    while len(rem) >= len(g):
        f = rem[-1] / g[-1]
        out.append(f)
        shift = len(rem) - len(g)
        for i, c in enumerate(g):
            rem[shift + i] = rem[shift + i] - f * c
        rem.pop()
    out.reverse()
    return _uni_strip(out)


def _coeffs_rational(coeffs) -> bool:
    return all(scalar_is_rational(c) for c in coeffs)


_X = sympy.Symbol("_root_var")


def _to_sympy(coeffs):
    rat = []
    for c in coeffs:
        if isinstance(c, QuadExt):
            c = c.a
        c = Fraction(c)
        rat.append(sympy.Rational(c.numerator, c.denominator))
    return sympy.Poly(list(reversed(rat)), _X, domain="QQ")


def _from_sympy(p) -> List[Fraction]:
    return [Fraction(c.p, c.q) for c in reversed(p.all_coeffs())]


def _format_uni(coeffs) -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        if k == 0:
            parts.append(f"{c}")
        elif k == 1:
            parts.append("t" if c == 1 else f"{c}*t")
        else:
            parts.append(f"t^{k}" if c == 1 else f"{c}*t^{k}")
    return " + ".join(parts) if parts else "0"


@dataclass
class RootData:
    roots: List[object]
    #: each entry is a coefficient list of an unresolved factor, or a
    #: plain message when no minimal polynomial is available
    unresolved: List[object]

    @property
    def complete(self):
        return not self.unresolved


def _unresolved_text(item) -> str:
    return _format_uni(item) if isinstance(item, list) else str(item)


def _quadratic_roots(coeffs):
    c0, c1, c2 = coeffs
    disc = c1 * c1 - 4 * c2 * c0
    root = field_sqrt(disc)
    if root is None:
        return None
    return [(-c1 + root) / (2 * c2), (-c1 - root) / (2 * c2)]


def uni_roots(coeffs) -> RootData:
    """All roots in Q or a single Q(sqrt(d)); leftover factors are reported.

    Over Q the polynomial is factored exactly; linear and quadratic factors
    are resolved, anything irreducible of degree >= 3 is returned as text.
    Over Q(sqrt(d)) the norm down to Q is factored and candidates verified.
    """
    coeffs = _uni_strip(coeffs)
    if not coeffs:
        raise DegenerateInput("root extraction on the zero polynomial")
    if len(coeffs) == 1:
        return RootData([], [])
    if _coeffs_rational(coeffs):
        poly = _to_sympy(coeffs)
        roots: List[object] = []
        unresolved: List[object] = []
        for factor, _mult in poly.factor_list()[1]:
            deg = factor.degree()
            if deg == 0:
                continue
            fc = _from_sympy(factor)
            if deg == 1:
                roots.append(-fc[0] / fc[1])
            elif deg == 2:
                qr = _quadratic_roots(fc)
                if qr is None:
                    unresolved.append(fc)
                else:
                    roots.extend(qr)
            else:
                unresolved.append(fc)
        return RootData(roots, unresolved)
    # coefficients in Q(sqrt(d)): descend through the norm to Q
    norm_coeffs = _uni_conv_mult(coeffs, [conj(c) for c in coeffs])
    sub = uni_roots(norm_coeffs)
    roots = []
    unresolved = list(sub.unresolved)
    seen = set()
    for r in sub.roots:
        if r in seen:
            continue
        seen.add(r)
        try:
            if _uni_eval(coeffs, r) == 0:
                roots.append(r)
        except FanostabError:
            unresolved.append("candidate root in an incompatible extension")
    return RootData(roots, unresolved)


def _uni_conv_mult(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return out


# -- surface points -----------------------------------------------------------------

def _normalize_pair(a, b):
    if b != 0:
        return (a / b, Fraction(1))
    if a == 0:
        raise FanostabError("(0:0) is not a point of P^1")
    return (Fraction(1), Fraction(0))


@dataclass(frozen=True)
class SurfacePoint:
    """A point of the quadric model: Segre bi-coordinates or cone coordinates."""

    model: str  # "segre" | "cone" | "vertex"
    first: Tuple = ()  # (u : v), normalized
    second: Tuple = ()  # (s : w), normalized
    cone: Tuple = ()  # (x0 : x1 : x2 : x3) on the cone model, normalized

    @classmethod
    def segre(cls, uv, sw):
        return cls("segre", _normalize_pair(*uv), _normalize_pair(*sw))

    @classmethod
    def cone_point(cls, coords):
        coords = list(coords)
        lead = next((c for c in coords if c != 0), None)
        if lead is None:
            raise FanostabError("zero vector is not a projective point")
        return cls("cone", cone=tuple(c / lead for c in coords))

    @classmethod
    def vertex(cls):
        return cls("vertex", cone=(Fraction(1), Fraction(0), Fraction(0), Fraction(0)))

    def model_p3_coords(self) -> Tuple:
        if self.model == "segre":
            (u, v), (s, w) = self.first, self.second
            return (u * s, u * w, v * s, v * w)
        return self.cone

    def to_p3(self, info: QuadricInfo) -> Tuple:
        """Coordinates in the original P^3, through the normalizing frame."""
        y = list(self.model_p3_coords())
        x = linalg.mat_vec(info.normal_frame, y)
        lead = next(c for c in x if c != 0)
        return tuple(c / lead for c in x)

    def residue_field(self) -> str:
        for c in self.model_p3_coords():
            if not scalar_is_rational(c):
                return field_name(c)
        return "Q"

    def is_rational(self) -> bool:
        return self.residue_field() == "Q"

    def as_dict(self):
        d = {"model": self.model, "field": self.residue_field()}
        if self.model == "segre":
            d["uv"] = [str(c) for c in self.first]
            d["sw"] = [str(c) for c in self.second]
        else:
            d["coords"] = [str(c) for c in self.cone]
        return d


@dataclass
class ClassifiedPoint:
    point: SurfacePoint
    germ: GermType

    def as_dict(self):
        return {"point": self.point.as_dict(), "type": repr(self.germ)}


@dataclass
class SingularLocus:
    points: List[ClassifiedPoint]
    complete: bool
    unresolved: List[str]

    def germs(self):
        return [cp.germ for cp in self.points]


# -- chart solving -------------------------------------------------------------------

def _specialize_in(G: MPoly, xvar: str, yvar: str, y0):
    """Coefficient list of G(x, y0) in xvar, exactly."""
    coeffs = []
    for k in range(max(G.degree_in(xvar), 0) + 1):
        coef_poly = G.coefficient_of(xvar, k)
        if coef_poly.is_zero():
            coeffs.append(Fraction(0))
            continue
        cc = univariate_coeffs(coef_poly, yvar)
        coeffs.append(_uni_eval(cc, y0))
    return _uni_strip(coeffs)


# quotient-field arithmetic Q[y]/(h) for certifying that an unresolved
# irreducible factor of the discriminant carries no singular point

class _QuotElem:
    __slots__ = ("c", "mod")

    def __init__(self, c, mod):
        self.mod = tuple(mod)
        self.c = tuple(_uni_rem(_uni_strip(c), list(mod)))

    def _lift(self, other):
        if isinstance(other, _QuotElem):
            return other
        return _QuotElem([other if not isinstance(other, int) else Fraction(other)], self.mod)

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.c), len(o.c))
        c = [Fraction(0)] * n
        for i, v in enumerate(self.c):
            c[i] += v
        for i, v in enumerate(o.c):
            c[i] += v
        return _QuotElem(c, self.mod)

    __radd__ = __add__

    def __neg__(self):
        return _QuotElem([-v for v in self.c], self.mod)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if not self.c or not o.c:
            return _QuotElem([], self.mod)
        return _QuotElem(_uni_conv_mult(list(self.c), list(o.c)), self.mod)

    __rmul__ = __mul__

    def inverse(self):
        g, s, _t = _uni_ext_gcd(list(self.c), list(self.mod))
        if len(g) != 1:
            raise FanostabError("non-invertible element: modulus not irreducible")
        return _QuotElem([x / g[0] for x in s], self.mod)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.c
            other = _QuotElem([other], self.mod)
        if isinstance(other, _QuotElem):
            return self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash((self.c, self.mod))


def _uni_ext_gcd(a, b):
    """(g, s, t) with s*a + t*b = g, over Fractions."""
    r0, r1 = _uni_strip(a), _uni_strip(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _uni_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _uni_sub(s0, _uni_conv_mult(q, s1) if q and s1 else [])
        t0, t1 = t1, _uni_sub(t0, _uni_conv_mult(q, t1) if q and t1 else [])
    return r0, s0, t0


def _uni_divmod(a, b):
    q = []
    rem = list(a)
    db, lb = len(b) - 1, b[-1]
    while rem and len(rem) - 1 >= db:
        if rem[-1] == 0:
            rem.pop()
            continue
        f = rem[-1] / lb
        q.append((len(rem) - 1 - db, f))
        shift = len(rem) - 1 - db
        for i, c in enumerate(b):
            rem[shift + i] = rem[shift + i] - f * c
        rem.pop()
    if not q:
        return [], _uni_strip(rem)
    deg = max(k for k, _ in q)
    out = [Fraction(0)] * (deg + 1)
    for k, f in q:
        out[k] = f
    return out, _uni_strip(rem)


def _uni_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] -= v
    return _uni_strip(out)


def _carries_singular_points(core: MPoly, xvar: str, yvar: str, h) -> bool:
    """Whether V(core) has a singular point with y-coordinate a root of h.

    h is irreducible over Q; the check runs the x-gcd of (core, core_x,
    core_y) with coefficients in the field Q[y]/(h).  Exact either way.
    """
    if not _coeffs_rational([c for _e, c in core.terms.items()]):
        return True  # cannot certify emptiness over an extension base: keep
    polys = []
    for G in (core, core.derivative(xvar), core.derivative(yvar)):
        coeffs = []
        for k in range(max(G.degree_in(xvar), 0) + 1):
            cp = G.coefficient_of(xvar, k)
            cc = univariate_coeffs(cp, yvar) if not cp.is_zero() else []
            coeffs.append(_QuotElem(cc, h))
        while coeffs and not coeffs[-1].c:
            coeffs.pop()
        polys.append(coeffs)
    live = [p for p in polys if p]
    if not live:
        return True
    g = live[0]
    for other in live[1:]:
        g = _uni_gcd_generic(g, other)
        if len(g) <= 1:
            return False
    return len(g) > 1


def _uni_gcd_generic(a, b):
    while b:
        a, b = b, _uni_rem_generic(a, b)
    return a


def _uni_rem_generic(a, b):
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while a and len(a) - 1 >= db:
        if not a[-1].c:
            a.pop()
            continue
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - f * c
        a.pop()
    while a and not a[-1].c:
        a.pop()
    return a


def _split_line_components(F: MPoly, xvar: str, yvar: str):
    """Factor out x-only and y-only content: F = cx(x) * cy(y) * core."""
    from .poly import poly_coeffs_in, poly_gcd

    ycoeffs = [c for c in poly_coeffs_in(F, yvar) if not c.is_zero()]
    cx = ycoeffs[0]
    for c in ycoeffs[1:]:
        cx = poly_gcd(cx, c)
        if cx.is_constant():
            break
    cx = cx.monic_lex()
    rest = F.exact_div(cx)
    xcoeffs = [c for c in poly_coeffs_in(rest, xvar) if not c.is_zero()]
    cy = xcoeffs[0]
    for c in xcoeffs[1:]:
        cy = poly_gcd(cy, c)
        if cy.is_constant():
            break
    cy = cy.monic_lex()
    return cx, cy, rest.exact_div(cy)


def _affine_singular_points(F: MPoly, xvar: str, yvar: str):
    """Common zeros of (F, F_x, F_y) in an affine chart, exactly.

    The chart polynomial is assumed square-free.  Line components parallel
    to the axes are split off first: their crossings with the rest of the
    curve are singular points regardless of tangency.  For the remaining
    core, singular y-values lie under the gcd of both partial resultants;
    unresolved irreducible factors are certified empty in the quotient
    field whenever possible, and reported otherwise.
    """
    points = []
    unresolved: List[str] = []
    if F.is_constant():
        return points, unresolved
    cx, cy, core = _split_line_components(F, xvar, yvar)
    if not cx.is_constant():
        xdata = uni_roots(univariate_coeffs(cx, xvar))
        unresolved.extend(_unresolved_text(i) for i in xdata.unresolved)
        rest = cy * core
        for x0 in xdata.roots:
            ry = _specialize_in(rest, yvar, xvar, x0)
            if len(ry) <= 1:
                continue
            ydata = uni_roots(ry)
            unresolved.extend(_unresolved_text(i) for i in ydata.unresolved)
            points.extend((x0, y0) for y0 in ydata.roots)
    if not cy.is_constant():
        ydata = uni_roots(univariate_coeffs(cy, yvar))
        unresolved.extend(_unresolved_text(i) for i in ydata.unresolved)
        for y0 in ydata.roots:
            rx = _specialize_in(core, xvar, yvar, y0)
            if len(rx) <= 1:
                continue
            xdata = uni_roots(rx)
            unresolved.extend(_unresolved_text(i) for i in xdata.unresolved)
            points.extend((x0, y0) for x0 in xdata.roots)
    if core.is_constant():
        return points, unresolved
    res1 = resultant(core, core.derivative(xvar), xvar)
    res2 = resultant(core, core.derivative(yvar), xvar)
    if res1.is_zero() or res2.is_zero():
        raise NotReduced("repeated factor detected by the discriminant")
    g = _uni_gcd(
        univariate_coeffs(square_free_part(res1), yvar)
        if not res1.is_constant()
        else [res1.constant_value()],
        univariate_coeffs(square_free_part(res2), yvar)
        if not res2.is_constant()
        else [res2.constant_value()],
    )
    if len(g) <= 1:
        return points, unresolved
    ydata = uni_roots(g)
    for item in ydata.unresolved:
        # an irreducible factor over Q may still carry no singular point;
        # certify emptiness in the quotient field before giving up
        if isinstance(item, list) and not _carries_singular_points(core, xvar, yvar, item):
            continue
        unresolved.append(_unresolved_text(item))
    for y0 in ydata.roots:
        f0 = _specialize_in(core, xvar, yvar, y0)
        f1 = _specialize_in(core.derivative(xvar), xvar, yvar, y0)
        f2 = _specialize_in(core.derivative(yvar), xvar, yvar, y0)
        live = [c for c in (f0, f1, f2) if c]
        if not live:
            raise NotReduced("a whole fibre consists of singular points")
        gg = live[0]
        for other in live[1:]:
            gg = _uni_gcd(gg, other)
            if len(gg) <= 1:
                break
        if len(gg) <= 1:
            continue
        xdata = uni_roots(gg)
        unresolved.extend(_unresolved_text(i) for i in xdata.unresolved)
        for x0 in xdata.roots:
            points.append((x0, y0))
    return points, unresolved


_SEGRE_CHARTS = (
    ("v=1,w=1", lambda X, Y, one: {"u": X, "v": one, "s": Y, "w": one}),
    ("v=1,s=1", lambda X, Y, one: {"u": X, "v": one, "s": one, "w": Y}),
    ("u=1,w=1", lambda X, Y, one: {"u": one, "v": X, "s": Y, "w": one}),
    ("u=1,s=1", lambda X, Y, one: {"u": one, "v": X, "s": one, "w": Y}),
)


def _segre_chart_poly(f: MPoly, chart_idx: int) -> MPoly:
    _label, builder = _SEGRE_CHARTS[chart_idx]
    X, Y = MPoly.gens(GERM_VARS)
    one = MPoly.const(GERM_VARS, 1)
    return f.substitute(builder(X, Y, one))


def _segre_point_from_chart(chart_idx: int, x0, y0) -> SurfacePoint:
    one = Fraction(1)
    if chart_idx == 0:
        return SurfacePoint.segre((x0, one), (y0, one))
    if chart_idx == 1:
        return SurfacePoint.segre((x0, one), (one, y0))
    if chart_idx == 2:
        return SurfacePoint.segre((one, x0), (y0, one))
    return SurfacePoint.segre((one, x0), (one, y0))


def segre_germ_at(f: MPoly, pt: SurfacePoint) -> MPoly:
    """Local equation of a bidegree form at a Segre point, in germ variables."""
    (u, v), (s, w) = pt.first, pt.second
    X, Y = MPoly.gens(GERM_VARS)
    one = MPoly.const(GERM_VARS, 1)
    if v != 0:
        uu, vv = (u / v) * one + X, one
    else:
        uu, vv = one, X
    if w != 0:
        ss, ww = (s / w) * one + Y, one
    else:
        ss, ww = one, Y
    return f.substitute({"u": uu, "v": vv, "s": ss, "w": ww})


def _dedupe_points(points: List[SurfacePoint]) -> List[SurfacePoint]:
    out = []
    seen = []
    for p in points:
        key = (p.model, p.first, p.second, p.cone)
        if key not in seen:
            seen.append(key)
            out.append(p)
    return out


def smooth_quadric_singular_points(f: MPoly):
    """Singular points of a reduced (3,3) curve, over all four charts."""
    if bidegree_of(f) != (3, 3):
        raise FanostabError("expected a bidegree (3,3) form")
    if not is_square_free(f):
        raise NotReduced("the (3,3) form has a repeated factor")
    found: List[SurfacePoint] = []
    unresolved: List[str] = []
    for idx in range(4):
        chart = _segre_chart_poly(f, idx)
        pts, unres = _affine_singular_points(chart, "x", "y")
        unresolved.extend(unres)
        for x0, y0 in pts:
            found.append(_segre_point_from_chart(idx, x0, y0))
    return _dedupe_points(found), unresolved


# -- cone charts ----------------------------------------------------------------------

def _cone_chart_poly(g: MPoly, chart: str) -> MPoly:
    """Curve equation on an honest chart of the cone x1*x3 = x2^2.

    chart "x1": points (z, 1, b, b^2), chart coordinates (x, y) = (b, z).
    chart "x3": points (z, a^2, a, 1), chart coordinates (x, y) = (a, z).
    """
    X, Y = MPoly.gens(GERM_VARS)
    one = MPoly.const(GERM_VARS, 1)
    if chart == "x1":
        images = {"x0": Y, "x1": one, "x2": X, "x3": X * X}
    elif chart == "x3":
        images = {"x0": Y, "x1": X * X, "x2": X, "x3": one}
    else:
        raise FanostabError(f"unknown cone chart {chart!r}")
    return g.substitute(images)


def _cone_point_from_chart(chart: str, x0, y0) -> SurfacePoint:
    one = Fraction(1)
    if chart == "x1":
        return SurfacePoint.cone_point((y0, one, x0, x0 * x0))
    return SurfacePoint.cone_point((y0, x0 * x0, x0, one))


def cone_germ_at(g: MPoly, pt: SurfacePoint) -> MPoly:
    """Local equation at a smooth-locus point of the cone model."""
    z0, x1, x2, x3 = pt.cone
    X, Y = MPoly.gens(GERM_VARS)
    one = MPoly.const(GERM_VARS, 1)
    if x1 != 0:
        chart = _cone_chart_poly(g, "x1")
        b0, zc = x2 / x1, z0 / x1
        return chart.substitute({"x": b0 * one + X, "y": zc * one + Y})
    if x3 == 0:
        raise FanostabError("the vertex has no smooth-chart germ")
    chart = _cone_chart_poly(g, "x3")
    a0, zc = x2 / x3, z0 / x3
    return chart.substitute({"x": a0 * one + X, "y": zc * one + Y})


def cone_singular_points(g: MPoly):
    """Smooth-locus singular points of the curve on the cone model."""
    found: List[SurfacePoint] = []
    unresolved: List[str] = []
    for chart in ("x1", "x3"):
        F = _cone_chart_poly(g, chart)
        if F.is_zero():
            raise NotReduced("curve contains a whole cone chart")
        if not is_square_free(F):
            raise NotReduced("chart polynomial has a repeated factor")
        pts, unres = _affine_singular_points(F, "x", "y")
        unresolved.extend(unres)
        for x0, y0 in pts:
            found.append(_cone_point_from_chart(chart, x0, y0))
    return _dedupe_points(found), unresolved


# -- public entry points ---------------------------------------------------------------

def _germ_at_origin(germ: MPoly) -> MPoly:
    if germ.terms.get((0, 0), 0) != 0:
        raise FanostabError("germ does not vanish at the expansion point")
    return germ


def singular_points(
    p: CurvePair,
    info: QuadricInfo,
    precision: int = 24,
    assist_points: Sequence[SurfacePoint] = (),
) -> SingularLocus:
    """Locate and classify all singular points on the quadric model.

    Requires rank >= 3 and a normal frame.  The vertex of the cone is not
    included; cone_point_type owns it.  User-supplied assist points are
    classified alongside whatever the solver resolves.
    """
    if info.rank <= 2:
        raise UnsupportedQuadric(f"rank {info.rank} quadric has no surface model")
    if info.normal_frame is None:
        raise UnsupportedQuadric("no normal frame available for this quadric")
    moved = p.apply_matrix(info.normal_frame)
    classified: List[ClassifiedPoint] = []
    if info.target == "smooth":
        f = segre_restrict(moved.g)
        pts, unresolved = smooth_quadric_singular_points(f)
        pts = _dedupe_points(pts + [a for a in assist_points if a.model == "segre"])
        for pt in pts:
            germ = _germ_at_origin(segre_germ_at(f, pt))
            classified.append(ClassifiedPoint(pt, classify_germ(germ, precision)))
    else:
        pts, unresolved = cone_singular_points(moved.g)
        pts = _dedupe_points(pts + [a for a in assist_points if a.model == "cone"])
        for pt in pts:
            germ = _germ_at_origin(cone_germ_at(moved.g, pt))
            classified.append(ClassifiedPoint(pt, classify_germ(germ, precision)))
    return SingularLocus(classified, complete=not unresolved, unresolved=unresolved)


def surface_point_from_p3(coords, info: QuadricInfo) -> SurfacePoint:
    """Translate a user-supplied P^3 point into model coordinates.

    The point must lie on the quadric; assist points let callers complete a
    classification whose solver output was marked incomplete.
    """
    if info.normal_frame is None:
        raise UnsupportedQuadric("no normal frame to pull the point through")
    inv = linalg.inverse([list(r) for r in info.normal_frame])
    y = linalg.mat_vec(inv, list(coords))
    y0, y1, y2, y3 = y
    if info.target == "smooth":
        if y0 * y3 != y1 * y2:
            raise FanostabError("assist point does not lie on the quadric")
        if y0 != 0 or y2 != 0:
            uv = (y0, y2)
        else:
            uv = (y1, y3)
        if y0 != 0 or y1 != 0:
            sw = (y0, y1)
        else:
            sw = (y2, y3)
        return SurfacePoint.segre(uv, sw)
    if y1 * y3 != y2 * y2:
        raise FanostabError("assist point does not lie on the cone")
    if y1 == 0 and y2 == 0 and y3 == 0:
        return SurfacePoint.vertex()
    return SurfacePoint.cone_point(y)


def rational_singular_p3_points(p: CurvePair) -> List[Tuple[Fraction, ...]]:
    """Rational singular points mapped back to the original coordinates.

    Best-effort helper for search-frame generation; returns an empty list
    whenever the geometry is out of reach.
    """
    from .quadrics import quadric_normal_form

    try:
        info = quadric_normal_form(p.q)
        if info.normal_frame is None or not info.exact:
            return []
        locus = singular_points(p, info)
    except FanostabError:
        return []
    out = []
    for cp in locus.points:
        if cp.point.is_rational():
            out.append(cp.point.to_p3(info))
    return out


# -- cone point --------------------------------------------------------------------------

@dataclass(frozen=True)
class ConePointReport:
    kind: str  # "not_through_vertex" | "A1" | "worse"
    germ: Optional[GermType] = None
    discriminant: Optional[object] = None

    def as_dict(self):
        return {
            "kind": self.kind,
            "germ": repr(self.germ) if self.germ else None,
            "discriminant": str(self.discriminant)
            if self.discriminant is not None
            else None,
        }


def cone_point_type(p: CurvePair, info: QuadricInfo, precision: int = 24) -> ConePointReport:
    """Behaviour of the curve at the cone vertex, via the double cover.

    The vertex germ pulls back through (a, b) -> (a^2, ab, b^2) to an even
    germ; an ordinary node upstairs is the A1 verdict.  For a linear part
    alpha*x1 + beta*x2 + gamma*x3 this is the discriminant condition
    beta^2 - 4*alpha*gamma != 0, reported alongside for cross-checking.
    """
    if info.rank != 3 or info.normal_frame is None:
        raise UnsupportedQuadric("cone point analysis needs a rank-3 normal frame")
    moved = p.apply_matrix(info.normal_frame)
    g = moved.g
    if g.terms.get((3, 0, 0, 0), Fraction(0)) != 0:
        return ConePointReport("not_through_vertex")
    X, Y = MPoly.gens(GERM_VARS)
    one = MPoly.const(GERM_VARS, 1)
    h = g.substitute({"x0": one, "x1": X * X, "x2": X * Y, "x3": Y * Y})
    if h.is_zero():
        raise DegenerateInput("curve contains the vertex germ entirely")
    alpha = g.terms.get((2, 1, 0, 0), Fraction(0))
    beta = g.terms.get((2, 0, 1, 0), Fraction(0))
    gamma = g.terms.get((2, 0, 0, 1), Fraction(0))
    disc = beta * beta - 4 * alpha * gamma
    germ = classify_germ(h, precision)
    if germ == GermType.A(1):
        return ConePointReport("A1", germ, disc)
    return ConePointReport("worse", germ, disc)


# -- ruling components ----------------------------------------------------------------------

@dataclass
class RulingComponent:
    family: str  # "uv": factor linear in (u, v); "sw": linear in (s, w)
    root: Tuple  # normalized point of the factor's P^1
    multiplicity: int
    perfect_cube: bool
    distinct_contacts: int
    meeting_point: Optional[SurfacePoint]
    meeting_singular_on_residual: Optional[bool]

    def one_point_contact(self) -> bool:
        return self.perfect_cube

    def as_dict(self):
        return {
            "family": self.family,
            "root": [str(c) for c in self.root],
            "multiplicity": self.multiplicity,
            "perfect_cube": self.perfect_cube,
            "distinct_contacts": self.distinct_contacts,
            "meeting_point": self.meeting_point.as_dict() if self.meeting_point else None,
            "meeting_singular_on_residual": self.meeting_singular_on_residual,
        }


def _binary_form_profile(coeffs):
    """Root profile of a nonzero binary cubic sum_k coeffs[k] X^(3-k) Y^k.

    Returns (perfect_cube, distinct_root_count, unique_root_or_None); roots
    are points (X : Y) of P^1, normalized.  The root (0:1) shows up as a
    degree drop of the dehomogenization p(r) = B(1, r).
    """
    p = _uni_strip(list(coeffs))
    if not p:
        raise DegenerateInput("zero binary form")
    inf_mult = 3 - (len(p) - 1)
    if len(p) == 1:
        return True, 1, (Fraction(0), Fraction(1))  # B = c * Y^3
    deriv = _uni_deriv(p)
    g = _uni_gcd(p, deriv)
    affine_distinct = (len(p) - 1) - (len(g) - 1)
    distinct = affine_distinct + (1 if inf_mult > 0 else 0)
    if distinct != 1:
        return False, distinct, None
    # p = c * (r - r0)^deg: the squarefree part is linear
    sf = _uni_exact_div(p, g)
    r0 = -sf[0] / sf[1]
    return True, 1, _normalize_pair(Fraction(1), r0)


def _linear_factor_poly(family: str, root) -> MPoly:
    a, b = root
    if family == "uv":
        return MPoly(BIDEG_VARS, {(1, 0, 0, 0): b, (0, 1, 0, 0): -a})
    return MPoly(BIDEG_VARS, {(0, 0, 1, 0): b, (0, 0, 0, 1): -a})


def ruling_components(f: MPoly) -> List[RulingComponent]:
    """Line components of a (3,3) form along either ruling, with contact data.

    A factor linear in (u, v) exists exactly where all four coefficient
    binary cubics share a root; symmetrically for (s, w).  For each factor
    the residual restricted to the line is a binary cubic whose root
    structure is the meeting profile: a perfect cube is one-point contact.
    """
    if bidegree_of(f) != (3, 3):
        raise FanostabError("expected a bidegree (3,3) form")
    out: List[RulingComponent] = []
    for family in ("uv", "sw"):
        out.extend(_ruling_family(f, family))
    return out


def _ruling_family(f: MPoly, family: str) -> List[RulingComponent]:
    if family == "uv":
        side = lambda e: e[1]  # exponent of v
        other_key = lambda e: (e[2], e[3])
    else:
        side = lambda e: e[3]  # exponent of w
        other_key = lambda e: (e[0], e[1])
    buckets = {}
    for e, c in f.terms.items():
        buckets.setdefault(other_key(e), [Fraction(0)] * 4)[side(e)] = c
    cubics = [_uni_strip(b) for b in buckets.values()]
    cubics = [c for c in cubics if c]
    roots: List[Tuple] = []
    # affine common roots (X : Y) = (1 : r) via the gcd of dehomogenizations
    g = cubics[0]
    for c in cubics[1:]:
        g = _uni_gcd(g, c)
        if len(g) <= 1:
            break
    if len(g) > 1:
        data = uni_roots(g)
        if data.unresolved:
            raise UnresolvedRoots("; ".join(data.unresolved))
        roots.extend(_normalize_pair(Fraction(1), r) for r in data.roots)
    # common root at (0 : 1): every cubic misses its top coefficient
    if all(len(c) < 4 for c in cubics):
        roots.append((Fraction(0), Fraction(1)))
    components = []
    for root in roots:
        line = _linear_factor_poly(family, root)
        mult = 0
        residual = f
        while True:
            quo, rem = residual.divmod_single(line)
            if not rem.is_zero():
                break
            residual = quo
            mult += 1
        if mult == 0:
            continue
        components.append(_contact_profile(family, root, mult, residual))
    return components


def _contact_profile(family, root, mult, residual) -> RulingComponent:
    a, b = root
    gens = {v: MPoly.var(BIDEG_VARS, v) for v in BIDEG_VARS}
    if family == "uv":
        images = {
            "u": MPoly.const(BIDEG_VARS, a),
            "v": MPoly.const(BIDEG_VARS, b),
            "s": gens["s"],
            "w": gens["w"],
        }
        free_second = "w"
    else:
        images = {
            "u": gens["u"],
            "v": gens["v"],
            "s": MPoly.const(BIDEG_VARS, a),
            "w": MPoly.const(BIDEG_VARS, b),
        }
        free_second = "v"
    restricted = residual.substitute(images)
    coeffs = [Fraction(0)] * 4
    idx = BIDEG_VARS.index(free_second)
    for e, c in restricted.terms.items():
        coeffs[e[idx]] = coeffs[e[idx]] + c
    perfect, distinct, contact = _binary_form_profile(coeffs)
    meeting = None
    singular_on_residual = None
    if perfect and contact is not None:
        if family == "uv":
            meeting = SurfacePoint.segre(root, contact)
        else:
            meeting = SurfacePoint.segre(contact, root)
        germ = segre_germ_at(residual, meeting)
        if germ.is_zero():
            singular_on_residual = None
        elif germ.terms.get((0, 0), 0) != 0:
            singular_on_residual = False
        else:
            singular_on_residual = min(sum(e) for e in germ.terms) >= 2
    return RulingComponent(
        family=family,
        root=root,
        multiplicity=mult,
        perfect_cube=perfect,
        distinct_contacts=distinct,
        meeting_point=meeting,
        meeting_singular_on_residual=singular_on_residual,
    )
