"""Hilbert-Mumford indices, one-parameter-subgroup limits, destabilizer
search, the wall-and-chamber structure, and the Hassett-Keel slope map.

Sign convention, fixed once for the whole package: for a one-parameter
subgroup with weight vector w acting in its eigenframe, the index of a form
is minus the minimum of <w, m> over the monomial support.  The total index
of a pair (q, g) at slope t is

    mu(t) = mu_eta(q) + t * mu_xi(g-bar),

where g-bar is g reduced modulo q*(linear forms) in a weight-graded
monomial complement, and "destabilizing" means mu(t) < 0.  This is the
unique min/max convention under which the quadric x1*x2 with the standard
elliptic-pair cubic and weights (-1, 1, 1, -1) evaluates to 3t - 2.  The
inverse subgroup (9, 1, -3, -7) appearing in cone-point degenerations is
therefore entered here as (-9, -1, 3, 7), which yields 11t - 6.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .errors import (
    FanostabError,
    NotInFiber,
    NotSemiInvariant,
    OutOfRange,
)
from .poly import MPoly, poly_gcd
from .rationals import as_rat

P3_VARS = ("x0", "x1", "x2", "x3")


def p3_gens():
    return MPoly.gens(P3_VARS)


@dataclass(frozen=True)
class CurvePair:
    """A quadric q and a cubic g in x0..x3, cutting a curve on the quadric.

    The cubic only matters modulo q*(linear forms); operations that depend
    on the fibre representative say so explicitly.
    """

    q: MPoly
    g: MPoly

    def __post_init__(self):
        for f, d, label in ((self.q, 2, "q"), (self.g, 3, "g")):
            if f.vars != P3_VARS:
                raise FanostabError(f"{label} must live in variables {P3_VARS}")
            if f.is_zero():
                raise FanostabError(f"{label} must be nonzero")
            if f.homogeneous_degree() != d:
                raise FanostabError(f"{label} must be homogeneous of degree {d}")

    def apply_matrix(self, m) -> "CurvePair":
        """Precompose both forms with the linear map x -> m*x."""
        return CurvePair(apply_frame(self.q, m), apply_frame(self.g, m))


@dataclass(frozen=True)
class OnePS:
    """A one-parameter subgroup: eigenframe plus integer weights summing to zero."""

    frame: Tuple[Tuple[Fraction, ...], ...]
    weights: Tuple[int, int, int, int]

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        if len(w) != 4 or sum(w) != 0:
            raise FanostabError(f"weights must be four integers summing to zero: {w}")
        object.__setattr__(self, "weights", w)
        m = tuple(tuple(as_rat(x) for x in row) for row in self.frame)
        if len(m) != 4 or any(len(r) != 4 for r in m):
            raise FanostabError("frame must be a 4x4 matrix")
        if linalg.det([list(r) for r in m]) == 0:
            raise FanostabError("frame must be invertible")
        object.__setattr__(self, "frame", m)

    @classmethod
    def diagonal(cls, weights) -> "OnePS":
        return cls(tuple(tuple(linalg.identity(4)[i]) for i in range(4)), tuple(weights))

    def is_trivial(self) -> bool:
        return all(w == 0 for w in self.weights)

    def frame_matrix(self):
        return [list(r) for r in self.frame]

    def inverse_frame_matrix(self):
        return linalg.inverse(self.frame_matrix())


@dataclass(frozen=True)
class HMValue:
    """Affine function mu(t) = constant + slope * t of the slope parameter."""

    constant: Fraction
    slope: Fraction

    def value_at(self, t) -> Fraction:
        return self.constant + self.slope * as_rat(t)

    def destabilizing_at(self, t) -> bool:
        return self.value_at(t) < 0

    def as_pair(self):
        return self.constant, self.slope

    def __repr__(self):
        s, c = self.slope, self.constant
        if s == 0:
            return str(c)
        head = "t" if s == 1 else ("-t" if s == -1 else f"{s}*t")
        if c == 0:
            return head
        return f"{head} + {c}" if c > 0 else f"{head} - {-c}"


def apply_frame(f: MPoly, matrix) -> MPoly:
    """f(M x): substitute each variable by the corresponding row form."""
    gens = MPoly.gens(f.vars)
    images = {}
    for i, v in enumerate(f.vars):
        row = matrix[i]
        img = MPoly.zero(f.vars)
        for j, c in enumerate(row):
            if c != 0:
                img = img + gens[j] * c
        images[v] = img
    return f.substitute(images)


def monomial_weight(exp: Sequence[int], weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(exp, weights))


def degree_monomials(degree: int) -> List[Tuple[int, ...]]:
    """All exponent tuples of the given total degree, descending lex."""
    out = [
        exp
        for exp in itertools.product(range(degree + 1), repeat=4)
        if sum(exp) == degree
    ]
    out.sort(reverse=True)
    return out


class FiberReduction:
    """Reduction of cubics modulo q*(linear forms) in a monomial complement.

    The complement is selected by Gaussian elimination against descending
    lex order, so it is canonical given q.  When q is semi-invariant for a
    weight vector, the pivot rows are weight-homogeneous, hence the
    complement is weight-graded and the reduced support has well-defined
    weights.
    """

    def __init__(self, q: MPoly):
        self.monomials = degree_monomials(3)
        self.index = {m: i for i, m in enumerate(self.monomials)}
        gens = MPoly.gens(P3_VARS)
        rows = []
        for x in gens:
            prod = q * x
            rows.append([prod.terms.get(m, Fraction(0)) for m in self.monomials])
        red, pivots = linalg.rref(rows)
        self.rows = [red[i] for i in range(len(pivots))]
        self.pivots = pivots

    def reduce(self, g: MPoly) -> MPoly:
        vec = [g.terms.get(m, Fraction(0)) for m in self.monomials]
        for row, p in zip(self.rows, self.pivots):
            c = vec[p]
            if c != 0:
                vec = [a - c * b for a, b in zip(vec, row)]
        terms = {m: c for m, c in zip(self.monomials, vec) if c != 0}
        return MPoly(P3_VARS, terms)


def hm_index(p: CurvePair, l: OnePS) -> HMValue:
    """Index of the pair against the subgroup; requires q semi-invariant.

    Returns (mu_eta, mu_xi) as an affine function of the slope.  Raises
    NotSemiInvariant when the transformed quadric mixes weights, and
    NotInFiber when the cubic dies in the fibre reduction.
    """
    if l.is_trivial():
        return HMValue(Fraction(0), Fraction(0))
    m = l.frame_matrix()
    qt = p.q if _is_identity(m) else apply_frame(p.q, m)
    gt = p.g if _is_identity(m) else apply_frame(p.g, m)
    qweights = {monomial_weight(e, l.weights) for e in qt.terms}
    if len(qweights) != 1:
        raise NotSemiInvariant(
            [monomial_weight(e, l.weights) for e in qt.terms]
        )
    mu_eta = -Fraction(qweights.pop())
    reduction = FiberReduction(qt)
    gbar = reduction.reduce(gt)
    if gbar.is_zero():
        raise NotInFiber("cubic lies in q*(linear forms)")
    mu_xi = -Fraction(min(monomial_weight(e, l.weights) for e in gbar.terms))
    return HMValue(mu_eta, mu_xi)


def _is_identity(m) -> bool:
    return all(m[i][j] == (1 if i == j else 0) for i in range(4) for j in range(4))


def _argmax_part(f: MPoly, weights) -> MPoly:
    top = max(monomial_weight(e, weights) for e in f.terms)
    return MPoly(
        f.vars, {e: c for e, c in f.terms.items() if monomial_weight(e, weights) == top}
    )


def one_ps_limit(p: CurvePair, l: OnePS) -> CurvePair:
    """Componentwise projective limit of the pair under the subgroup.

    In the eigenframe, coefficients scale by s^(-<w, m>), so only the
    monomials of maximal weight survive as s -> 0.  The result is expressed
    back in the original coordinates.
    """
    if l.is_trivial():
        return p
    m = l.frame_matrix()
    ident = _is_identity(m)
    qt = p.q if ident else apply_frame(p.q, m)
    gt = p.g if ident else apply_frame(p.g, m)
    qlim = _argmax_part(qt, l.weights)
    glim = _argmax_part(gt, l.weights)
    if not ident:
        minv = l.inverse_frame_matrix()
        qlim = apply_frame(qlim, minv)
        glim = apply_frame(glim, minv)
    return CurvePair(qlim, glim)


def is_complete_intersection(p: CurvePair) -> bool:
    """True when q and g share no factor, for any fibre representative.

    Common factors with q are unchanged by adding q*(linear), so the answer
    does not depend on the representative of g.
    """
    return poly_gcd(p.q, p.g).is_constant()


# -- destabilizer search --------------------------------------------------------

def weight_candidates(bound: int):
    """Primitive sum-zero weight vectors in shells of growing sup-norm.

    Within a shell the order is ascending lex; the whole enumeration is a
    fixed total order, so the first certificate found is deterministic.
    """
    for shell in range(1, bound + 1):
        for w in itertools.product(range(-shell, shell + 1), repeat=4):
            if sum(w) != 0 or max(abs(x) for x in w) != shell:
                continue
            g = 0
            for x in w:
                g = gcd(g, abs(x))
            if g == 1:
                yield w


def _auto_frames(p: CurvePair) -> List[List[List[Fraction]]]:
    """Extra rational frames adapted to the geometry of the pair.

    Includes the rational normal frame of the quadric when one exists and,
    for each rational singular point, a frame moving that point to
    [1:0:0:0] with the remaining columns chosen inside its polar plane
    when possible.  Purely a search aid; soundness never depends on it.
    """
    from .quadrics import gram_matrix, quadric_normal_form
    from .singularities import rational_singular_p3_points

    frames: List[List[List[Fraction]]] = []
    try:
        info = quadric_normal_form(p.q)
    except FanostabError:
        info = None
    if info is not None and info.normal_frame is not None and info.exact:
        frames.append(info.normal_frame)
    try:
        points = rational_singular_p3_points(p)
    except FanostabError:
        points = []
    b = gram_matrix(p.q)
    for pt in points:
        cols = [list(pt)]
        polar = linalg.mat_vec(b, list(pt))
        # complete with standard vectors, preferring directions in the
        # polar hyperplane of the point (tangent alignment)
        candidates = sorted(
            range(4),
            key=lambda j: (polar[j] != 0, j),
        )
        for j in candidates:
            e = [Fraction(int(k == j)) for k in range(4)]
            if linalg.rank(transposed_with(cols, e)) > len(cols):
                cols.append(e)
            if len(cols) == 4:
                break
        if len(cols) == 4:
            frames.append(linalg.transpose(cols))
    return frames


def transposed_with(cols, extra):
    return [list(c) for c in cols] + [list(extra)]


@dataclass(frozen=True)
class Certificate:
    subgroup: OnePS
    value: HMValue
    via_limit: bool

    def as_dict(self):
        return {
            "weights": list(self.subgroup.weights),
            "frame": [[str(x) for x in row] for row in self.subgroup.frame],
            "mu_eta": str(self.value.constant),
            "mu_xi": str(self.value.slope),
            "via_limit": self.via_limit,
        }


def destabilizer_search(
    p: CurvePair,
    t,
    frames: Optional[List] = None,
    bound: int = 9,
    auto_frames: bool = True,
) -> Optional[Certificate]:
    """First destabilizing subgroup with mu(t) < 0 in a bounded integer box.

    Sound: any certificate returned is exact (the index of a limit pair
    certifies instability of the original pair, since limits of semistable
    points stay semistable).  Not complete: a bounded box over finitely
    many frames can miss destabilizers.
    """
    t = as_rat(t)
    if t < 0 or t > Fraction(2, 3):
        raise OutOfRange(f"slope {t} outside [0, 2/3]")
    frame_list = [linalg.identity(4)]
    for f in frames or []:
        frame_list.append([list(map(as_rat, row)) for row in f])
    if auto_frames:
        frame_list.extend(_auto_frames(p))
    seen = set()
    unique_frames = []
    for f in frame_list:
        key = tuple(tuple(row) for row in f)
        if key not in seen:
            seen.add(key)
            unique_frames.append(f)
    for frame in unique_frames:
        ident = _is_identity(frame)
        qt = p.q if ident else apply_frame(p.q, frame)
        gt = p.g if ident else apply_frame(p.g, frame)
        reduction = FiberReduction(qt)
        gbar = reduction.reduce(gt)
        if gbar.is_zero():
            raise NotInFiber("cubic lies in q*(linear forms)")
        for w in weight_candidates(bound):
            qweights = {monomial_weight(e, w) for e in qt.terms}
            if len(qweights) == 1:
                mu_eta = -Fraction(qweights.pop())
                mu_xi = -Fraction(min(monomial_weight(e, w) for e in gbar.terms))
                val = HMValue(mu_eta, mu_xi)
                via_limit = False
            else:
                qlim = _argmax_part(qt, w)
                glim = _argmax_part(gt, w)
                lim_reduction = FiberReduction(qlim)
                glim_bar = lim_reduction.reduce(glim)
                if glim_bar.is_zero():
                    continue
                mu_eta = -Fraction(max(monomial_weight(e, w) for e in qt.terms))
                mu_xi = -Fraction(min(monomial_weight(e, w) for e in glim_bar.terms))
                val = HMValue(mu_eta, mu_xi)
                via_limit = True
            if val.destabilizing_at(t):
                subgroup = OnePS(tuple(tuple(r) for r in frame), w)
                return Certificate(subgroup, val, via_limit)
    return None


# -- walls, chambers, Hassett-Keel ----------------------------------------------

WALLS = (
    Fraction(0),
    Fraction(2, 9),
    Fraction(2, 5),
    Fraction(1, 2),
    Fraction(2, 3),
)


@dataclass(frozen=True)
class Wall:
    value: Fraction

    def __repr__(self):
        return f"Wall({self.value})"


@dataclass(frozen=True)
class Chamber:
    low: Fraction
    high: Fraction

    def __repr__(self):
        return f"Chamber({self.low}, {self.high})"


def chamber_of(t) -> "Wall | Chamber":
    """Wall/chamber position of a slope in [0, 2/3]."""
    t = as_rat(t)
    if t < WALLS[0] or t > WALLS[-1]:
        raise OutOfRange(f"slope {t} outside [0, 2/3]")
    for w in WALLS:
        if t == w:
            return Wall(w)
    for lo, hi in zip(WALLS, WALLS[1:]):
        if lo < t < hi:
            return Chamber(lo, hi)
    raise OutOfRange(f"slope {t} not located")  # pragma: no cover


HK_ALPHA_RANGE = (Fraction(8, 17), Fraction(5, 9))


def hk_alpha_to_t(alpha) -> Fraction:
    """t = (34a - 16) / (33a - 14) on the interval [8/17, 5/9]."""
    alpha = as_rat(alpha)
    if alpha < HK_ALPHA_RANGE[0] or alpha > HK_ALPHA_RANGE[1]:
        raise OutOfRange(f"alpha {alpha} outside [8/17, 5/9]")
    return (34 * alpha - 16) / (33 * alpha - 14)


def hk_t_to_alpha(t) -> Fraction:
    """Inverse slope map: alpha = (14t - 16) / (33t - 34) on [0, 2/3]."""
    t = as_rat(t)
    if t < 0 or t > Fraction(2, 3):
        raise OutOfRange(f"slope {t} outside [0, 2/3]")
    return (14 * t - 16) / (33 * t - 34)


def hk_map(x, direction: str) -> Fraction:
    if direction == "alpha_to_t":
        return hk_alpha_to_t(x)
    if direction == "t_to_alpha":
        return hk_t_to_alpha(x)
    raise FanostabError(f"unknown direction {direction!r}")
