"""Authoritative K-stability and slope-GIT verdicts, plus the cubic-threefold
correspondence.

The decision tree follows the classification of blow-ups of P^3 along
(2,3)-intersection curves: the quadric must be normal and the curve reduced
and a genuine complete intersection; on a smooth quadric the curve may have
at worst A_n (n <= 9) or D4 singularities, on the cone at worst A_n or D4
away from the vertex and at worst A1 there.  D4 points and one-point ruling
contact kill stability; the two polystable-not-stable families are the
three-conic configuration with two D4 points and the unique maximally
degenerate curve with two A5 points carried by ruling components.

A delta-invariant count pins the three-conic family to its inventory: two
D4 points and nothing else force three (1,1)-components, so the detector
needs no factorization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from . import linalg
from .errors import (
    FanostabError,
    IncompleteGeometry,
    NotADoublePoint,
    NotReduced,
    OutOfRange,
    UnresolvedRoots,
    UnsupportedQuadric,
)
from .germs import GermType
from .hm import (
    Certificate,
    CurvePair,
    P3_VARS,
    apply_frame,
    chamber_of,
    Chamber,
    destabilizer_search,
    is_complete_intersection,
)
from .poly import MPoly, poly_gcd
from .quadrics import quadric_normal_form
from .rationals import as_rat
from .singularities import (
    ConePointReport,
    RulingComponent,
    SingularLocus,
    cone_point_type,
    segre_restrict,
    ruling_components,
    singular_points,
)

T0 = Fraction(22, 51)

K_STABLE = "KStable"
K_POLYSTABLE = "KPolystableNotStable"
K_SEMISTABLE = "KSemistableNotPolystable"
K_UNSTABLE = "KUnstable"

_LEVEL_ORDER = [K_UNSTABLE, K_SEMISTABLE, K_POLYSTABLE, K_STABLE]


@dataclass
class VerdictDetails:
    quadric_rank: Optional[int] = None
    singular: Optional[SingularLocus] = None
    cone_point: Optional[ConePointReport] = None
    rulings: List[RulingComponent] = field(default_factory=list)
    family: Optional[str] = None

    def as_dict(self):
        return {
            "quadric_rank": self.quadric_rank,
            "singular_points": [cp.as_dict() for cp in self.singular.points]
            if self.singular
            else None,
            "cone_point": self.cone_point.as_dict() if self.cone_point else None,
            "rulings": [r.as_dict() for r in self.rulings],
            "family": self.family,
        }


@dataclass
class Verdict:
    level: str
    reasons: List[str]
    certificate: Optional[Certificate] = None
    details: VerdictDetails = field(default_factory=VerdictDetails)

    @property
    def semistable(self) -> bool:
        return self.level != K_UNSTABLE

    @property
    def polystable(self) -> bool:
        return self.level in (K_STABLE, K_POLYSTABLE)

    @property
    def stable(self) -> bool:
        return self.level == K_STABLE

    def as_dict(self):
        return {
            "verdict": self.level,
            "reasons": list(self.reasons),
            "certificate": self.certificate.as_dict() if self.certificate else None,
        }


def _try_certificate(p: CurvePair, t, bound: int) -> Optional[Certificate]:
    try:
        return destabilizer_search(p, t, bound=bound)
    except FanostabError:
        return None


def k_verdict(
    p: CurvePair,
    precision: int = 24,
    certificate_bound: int = 3,
    assist_points=(),
) -> Verdict:
    """K-(semi/poly)stability of the blow-up of P^3 along V(q, g).

    Raises IncompleteGeometry when singular points cannot be resolved in
    the supported fields; never guesses a verdict.
    """
    details = VerdictDetails()
    if not is_complete_intersection(p):
        return Verdict(
            K_UNSTABLE,
            ["q and g share a common factor: not a complete intersection"],
            _try_certificate(p, T0, certificate_bound),
            details,
        )
    info = quadric_normal_form(p.q)
    details.quadric_rank = info.rank
    if info.rank <= 2:
        return Verdict(
            K_UNSTABLE,
            [f"quadric has rank {info.rank}: not a normal surface"],
            _try_certificate(p, T0, certificate_bound),
            details,
        )
    if info.normal_frame is None:
        raise IncompleteGeometry(
            ["no quadric normal frame within one quadratic extension"]
        )
    try:
        if info.target == "smooth":
            return _k_verdict_smooth(p, info, precision, certificate_bound, details, assist_points)
        return _k_verdict_cone(p, info, precision, certificate_bound, details, assist_points)
    except NotReduced as exc:
        return Verdict(
            K_UNSTABLE,
            [f"curve is not reduced ({exc})"],
            _try_certificate(p, T0, certificate_bound),
            details,
        )
    except UnresolvedRoots as exc:
        raise IncompleteGeometry([str(exc)])


def _k_verdict_smooth(p, info, precision, certificate_bound, details, assist_points):
    locus = singular_points(p, info, precision, assist_points)
    details.singular = locus
    if not locus.complete:
        raise IncompleteGeometry(locus.unresolved)
    bad = [cp for cp in locus.points if cp.germ.is_worse]
    deep = [cp for cp in locus.points if cp.germ.is_A and cp.germ.n > 9]
    if bad or deep:
        reasons = [f"singularity beyond A_n/D4 at {cp.point.as_dict()}" for cp in bad]
        reasons += [f"A{cp.germ.n} exceeds the n <= 9 bound" for cp in deep]
        return Verdict(K_UNSTABLE, reasons, _try_certificate(p, T0, certificate_bound), details)
    moved = p.apply_matrix(info.normal_frame)
    f = segre_restrict(moved.g)
    rulings = ruling_components(f)
    details.rulings = rulings
    one_point = [r for r in rulings if r.one_point_contact()]
    d4 = [cp for cp in locus.points if cp.germ.is_D4]
    a5 = [cp for cp in locus.points if cp.germ == GermType.A(5)]
    if not d4 and not one_point:
        return Verdict(
            K_STABLE,
            ["at worst A_n (n <= 9) singularities, no one-point ruling contact"],
            details=details,
        )
    if len(d4) == 2 and len(locus.points) == 2:
        # delta count 3 + 3 = arithmetic genus + 2 forces three conics
        details.family = "three-conics"
        return Verdict(
            K_POLYSTABLE,
            ["union of three conics meeting in two D4 points"],
            details=details,
        )
    if len(a5) == 2 and len(locus.points) == 2:
        contact_points = {
            (r.meeting_point.first, r.meeting_point.second)
            for r in one_point
            if r.meeting_point is not None
        }
        a5_points = {(cp.point.first, cp.point.second) for cp in a5}
        if a5_points <= contact_points:
            details.family = "two-A5"
            return Verdict(
                K_POLYSTABLE,
                [
                    "maximally degenerate curve with two A5 points,",
                    "each carried by a ruling meeting its residual once",
                ],
                details=details,
            )
    reasons = []
    if d4:
        reasons.append(f"{len(d4)} D4 point(s) exclude stability")
    if one_point:
        reasons.append(
            f"{len(one_point)} ruling component(s) meet the residual in one point"
        )
    reasons.append("configuration matches no closed-orbit family")
    return Verdict(K_SEMISTABLE, reasons, details=details)


def _k_verdict_cone(p, info, precision, certificate_bound, details, assist_points):
    cp_report = cone_point_type(p, info, precision)
    details.cone_point = cp_report
    if cp_report.kind == "worse":
        return Verdict(
            K_UNSTABLE,
            [f"cone point worse than A1: {cp_report.germ!r}"],
            _try_certificate(p, T0, certificate_bound),
            details,
        )
    locus = singular_points(p, info, precision, assist_points)
    details.singular = locus
    if not locus.complete:
        raise IncompleteGeometry(locus.unresolved)
    bad = [cp for cp in locus.points if cp.germ.is_worse]
    if bad:
        reasons = [f"singularity beyond A_n/D4 at {cp.point.as_dict()}" for cp in bad]
        return Verdict(K_UNSTABLE, reasons, _try_certificate(p, T0, certificate_bound), details)
    d4 = [cp for cp in locus.points if cp.germ.is_D4]
    if not d4:
        return Verdict(
            K_STABLE,
            [
                "quadric cone with at worst A_n singularities off the vertex "
                f"and {cp_report.kind} at the vertex"
            ],
            details=details,
        )
    if (
        len(d4) == 2
        and len(locus.points) == 2
        and cp_report.kind == "not_through_vertex"
    ):
        details.family = "three-conics"
        return Verdict(
            K_POLYSTABLE,
            ["union of three conics meeting in two D4 points (cone case)"],
            details=details,
        )
    return Verdict(
        K_SEMISTABLE,
        [f"{len(d4)} D4 point(s) exclude stability on the cone"],
        details=details,
    )


# -- slope-GIT verdicts -----------------------------------------------------------------

@dataclass
class GitVerdict:
    status: str  # one of the K levels, or "Unknown"
    t: Fraction
    from_k_equivalence: bool = False
    certificate: Optional[Certificate] = None
    searched_bound: Optional[int] = None
    k: Optional[Verdict] = None

    def as_dict(self):
        return {
            "status": self.status,
            "t": str(self.t),
            "from_k_equivalence": self.from_k_equivalence,
            "certificate": self.certificate.as_dict() if self.certificate else None,
            "searched_bound": self.searched_bound,
        }


def git_verdict(
    p: CurvePair,
    t,
    precision: int = 24,
    bound: int = 9,
) -> GitVerdict:
    """GIT verdict at a slope in [0, 2/3].

    Inside the chamber (2/5, 1/2) the K-classification decides everything.
    Elsewhere only negative certificates are authoritative: a destabilizer
    proves instability, no destabilizer within the searched box is
    reported as Unknown.  Pairs with a common factor are unstable for every
    slope in [0, 1/2].
    """
    t = as_rat(t)
    place = chamber_of(t)  # raises OutOfRange outside [0, 2/3]
    if isinstance(place, Chamber) and place == Chamber(Fraction(2, 5), Fraction(1, 2)):
        kv = k_verdict(p, precision)
        return GitVerdict(kv.level, t, True, kv.certificate, None, kv)
    if not is_complete_intersection(p) and t <= Fraction(1, 2):
        cert = _try_certificate(p, t, min(bound, 4))
        return GitVerdict(K_UNSTABLE, t, False, cert, min(bound, 4))
    cert = destabilizer_search(p, t, bound=bound)
    if cert is not None:
        return GitVerdict(K_UNSTABLE, t, False, cert, bound)
    return GitVerdict("Unknown", t, False, None, bound)


# -- Sarkisov correspondence ---------------------------------------------------------------

P4_VARS = ("x0", "x1", "x2", "x3", "x4")


@dataclass(frozen=True)
class CubicThreefold:
    form: MPoly
    integral: bool

    def as_dict(self):
        return {"cubic": repr(self.form), "integral": self.integral}


def _shift_to_p4(f: MPoly) -> MPoly:
    """Rename x0..x3 to x1..x4 inside the five-variable ring."""
    return MPoly(P4_VARS, {(0,) + e: c for e, c in f.terms.items()})


def _drop_x0(f: MPoly) -> MPoly:
    out = {}
    for e, c in f.terms.items():
        if e[0] != 0:
            raise FanostabError("form still involves x0")
        out[e[1:]] = c
    return MPoly(P3_VARS, out)


def sarkisov_cubic(p: CurvePair) -> CubicThreefold:
    """The cubic threefold x0*q(x1..x4) - g(x1..x4) with a double point at e0.

    The threefold is integral exactly when q and g share no factor, which
    is the complete-intersection condition on the curve.
    """
    x0 = MPoly.var(P4_VARS, "x0")
    form = x0 * _shift_to_p4(p.q) - _shift_to_p4(p.g)
    return CubicThreefold(form, is_complete_intersection(p))


def _complete_basis(vec):
    n = len(vec)
    cols = [list(vec)]
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        if linalg.rank(cols + [e]) > len(cols):
            cols.append(e)
        if len(cols) == n:
            break
    return linalg.transpose(cols)


def extract_pair(cubic: MPoly, vertex=None) -> CurvePair:
    """Recover (q, g) from a cubic threefold with a double point.

    The quadric and cubic are the degree-two and (negated) degree-three
    parts of the affine cone at the vertex; when the vertex is not the
    standard one, the pair is returned in the moved coordinates.
    """
    if cubic.vars != P4_VARS or cubic.homogeneous_degree() != 3:
        raise FanostabError("expected a homogeneous cubic in x0..x4")
    if vertex is not None:
        vertex = [as_rat(v) for v in vertex]
        if vertex != [Fraction(1), 0, 0, 0, 0]:
            frame = _complete_basis(vertex)
            cubic = apply_frame(cubic, frame)
    by_degree = {}
    for e, c in cubic.terms.items():
        by_degree.setdefault(e[0], {})[e] = c
    cube_c = by_degree.get(3, {})
    quad_c = by_degree.get(2, {})
    if cube_c or quad_c:
        raise NotADoublePoint(
            "vertex multiplicity is "
            + ("0" if cube_c else "1")
        )
    qpart = by_degree.get(1, {})
    gpart = by_degree.get(0, {})
    if not qpart:
        raise NotADoublePoint("vertex multiplicity exceeds 2")
    q = _drop_x0(MPoly(P4_VARS, {(0,) + e[1:]: c for e, c in qpart.items()}))
    g = _drop_x0(MPoly(P4_VARS, dict(gpart)))
    return CurvePair(q, -g)
