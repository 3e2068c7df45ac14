"""Integer lattice arithmetic for the K3-side computations.

Gram lattices carry a named basis and an integer symmetric pairing.  The
module ships the rank-two hyperbolic lattice with (L^2)=6, (L.Q)=0,
(Q^2)=-2, the degree-22 polarization lattice, and the two elliptic-fibration
lattices used by the unigonal obstruction: the exhaustive finite searches
showing that no effective class can play the role of the degenerating conic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import DimensionMismatch, FanostabError, NotEven
from .rationals import EpsRat


@dataclass(frozen=True)
class GramLattice:
    names: Tuple[str, ...]
    gram: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.names)
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise DimensionMismatch("gram matrix does not match basis size")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise FanostabError("gram matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.names)

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def vector(self, **coords):
        v = [Fraction(0)] * self.rank
        for name, c in coords.items():
            v[self.names.index(name)] = c if isinstance(c, EpsRat) else Fraction(c)
        return tuple(v)

    def pair(self, v: Sequence, w: Sequence):
        if len(v) != self.rank or len(w) != self.rank:
            raise DimensionMismatch(
                f"vectors must have length {self.rank}, got {len(v)} and {len(w)}"
            )
        total = 0
        for i in range(self.rank):
            for j in range(self.rank):
                if self.gram[i][j]:
                    total = total + v[i] * w[j] * self.gram[i][j]
        return total + Fraction(0) if not isinstance(total, EpsRat) else total

    def signature(self) -> Tuple[int, int]:
        """(positive, negative) inertia indices, computed exactly."""
        m = {(i, j): Fraction(self.gram[i][j]) for i in range(self.rank) for j in range(self.rank)}
        idx = list(range(self.rank))
        pos = neg = 0
        while idx:
            i = next((k for k in idx if m[(k, k)] != 0), None)
            if i is not None:
                if m[(i, i)] > 0:
                    pos += 1
                else:
                    neg += 1
                d = m[(i, i)]
                rest = [k for k in idx if k != i]
                new = {
                    (k, l): m[(k, l)] - m[(k, i)] * m[(i, l)] / d
                    for k in rest
                    for l in rest
                }
                m, idx = new, rest
                continue
            # all-zero diagonal: find a hyperbolic pair, each worth (+1, -1)
            hyp = next(
                ((a, b) for a in idx for b in idx if a != b and m[(a, b)] != 0), None
            )
            if hyp is None:
                break  # remaining block is identically zero
            i, j = hyp
            e = m[(i, j)]
            pos += 1
            neg += 1
            rest = [k for k in idx if k not in (i, j)]
            alpha = {k: m[(k, j)] / e for k in rest}
            beta = {k: m[(k, i)] / e for k in rest}
            new = {
                (k, l): (
                    m[(k, l)]
                    - alpha[l] * m[(k, i)]
                    - beta[l] * m[(k, j)]
                    - alpha[k] * m[(i, l)]
                    - beta[k] * m[(j, l)]
                    + (alpha[k] * beta[l] + beta[k] * alpha[l]) * e
                )
                for k in rest
                for l in rest
            }
            m, idx = new, rest
        return pos, neg


def pair(lat: GramLattice, v: Sequence, w: Sequence):
    return lat.pair(v, w)


# -- stock lattices -----------------------------------------------------------

def lambda0() -> GramLattice:
    """Rank-two hyperbolic lattice with (L^2)=6, (L.Q)=0, (Q^2)=-2."""
    return GramLattice(("L", "Q"), ((6, 0), (0, -2)))


def polarization_deg22() -> GramLattice:
    """Neron-Severi lattice of a quartic with a conic: basis (H, E)."""
    return GramLattice(("H", "E"), ((4, 6), (6, 6)))


def weierstrass_lattice() -> GramLattice:
    """Fibre and negative section of an elliptic K3: (F^2)=0, (F.S)=1, (S^2)=-2."""
    return GramLattice(("F", "S"), ((0, 1), (1, -2)))


def a1_blowup_lattice() -> GramLattice:
    """Strict-transform fibre F1 and exceptional (-2)-curve over an A1 point."""
    return GramLattice(("F1", "E"), ((-2, 2), (2, -2)))


def nef_check_lattice() -> GramLattice:
    """Basis (F, E, Q): fibre, section, exceptional of a one-point blow-up."""
    return GramLattice(
        ("F", "E", "Q"),
        ((0, 1, 0), (1, -2, 0), (0, 0, -2)),
    )


# -- Riemann-Roch --------------------------------------------------------------

def rr_h0(d: int) -> int:
    """Sections of a big-and-nef line bundle of degree d on a K3: d/2 + 2."""
    if d % 2 != 0:
        raise NotEven(f"degree must be even, got {d}")
    if d < 2:
        raise FanostabError("degree must be at least 2")
    return d // 2 + 2


# -- unigonal obstruction -------------------------------------------------------

@dataclass(frozen=True)
class ObstructionReport:
    case: str
    solutions: Tuple
    table: Tuple[str, ...]

    @property
    def empty(self) -> bool:
        return not self.solutions

    def as_dict(self):
        return {"case": self.case, "solutions": list(self.solutions), "table": list(self.table)}


def unigonal_obstruction(case: str, box: int = 24) -> ObstructionReport:
    """Exhaustive search for a class behaving like the limit of the conic.

    smooth: on the fibration lattice with L = 12F + S, a class G = aF + bS
    must satisfy (L.G) = 2 and (G^2) = -2; the degree bookkeeping forces
    G = 2F, whose square is 0, so no class exists.

    a1: after blowing up the A1 point, G = 2F1 + bE needs (G^2) = -2, which
    pins b to 1 or 3; pairing 4 against G' = 8F1 + cE then forces c = 10 or
    c = 6, and both make (G'^2) != -2.  The report carries the case table.
    """
    if case == "smooth":
        lat = weierstrass_lattice()
        L = lat.vector(F=12, S=1)
        table = []
        sols = []
        forced = None
        for a in range(0, box + 1):
            for b in range(0, 3):
                g = lat.vector(F=a, S=b)
                if lat.pair(L, g) != 2:
                    continue
                forced = (a, b)
                table.append(
                    f"degree forces G = {a}F + {b}S; (G^2) = {lat.pair(g, g)} != -2"
                )
                if lat.pair(g, g) == -2:
                    sols.append((a, b))
        if forced is None:
            table.append("no candidate class of degree 2 at all")
        return ObstructionReport("smooth", tuple(sols), tuple(table))
    if case == "a1":
        lat = a1_blowup_lattice()
        table = []
        sols = []
        for b in range(0, box + 1):
            g = lat.vector(F1=2, E=b)
            if lat.pair(g, g) != -2:
                continue
            # solve (G.G') = 4 for G' = 8F1 + cE: linear in c
            base = lat.pair(g, lat.vector(F1=8, E=0))
            step = lat.pair(g, lat.vector(F1=0, E=1))
            if step == 0:
                table.append(f"b={b}: pairing degenerate")
                continue
            c = Fraction(4 - base, step)
            gp = lat.vector(F1=8, E=c)
            sq = lat.pair(gp, gp)
            table.append(f"b={b}: c={c}, (G'^2) = {sq} != -2")
            if sq == -2 and c.denominator == 1:
                sols.append((b, c))
        return ObstructionReport("a1", tuple(sols), tuple(table))
    raise FanostabError(f"unknown obstruction case {case!r}")


# -- nef check for the fibration case -------------------------------------------

@dataclass(frozen=True)
class NefReport:
    entries: Tuple[dict, ...]

    def all_nonnegative(self) -> bool:
        return all(e["value"] >= 0 for e in self.entries)


def nef_check_unigonal(testcurves: List[Sequence], lat: GramLattice | None = None) -> NefReport:
    """Evaluate (2L - Q).c for test classes on the blown-up fibration.

    L = 4F + E; the caller encodes incidences in the coordinates of the test
    classes (e.g. the strict transform of the fibre through a double point
    of multiplicity two is F - Q).
    """
    lat = lat or nef_check_lattice()
    L = lat.vector(F=4, E=1)
    two_l = tuple(2 * x for x in L)
    q = lat.vector(Q=1)
    entries = []
    for c in testcurves:
        val_2l = lat.pair(two_l, c)
        val_q = lat.pair(q, c)
        entries.append(
            {
                "class": tuple(c),
                "two_l_dot": val_2l,
                "q_dot": val_q,
                "value": val_2l - val_q,
            }
        )
    return NefReport(tuple(entries))
