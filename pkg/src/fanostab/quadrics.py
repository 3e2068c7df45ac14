"""Quadric normal forms over Q, allowing one quadratic extension.

The rank of the Gram matrix is always computed exactly over Q.  A rank-4
quadric is carried to x0*x3 - x1*x2, a rank-3 quadric to x1*x3 - x2^2 with
the vertex at [1:0:0:0], by symmetric diagonalization followed by
hyperbolic-pair extraction.  Scalings are arranged so the frame verifies by
exact substitution.  If making the diagonal form hyperbolic would need two
independent square roots, no frame is produced (a reported state).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from . import linalg
from .errors import FanostabError
from .hm import P3_VARS, apply_frame
from .poly import MPoly
from .rationals import field_sqrt, quadext, scalar_is_rational, squarefree_decomp


def gram_matrix(q: MPoly):
    """Symmetric 4x4 matrix B with q(x) = x^T B x."""
    if q.vars != P3_VARS or q.homogeneous_degree() != 2:
        raise FanostabError("gram_matrix expects a quadric in x0..x3")
    b = [[Fraction(0)] * 4 for _ in range(4)]
    for exp, c in q.terms.items():
        idx = [i for i, e in enumerate(exp) for _ in range(e)]
        i, j = idx
        if i == j:
            b[i][i] += c
        else:
            b[i][j] += Fraction(c, 2)
            b[j][i] += Fraction(c, 2)
    return b


def quadric_rank(q: MPoly) -> int:
    return linalg.rank(gram_matrix(q))


@dataclass(frozen=True)
class QuadricInfo:
    rank: int
    normal_frame: Optional[List[List[object]]]
    exact: bool
    target: Optional[str]  # "smooth" (x0x3 - x1x2) or "cone" (x1x3 - x2^2)

    def frame_is_rational(self) -> bool:
        return self.normal_frame is not None and all(
            scalar_is_rational(x) for row in self.normal_frame for x in row
        )


SMOOTH_MODEL = MPoly(
    P3_VARS, {(1, 0, 0, 1): Fraction(1), (0, 1, 1, 0): Fraction(-1)}
)
CONE_MODEL = MPoly(
    P3_VARS, {(0, 1, 0, 1): Fraction(1), (0, 0, 2, 0): Fraction(-1)}
)


def _diagonalize(b):
    """Invertible S with S^T B S diagonal, over Q.  Returns (S, diagonal)."""
    n = len(b)
    m = [[Fraction(x) for x in row] for row in b]
    s = linalg.identity(n)

    def add_col(dst, src, c):
        # column operation x_dst += c * x_src applied congruently
        for i in range(n):
            s[i][dst] += c * s[i][src]
        for i in range(n):
            m[i][dst] += c * m[i][src]
        for j in range(n):
            m[dst][j] += c * m[src][j]

    def swap_col(a_, b_):
        for i in range(n):
            s[i][a_], s[i][b_] = s[i][b_], s[i][a_]
        for i in range(n):
            m[i][a_], m[i][b_] = m[i][b_], m[i][a_]
        for j in range(n):
            m[a_][j], m[b_][j] = m[b_][j], m[a_][j]

    for k in range(n):
        if m[k][k] == 0:
            j = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if j is not None:
                swap_col(k, j)
            else:
                pair = next(
                    (
                        (a, c)
                        for a in range(k, n)
                        for c in range(a + 1, n)
                        if m[a][c] != 0
                    ),
                    None,
                )
                if pair is None:
                    break  # remaining block is zero
                a, c = pair
                if a != k:
                    swap_col(k, a)
                    c = k if c == k else c
                add_col(k, c, Fraction(1))  # now m[k][k] = 2*m[k][c] != 0
        if m[k][k] == 0:
            continue
        for j in range(k + 1, n):
            if m[k][j] != 0:
                add_col(j, k, -m[k][j] / m[k][k])
    diag = [m[i][i] for i in range(n)]
    return s, diag


def _sqrt_scale(r: Fraction):
    """(scalar c, squarefree d) with c^2 = r and c in Q or Q(sqrt(d)); d=1 if rational."""
    c = field_sqrt(r)
    if c is None:
        return None, None
    if scalar_is_rational(c):
        return c, 1
    return c, c.d


def _pair_to_product(d1: Fraction, d2: Fraction):
    """Columns turning d1*y1^2 + d2*y2^2 into exactly y1'*y2'.

    Uses y1 = g*u + v, y2 = c*(g*u - v) with c = sqrt(-d1/d2) and
    g = 1/(4*d1); then d1*y1^2 + d2*y2^2 = u*v.  Returns (2x2 block, d)
    where d is the squarefree discriminant used (1 when rational).
    """
    c, d = _sqrt_scale(Fraction(-d1) / d2)
    if c is None:
        return None, None
    gmul = Fraction(1, 4) / d1
    # columns express (y1, y2) in terms of the new coordinates (u, v)
    block = [[gmul, Fraction(1)], [c * gmul, -c]]
    return block, d


def _apply_b(b, v, w):
    return sum(v[i] * b[i][j] * w[j] for i in range(len(v)) for j in range(len(v)))


def _isotropic_vector(b, avoid=None, bound: int = 4):
    """Small primitive rational zero of the form, or None.

    Scans standard vectors first, then a bounded integer box in a fixed
    order.  avoid, when given, is a vector whose scalar multiples are
    skipped (the cone vertex is isotropic but useless for splitting).
    """
    import itertools
    from math import gcd as igcd

    n = len(b)

    def is_avoided(v):
        if avoid is None:
            return False
        # v parallel to avoid?
        for i in range(n):
            for j in range(i + 1, n):
                if v[i] * avoid[j] != v[j] * avoid[i]:
                    return False
        return True

    for i in range(n):
        e = [Fraction(int(k == i)) for k in range(n)]
        if b[i][i] == 0 and not is_avoided(e):
            return e
    for raw in itertools.product(range(-bound, bound + 1), repeat=n):
        if all(x == 0 for x in raw):
            continue
        g = 0
        for x in raw:
            g = igcd(g, abs(x))
        if g != 1:
            continue
        v = [Fraction(x) for x in raw]
        if is_avoided(v):
            continue
        if _apply_b(b, v, v) == 0:
            return v
    return None


def _partner(b, v):
    """Some w with B(v, w) != 0; exists whenever v is not in the kernel."""
    n = len(b)
    for j in range(n):
        e = [Fraction(int(k == j)) for k in range(n)]
        if _apply_b(b, v, e) != 0:
            return e
    return None


def _hyperbolic_pair(b, v, w, target_cross):
    """Columns (a, a') spanning a hyperbolic plane with q = target_cross * x * x'.

    v must be isotropic and B(v, w) != 0; the second column is corrected to
    be isotropic and the first is scaled so the cross term comes out exact.
    """
    beta = _apply_b(b, v, w)
    qw = _apply_b(b, w, w)
    wc = [wi - (qw / (2 * beta)) * vi for vi, wi in zip(v, w)]
    beta = _apply_b(b, v, wc)
    scale = target_cross / (2 * beta)
    return [x * scale for x in v], wc


def _ortho_complement(b, vectors):
    rows = [linalg.mat_vec(b, list(v)) for v in vectors]
    return linalg.nullspace(rows)


def quadric_normal_form(q: MPoly) -> QuadricInfo:
    """Rank and, when possible, a frame to the smooth or cone model.

    The frame M satisfies q(M x) = model exactly; substitution is the
    verification.  exact is True when M has rational entries.  A bounded
    search for a rational point on the quadric keeps the frame rational
    whenever a small point exists; otherwise diagonalization plus
    hyperbolic-pair extraction may introduce one square root, and two
    independent square roots mean no frame (a reported state).
    """
    if q == SMOOTH_MODEL:
        return QuadricInfo(4, linalg.identity(4), True, "smooth")
    if q == CONE_MODEL:
        return QuadricInfo(3, linalg.identity(4), True, "cone")
    b = gram_matrix(q)
    rk = linalg.rank(b)
    if rk <= 2:
        return QuadricInfo(rk, None, False, None)
    fast = _isotropic_split(q, b, rk)
    if fast is not None:
        return fast
    s, diag = _diagonalize(b)
    order = sorted(range(4), key=lambda i: diag[i] == 0)
    perm = [[Fraction(int(order[j] == i)) for j in range(4)] for i in range(4)]
    s = linalg.mat_mul(s, perm)
    diag = [diag[i] for i in order]

    if rk == 4:
        best = None
        for pairing in (((0, 3), (1, 2)), ((0, 1), (2, 3)), ((0, 2), (1, 3))):
            (i1, j1), (i2, j2) = pairing
            b1, d1 = _pair_to_product(diag[i1], diag[j1])
            b2, d2 = _pair_to_product(-diag[i2], -diag[j2])  # second pair gives -x1*x2
            if b1 is None or b2 is None:
                continue
            if d1 != 1 and d2 != 1 and d1 != d2:
                continue  # two independent extensions: not representable here
            ext = d1 if d1 != 1 else d2
            cand = (ext != 1, pairing, b1, b2, ext)
            if best is None or cand[0] < best[0]:
                best = cand
            if not cand[0]:
                break
        if best is None:
            return QuadricInfo(4, None, False, "smooth")
        _, ((i1, j1), (i2, j2)), b1, b2, ext = best
        n = _merge_blocks(b1, (i1, j1), b2, (i2, j2))
        frame = linalg.mat_mul(s, n)
        info = QuadricInfo(4, frame, ext == 1, "smooth")
        _verify(q, info.normal_frame, SMOOTH_MODEL)
        return info

    # rank 3: kernel direction becomes the vertex x0
    best = None
    for k in range(3):
        others = [i for i in range(3) if i != k]
        ck, dk = _sqrt_scale(Fraction(-1) / diag[k])
        bp, dp = _pair_to_product(diag[others[0]], diag[others[1]])
        if ck is None or bp is None:
            continue
        if dk != 1 and dp != 1 and dk != dp:
            continue
        ext = dk if dk != 1 else dp
        cand = (ext != 1, k, others, ck, bp, ext)
        if best is None or cand[0] < best[0]:
            best = cand
        if not cand[0]:
            break
    if best is None:
        return QuadricInfo(3, None, False, "cone")
    _, k, others, ck, bp, ext = best
    n = [[Fraction(0)] * 4 for _ in range(4)]
    n[3][0] = Fraction(1)  # kernel column (slot 3 after reordering) -> x0
    n[k][2] = ck  # y_k = ck * x2 gives -x2^2
    n[others[0]][1] = bp[0][0]
    n[others[0]][3] = bp[0][1]
    n[others[1]][1] = bp[1][0]
    n[others[1]][3] = bp[1][1]
    frame = linalg.mat_mul(s, n)
    info = QuadricInfo(3, frame, ext == 1, "cone")
    _verify(q, info.normal_frame, CONE_MODEL)
    return info


def _merge_blocks(b1, slots1, b2, slots2):
    """Assemble the 4x4 change of basis from two 2x2 hyperbolic blocks.

    The first block writes (y_i1, y_j1) in terms of (x0, x3); the second
    writes (y_i2, y_j2) in terms of (x1, x2).
    """
    n = [[Fraction(0)] * 4 for _ in range(4)]
    (i1, j1), (i2, j2) = slots1, slots2
    n[i1][0] = b1[0][0]
    n[i1][3] = b1[0][1]
    n[j1][0] = b1[1][0]
    n[j1][3] = b1[1][1]
    n[i2][1] = b2[0][0]
    n[i2][2] = b2[0][1]
    n[j2][1] = b2[1][0]
    n[j2][2] = b2[1][1]
    return n


def _verify(q: MPoly, frame, model: MPoly):
    got = apply_frame(q, frame)
    if got != model:
        raise FanostabError(f"normal form verification failed: got {got!r}")
