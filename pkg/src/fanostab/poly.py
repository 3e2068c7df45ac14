"""Sparse multivariate polynomials with exact coefficients.

A polynomial is a mapping from dense exponent tuples to nonzero
coefficients (Fraction, or QuadExt for points in a quadratic extension).
The variable list is fixed per polynomial and all arithmetic is exact.
Term iteration is always in sorted exponent order, so printing, hashing
and gcd normalization are deterministic.

The gcd is a subresultant polynomial remainder sequence in a chosen main
variable with recursive content extraction; no modular arithmetic and no
Groebner machinery.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from .errors import DegenerateInput, FanostabError, IncompleteSubstitution
from .rationals import as_rat

Exponent = Tuple[int, ...]


def _coeff(x):
    if isinstance(x, (int, str)):
        return as_rat(x)
    return x


class MPoly:
    """Immutable sparse polynomial over an exact coefficient field."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping[Exponent, object] = ()):
        object.__setattr__(self, "vars", tuple(variables))
        clean: Dict[Exponent, object] = {}
        for exp, c in dict(terms).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(self.vars):
                raise FanostabError("exponent length does not match variable list")
            c = _coeff(c)
            if c != 0:
                clean[exp] = clean.get(exp, 0) + c if exp in clean else c
                if clean[exp] == 0:
                    del clean[exp]
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("MPoly is immutable")

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def const(cls, variables, c):
        c = _coeff(c)
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c} if c != 0 else {})

    @classmethod
    def var(cls, variables, name):
        variables = tuple(variables)
        exp = [0] * len(variables)
        exp[variables.index(name)] = 1
        return cls(variables, {tuple(exp): Fraction(1)})

    @classmethod
    def gens(cls, variables):
        variables = tuple(variables)
        return [cls.var(variables, v) for v in variables]

    # -- basic queries ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def sorted_terms(self):
        """Terms in descending lexicographic exponent order (deterministic)."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def homogeneous_degree(self):
        """Common total degree of all terms, or None if inhomogeneous."""
        if not self.terms:
            return None
        degs = {sum(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def variables_used(self):
        used = set()
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used.add(self.vars[i])
        return used

    def coefficient_of(self, name: str, power: int) -> "MPoly":
        """Coefficient of name**power, as a polynomial with the same variables."""
        i = self.vars.index(name)
        out = {}
        for exp, c in self.terms.items():
            if exp[i] == power:
                new = list(exp)
                new[i] = 0
                out[tuple(new)] = c
        return MPoly(self.vars, out)

    # -- ring structure ---------------------------------------------------
    def _check(self, other):
        if self.vars != other.vars:
            raise FanostabError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) or not isinstance(other, MPoly):
            other = MPoly.const(self.vars, other)
        self._check(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, 0) + c
            if s == 0:
                out.pop(exp, None)
            else:
                out[exp] = s
        return MPoly(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = _coeff(other)
            if c == 0:
                return MPoly.zero(self.vars)
            return MPoly(self.vars, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        out: Dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return MPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise FanostabError("negative polynomial power")
        out = MPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, tuple(self.sorted_terms())))

    def __repr__(self):
        from .expr import format_poly

        return format_poly(self)

    # -- calculus and evaluation -------------------------------------------
    def derivative(self, name: str) -> "MPoly":
        i = self.vars.index(name)
        out = {}
        for exp, c in self.terms.items():
            if exp[i] == 0:
                continue
            new = list(exp)
            new[i] -= 1
            out[tuple(new)] = out.get(tuple(new), 0) + c * exp[i]
        return MPoly(self.vars, out)

    def evaluate(self, point: Mapping[str, object]):
        """Full evaluation at a point; every used variable needs a value."""
        missing = self.variables_used() - set(point)
        if missing:
            raise IncompleteSubstitution(f"no value for {sorted(missing)}")
        vals = [point.get(v, 0) for v in self.vars]
        total = Fraction(0)
        for exp, c in self.sorted_terms():
            term = c
            for v, e in zip(vals, exp):
                for _ in range(e):
                    term = term * v
            total = total + term
        return total

    def substitute(self, images: Mapping[str, "MPoly"]) -> "MPoly":
        """Exact composition.  Every variable occurring in self needs an image."""
        missing = self.variables_used() - set(images)
        if missing:
            raise IncompleteSubstitution(f"no image for {sorted(missing)}")
        some = next(iter(images.values()))
        target = some.vars
        out = MPoly.zero(target)
        pow_cache = {}
        for exp, c in self.sorted_terms():
            term = MPoly.const(target, c)
            for v, e in zip(self.vars, exp):
                if e:
                    key = (v, e)
                    if key not in pow_cache:
                        pow_cache[key] = images[v] ** e
                    term = term * pow_cache[key]
            out = out + term
        return out

    def rename(self, variables) -> "MPoly":
        variables = tuple(variables)
        if len(variables) != len(self.vars):
            raise FanostabError("rename needs the same number of variables")
        return MPoly(variables, dict(self.terms))

    def map_coeffs(self, fn) -> "MPoly":
        return MPoly(self.vars, {e: fn(c) for e, c in self.terms.items()})

    # -- division -----------------------------------------------------------
    def leading_term_lex(self):
        """(exponent, coeff) that is largest in lexicographic order."""
        if not self.terms:
            raise DegenerateInput("zero polynomial has no leading term")
        exp = max(self.terms)
        return exp, self.terms[exp]

    def monic_lex(self) -> "MPoly":
        if self.is_zero():
            return self
        _, lc = self.leading_term_lex()
        return self.map_coeffs(lambda c: c / lc)

    def divmod_single(self, divisor: "MPoly"):
        """Divide by one polynomial under lex order: self = q*divisor + r.

        The remainder has no term divisible by the divisor's lex leading
        monomial; r == 0 certifies exact divisibility.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        dexp, dc = divisor.leading_term_lex()
        q = MPoly.zero(self.vars)
        r = MPoly.zero(self.vars)
        work = self
        while not work.is_zero():
            exp = max(work.terms)
            c = work.terms[exp]
            if all(a >= b for a, b in zip(exp, dexp)):
                mono = MPoly(self.vars, {tuple(a - b for a, b in zip(exp, dexp)): c / dc})
                q = q + mono
                work = work - mono * divisor
            else:
                t = MPoly(self.vars, {exp: c})
                r = r + t
                work = work - t
        return q, r

    def exact_div(self, divisor: "MPoly") -> "MPoly":
        q, r = self.divmod_single(divisor)
        if not r.is_zero():
            raise FanostabError("division is not exact")
        return q

    def divides(self, other: "MPoly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return other.divmod_single(self)[1].is_zero()


# -- univariate views ------------------------------------------------------

def univariate_coeffs(f: MPoly, name: str):
    """Coefficients [c0, c1, ...] of f seen in one variable.

    The other variables must not occur.  Zero polynomial gives [].
    """
    i = f.vars.index(name)
    out = {}
    for exp, c in f.terms.items():
        if any(e and j != i for j, e in enumerate(exp)):
            raise FanostabError(f"{f!r} is not univariate in {name}")
        out[exp[i]] = c
    if not out:
        return []
    coeffs = [Fraction(0)] * (max(out) + 1)
    for k, c in out.items():
        coeffs[k] = c
    return coeffs


def poly_coeffs_in(f: MPoly, name: str):
    """f as a list of MPoly coefficients of powers of name (lowest first)."""
    d = f.degree_in(name)
    if d < 0:
        return []
    return [f.coefficient_of(name, k) for k in range(d + 1)]


def from_coeffs_in(vars_, name, coeffs):
    x = MPoly.var(vars_, name)
    out = MPoly.zero(vars_)
    for k, c in enumerate(coeffs):
        if isinstance(c, MPoly):
            out = out + c * x**k
        else:
            out = out + MPoly.const(vars_, c) * x**k
    return out


# -- gcd ---------------------------------------------------------------------

def _content_and_primitive(f: MPoly, name: str):
    """Content (gcd of the coefficient polynomials) and primitive part."""
    coeffs = [c for c in poly_coeffs_in(f, name) if not c.is_zero()]
    content = coeffs[0]
    for c in coeffs[1:]:
        content = poly_gcd(content, c)
        if content.is_constant():
            break
    content = content.monic_lex()
    return content, f.exact_div(content)


def _pseudo_rem(f: MPoly, g: MPoly, name: str) -> MPoly:
    """Pseudo-remainder of f by g in the main variable."""
    df, dg = f.degree_in(name), g.degree_in(name)
    if df < dg:
        return f
    lc_g = g.coefficient_of(name, dg)
    x = MPoly.var(f.vars, name)
    r = f
    while not r.is_zero() and r.degree_in(name) >= dg:
        dr = r.degree_in(name)
        lc_r = r.coefficient_of(name, dr)
        r = r * lc_g - g * lc_r * x ** (dr - dg)
    return r


def _gcd_univariate_in(f: MPoly, g: MPoly, name: str) -> MPoly:
    """Subresultant PRS gcd for two primitives in the main variable."""
    a, b = (f, g) if f.degree_in(name) >= g.degree_in(name) else (g, f)
    while True:
        if b.is_zero():
            return a
        if b.degree_in(name) == 0:
            return MPoly.const(f.vars, 1)
        r = _pseudo_rem(a, b, name)
        if r.is_zero():
            return b
        _, r = _content_and_primitive(r, name)
        a, b = b, r


def poly_gcd(f: MPoly, g: MPoly) -> MPoly:
    """Greatest common divisor, monic under lex order.  Deterministic.

    Raises DegenerateInput when both arguments vanish.
    """
    if f.is_zero() and g.is_zero():
        raise DegenerateInput("gcd(0, 0) is undefined")
    if f.is_zero():
        return g.monic_lex()
    if g.is_zero():
        return f.monic_lex()
    if f.vars != g.vars:
        raise FanostabError("gcd arguments must share a variable list")
    common = sorted(f.variables_used() & g.variables_used(), key=f.vars.index)
    if not common:
        return MPoly.const(f.vars, 1)
    name = common[0]
    cf, pf = _content_and_primitive(f, name)
    cg, pg = _content_and_primitive(g, name)
    content = poly_gcd(cf, cg)
    prim = _gcd_univariate_in(pf, pg, name)
    _, prim = _content_and_primitive(prim, name)
    return (content * prim).monic_lex()


def square_free_part(f: MPoly) -> MPoly:
    """Product of the distinct irreducible factors of f (monic, lex)."""
    if f.is_zero():
        raise DegenerateInput("square-free part of zero")
    d = f
    for v in sorted(f.variables_used(), key=f.vars.index):
        d = poly_gcd(d, f.derivative(v))
        if d.is_constant():
            return f.monic_lex()
    return f.exact_div(d).monic_lex()


def is_square_free(f: MPoly) -> bool:
    if f.is_zero():
        return False
    g = f
    for v in sorted(f.variables_used(), key=f.vars.index):
        g = poly_gcd(g, f.derivative(v))
        if g.is_constant():
            return True
    return g.is_constant()


# -- resultants ----------------------------------------------------------------

def resultant(f: MPoly, g: MPoly, name: str) -> MPoly:
    """Resultant in one variable via fraction-free Bareiss elimination.

    Entries of the Sylvester matrix are polynomials in the remaining
    variables; exact division keeps growth under control at this scale.
    """
    m, n = f.degree_in(name), g.degree_in(name)
    if m < 0 or n < 0:
        raise DegenerateInput("resultant of a zero polynomial")
    if m == 0 and n == 0:
        return MPoly.const(f.vars, 1)
    fc = [f.coefficient_of(name, k) for k in range(m, -1, -1)]
    gc = [g.coefficient_of(name, k) for k in range(n, -1, -1)]
    size = m + n
    zero = MPoly.zero(f.vars)
    rows = []
    for i in range(n):
        rows.append([zero] * i + fc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gc + [zero] * (size - n - 1 - i))
    # Bareiss: division-free apart from exact divisions by previous pivots.
    prev = MPoly.const(f.vars, 1)
    mat = rows
    sign = 1
    for k in range(size - 1):
        if mat[k][k].is_zero():
            swap = next((i for i in range(k + 1, size) if not mat[i][k].is_zero()), None)
            if swap is None:
                return MPoly.zero(f.vars)
            mat[k], mat[swap] = mat[swap], mat[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]
                mat[i][j] = num.exact_div(prev)
            mat[i][k] = zero
        prev = mat[k][k]
    out = mat[size - 1][size - 1]
    return out if sign == 1 else -out
