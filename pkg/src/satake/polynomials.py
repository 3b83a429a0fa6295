"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a mapping from exponent vectors (one non-negative int per
variable) to nonzero Fraction coefficients, under the lexicographic order
with x1 > x2 > ... > xn (position 0 compares first).  This is the ambient
ring for the signed-permutation-invariant polynomials the Hecke machinery
produces: symmetric monomial sums, spherical images, and the elimination
chain that ends in a palindromic univariate polynomial.

Two variable layouts occur:

* plain polynomials in x1..xn (or x0..xn when the similitude variable is
  present): every slot of the exponent vector is an "x" variable;
* systems with symbolic constants: the first ``nx`` slots are x-variables
  and the remaining slots are constant symbols c1..cm.  Leading terms are
  then taken with respect to the x-block only, and the leading coefficient
  is itself a polynomial in the constants.

All arithmetic is exact; floating point appears only in :func:`evaluate`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

Exponents = tuple[int, ...]

_ZERO = Fraction(0)


class PolynomialError(ValueError):
    """Structural misuse: mismatched lengths, bad exponents, and the like."""


class EliminationError(ArithmeticError):
    """An S-polynomial step could not be formed (divisibility or unit failure)."""


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise PolynomialError(f"coefficients must be exact rationals, got {type(value).__name__}")


class MultiPoly:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("terms", "nvars")

    def __init__(self, nvars: int, terms: Mapping[Exponents, Fraction] | None = None):
        self.nvars = nvars
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                coeff = _coerce(coeff)
                if coeff == 0:
                    continue
                if len(exps) != nvars:
                    raise PolynomialError(f"exponent vector {exps} has length {len(exps)}, expected {nvars}")
                if any(e < 0 for e in exps):
                    raise PolynomialError(f"negative exponent in {exps}")
                clean[tuple(exps)] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> MultiPoly:
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> MultiPoly:
        return cls(nvars, {(0,) * nvars: _coerce(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> MultiPoly:
        if not 0 <= index < nvars:
            raise PolynomialError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> MultiPoly:
        return cls(len(exps), {tuple(exps): _coerce(coeff)})

    # -- ring operations ---------------------------------------------------

    def _check_compatible(self, other: MultiPoly) -> None:
        if self.nvars != other.nvars:
            raise PolynomialError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: MultiPoly) -> MultiPoly:
        self._check_compatible(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps, _ZERO) + coeff
            if acc:
                out[exps] = acc
            else:
                out.pop(exps, None)
        return MultiPoly(self.nvars, out)

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        return self + (-other)

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> MultiPoly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_compatible(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                acc = out.get(key, _ZERO) + c1 * c2
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def scale(self, factor) -> MultiPoly:
        factor = _coerce(factor)
        if factor == 0:
            return MultiPoly.zero(self.nvars)
        return MultiPoly(self.nvars, {e: c * factor for e, c in self.terms.items()})

    def mul_monomial(self, exps: Sequence[int], coeff=1) -> MultiPoly:
        coeff = _coerce(coeff)
        if coeff == 0:
            return MultiPoly.zero(self.nvars)
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise PolynomialError("monomial length mismatch")
        return MultiPoly(self.nvars, {tuple(a + b for a, b in zip(e, exps)): c * coeff
                                      for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, reverse=True):
            coeff = self.terms[exps]
            mono = "*".join(f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
                            for i, e in enumerate(exps) if e)
            if mono:
                parts.append(f"({coeff})*{mono}" if coeff != 1 else mono)
            else:
                parts.append(f"({coeff})")
        return " + ".join(parts)

    # -- leading-term machinery (lexicographic, x1 compares first) ----------

    def x_part(self, exps: Exponents, nx: int) -> Exponents:
        return exps[:nx]

    def leading_exponents(self, nx: int | None = None) -> Exponents:
        """Lex-largest exponent vector restricted to the first ``nx`` slots."""
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        nx = self.nvars if nx is None else nx
        return max(e[:nx] for e in self.terms)

    def leading_coefficient(self, nx: int | None = None) -> MultiPoly:
        """Coefficient of the leading x-monomial, as a polynomial in the tail block.

        With ``nx == nvars`` the tail block is empty and the result is a
        constant polynomial in zero variables.
        """
        nx = self.nvars if nx is None else nx
        lead = self.leading_exponents(nx)
        tail = {e[nx:]: c for e, c in self.terms.items() if e[:nx] == lead}
        return MultiPoly(self.nvars - nx, tail)

    def divide_exact_monomial(self, exps: Sequence[int]) -> MultiPoly:
        """Divide by a monomial that must divide every term exactly."""
        exps = tuple(exps)
        out = {}
        for e, c in self.terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            if any(x < 0 for x in q):
                raise PolynomialError(f"monomial {exps} does not divide term {e}")
            out[q] = c
        return MultiPoly(self.nvars, out)

    def substitute_tail(self, nx: int, values: Sequence[Fraction]) -> MultiPoly:
        """Substitute exact rational values for the variables after slot ``nx``."""
        if len(values) != self.nvars - nx:
            raise PolynomialError("substitution length mismatch")
        values = [_coerce(v) for v in values]
        out: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            for v, power in zip(values, e[nx:]):
                c = c * v ** power
            if c:
                key = e[:nx]
                acc = out.get(key, _ZERO) + c
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return MultiPoly(nx, out)


def lex_compare(a: Sequence[int], b: Sequence[int]) -> int:
    """Compare exponent vectors lexicographically; x1 decides first.

    Returns -1, 0, or 1.
    """
    if len(a) != len(b):
        raise PolynomialError(f"cannot compare exponent vectors of lengths {len(a)} and {len(b)}")
    for x, y in zip(a, b):
        if x != y:
            return 1 if x > y else -1
    return 0


def s_polynomial(f: MultiPoly, g: MultiPoly, nx: int | None = None) -> MultiPoly:
    """Leading-term-cancelling combination u*f - v*g.

    The argument whose leading x-monomial is lex-smaller is scaled by the
    monomial quotient times the ratio of leading coefficients, so the two
    leading terms cancel; the first argument always enters with + sign.
    Swapping the arguments flips the overall sign.

    The smaller leading monomial must divide the larger one componentwise,
    and the leading coefficient of the scaled side must be an invertible
    constant (automatic for plain rational polynomials).
    """
    if f.is_zero or g.is_zero:
        raise EliminationError("S-polynomial of a zero polynomial")
    f._check_compatible(g)
    nx = f.nvars if nx is None else nx
    lf = f.leading_exponents(nx)
    lg = g.leading_exponents(nx)
    cf = f.leading_coefficient(nx)
    cg = g.leading_coefficient(nx)

    def unit_value(poly: MultiPoly, which: str) -> Fraction:
        if len(poly.terms) != 1 or next(iter(poly.terms)) != (0,) * poly.nvars:
            raise EliminationError(
                f"leading coefficient of the {which} argument is not an invertible constant: {poly!r}")
        return next(iter(poly.terms.values()))

    pad = (0,) * (f.nvars - nx)
    if lf >= lg:
        quot = tuple(a - b for a, b in zip(lf, lg))
        if any(q < 0 for q in quot):
            raise EliminationError(f"leading monomial {lg} does not divide {lf}")
        unit = unit_value(cg, "divisor")
        # f - (lc_f / lc_g) x^(lf-lg) g, where lc_f may be a tail polynomial
        scaled = g.mul_monomial(quot + pad)
        lifted_cf = MultiPoly(f.nvars, {(0,) * nx + e: c for e, c in cf.terms.items()})
        return f - lifted_cf * scaled.scale(Fraction(1) / unit)
    quot = tuple(a - b for a, b in zip(lg, lf))
    if any(q < 0 for q in quot):
        raise EliminationError(f"leading monomial {lf} does not divide {lg}")
    unit = unit_value(cf, "divisor")
    scaled = f.mul_monomial(quot + pad)
    lifted_cg = MultiPoly(f.nvars, {(0,) * nx + e: c for e, c in cg.terms.items()})
    return lifted_cg * scaled.scale(Fraction(1) / unit) - g


def sym_sum(n: int, k: int, j: int, nvars: int | None = None, offset: int = 0) -> MultiPoly:
    """Symmetrized sum of x1^2..xk^2 * x_{k+1}..x_{k+j} over S_n.

    Every coefficient is 1 and the term count is C(n,k)*C(n-k,j).  Out of
    range (k < 0, j < 0, or k + j > n) gives the zero polynomial.  The
    result may be embedded in a wider ring via ``nvars``, with the
    symmetric variables occupying slots offset..offset+n-1.
    """
    if n < 1:
        raise PolynomialError("n must be positive")
    nvars = n + offset if nvars is None else nvars
    if offset < 0 or offset + n > nvars:
        raise PolynomialError("symmetric block does not fit the ring")
    if k < 0 or j < 0 or k + j > n:
        return MultiPoly.zero(nvars)
    terms: dict[Exponents, Fraction] = {}
    one = Fraction(1)
    for squares in combinations(range(n), k):
        rest = [i for i in range(n) if i not in squares]
        for linears in combinations(rest, j):
            exps = [0] * nvars
            for i in squares:
                exps[offset + i] = 2
            for i in linears:
                exps[offset + i] = 1
            terms[tuple(exps)] = one
    return MultiPoly(nvars, terms)


def _distinct_permutations(values: Sequence[int]):
    """Yield the distinct permutations of a small integer multiset."""
    counts: dict[int, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    n = len(values)
    slot = [0] * n

    def rec(pos: int):
        if pos == n:
            yield tuple(slot)
            return
        for v in sorted(counts):
            if counts[v]:
                counts[v] -= 1
                slot[pos] = v
                yield from rec(pos + 1)
                counts[v] += 1

    yield from rec(0)


def wn_symmetrize(n: int, r: int, a: Sequence[int]) -> MultiPoly:
    """Orbit sum of x0^r * x^a under signed permutations, in n+1 variables.

    The orbit consists of x0^r x_{s(1)}^{e_{s(1)}} ... x_{s(n)}^{e_{s(n)}}
    over all permutations s and all choices e_i in {a_i, r - a_i}, each
    distinct monomial once with coefficient 1.  Requires 0 <= a_i <= r so
    no negative exponent can appear.
    """
    if n < 1:
        raise PolynomialError("n must be positive")
    if r < 0:
        raise PolynomialError("r must be non-negative")
    a = tuple(a)
    if len(a) != n:
        raise PolynomialError(f"expected {n} exponents, got {len(a)}")
    for ai in a:
        if not 0 <= ai <= r:
            raise PolynomialError(f"exponent {ai} outside [0, {r}]: the flip r - a would be negative")
    multisets = {tuple(sorted(choice)) for choice in _iter_flips(a, r)}
    terms: dict[Exponents, Fraction] = {}
    one = Fraction(1)
    for ms in multisets:
        for perm in _distinct_permutations(ms):
            terms[(r,) + perm] = one
    return MultiPoly(n + 1, terms)


def _iter_flips(a: tuple[int, ...], r: int):
    if not a:
        yield ()
        return
    head, tail = a[0], a[1:]
    options = {head, r - head}
    for rest in _iter_flips(tail, r):
        for h in options:
            yield (h,) + rest


def evaluate(poly: MultiPoly, point: Sequence[complex], scalar=None) -> complex:
    """Evaluate at a complex point with compensated (Kahan) summation.

    Coefficients are converted from exact rationals to floating scalars only
    here; ``scalar`` overrides the conversion (used by the extended-precision
    mode, which passes an mpmath converter).
    """
    if len(point) != poly.nvars:
        raise PolynomialError(f"point has {len(point)} coordinates, polynomial has {poly.nvars} variables")
    if scalar is None:
        scalar = lambda q: complex(float(q))
    total = scalar(0)
    comp = scalar(0)
    for exps, coeff in sorted(poly.terms.items()):
        term = scalar(coeff)
        for z, e in zip(point, exps):
            if e:
                term = term * z ** e
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total
