"""Spherical-map images of the local Hecke algebra generators.

The degree-n local Hecke algebra at p is generated by T_0(p) and the
similitude-p^2 double cosets T_i(p^2), i = 0..n (T_0(p^2) is the redundant
extra operator).  Their images under the spherical map are

    Omega(T_0(p))   = x0 (1 + x1) ... (1 + xn)
    Omega(T_i(p^2)) = sum_{j=i..n} c(i,j) [x0^2 x^{b_j}]

where [.] is the signed-permutation orbit sum, b_j = (2,...,2,1,...,1) with
j ones, and the coefficients are

    c(i,j) = raw(j - i, i) / p^(j(j+1))
    raw(2m,   J) = sum_{l=0..m} (-1)^l C(2m+J, m-l)
                   p^(4m^2 + 4mJ + 2m + J(J+1)/2 - 2Jl - l^2) d(l, J)
    raw(2m+1, J) = (p^(J+1) - 1) raw(2m, J+1)
    d(0, J) = 1
    d(l, J) = prod_{t=1..l} (p^(2J+2t)-1)/(p^(2t)-1)
              + p^J prod_{t=1..l-1} (p^(2J+2t)-1)/(p^(2t)-1)      (l >= 1)

The entries depend only on (i, j, p), not on genus or weight; the eigenvalue
normalization is pinned so that the similitude-p^2 scalar coset T_n(p^2) has
eigenvalue p^(nk-n(n+1)) and x0^2 x1...xn evaluates to p^(nk-n(n+1)/2).
The diagonal is c(j,j) = p^(-j(j+1)/2), never zero.

This parametrization is validated against classical genus-1 facts, the
genus-2 aggregate expansion, and the genus-4 eigenvalue tables (exact
integer identities); see the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .polynomials import MultiPoly, wn_symmetrize


class DomainError(ValueError):
    """Argument outside the mathematically meaningful range."""


def _check_prime(p: int) -> None:
    if p < 2:
        raise DomainError(f"p must be a prime >= 2, got {p}")
    if p % 2 == 0 and p != 2:
        raise DomainError(f"{p} is not prime")
    d = 3
    while d * d <= p:
        if p % d == 0:
            raise DomainError(f"{p} is not prime")
        d += 2


@lru_cache(maxsize=None)
def d_coeff(l: int, j: int, p: int) -> Fraction:
    """Krieg's d(l, j) in exact arithmetic."""
    _check_prime(p)
    if l < 0 or j < 0:
        raise DomainError(f"d({l},{j}) undefined for negative arguments")
    if l == 0:
        return Fraction(1)
    full = Fraction(1)
    for t in range(1, l + 1):
        full *= Fraction(p ** (2 * j + 2 * t) - 1, p ** (2 * t) - 1)
    partial = Fraction(1)
    for t in range(1, l):
        partial *= Fraction(p ** (2 * j + 2 * t) - 1, p ** (2 * t) - 1)
    return full + p ** j * partial


@lru_cache(maxsize=None)
def raw_coefficient(dist: int, gen: int, p: int) -> Fraction:
    """The double-sum/recursion building block raw(dist, gen) above."""
    if dist < 0 or gen < 0:
        raise DomainError(f"raw({dist},{gen}) undefined")
    if dist % 2 == 1:
        return (p ** (gen + 1) - 1) * raw_coefficient(dist - 1, gen + 1, p)
    m, J = dist // 2, gen
    total = Fraction(0)
    for l in range(m + 1):
        exponent = 4 * m * m + 4 * m * J + 2 * m + J * (J + 1) // 2 - 2 * J * l - l * l
        total += (-1) ** l * comb(2 * m + J, m - l) * Fraction(p) ** exponent * d_coeff(l, J, p)
    return total


def c_coeff(i: int, j: int, p: int, n: int | None = None, k: int | None = None) -> Fraction:
    """Coefficient of [x0^2 x^{b_j}] in Omega(T_i(p^2)).

    ``n`` and ``k`` are accepted for interface parity and range checking;
    the value itself is independent of both (the k-dependent slash factor
    cancels in the adopted normalization).
    """
    _check_prime(p)
    if i < 0 or j < i:
        raise DomainError(f"need 0 <= i <= j, got ({i},{j})")
    if n is not None and j > n:
        raise DomainError(f"column {j} exceeds genus {n}")
    return raw_coefficient(j - i, i, p) / Fraction(p) ** (j * (j + 1))


@dataclass(frozen=True)
class OmegaMatrix:
    """Upper-triangular matrix of the c(i,j); row i = generator T_i(p^2)."""

    n: int
    k: int
    p: int
    entries: tuple[tuple[Fraction, ...], ...]

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def __post_init__(self):
        for i, row in enumerate(self.entries):
            for j, value in enumerate(row):
                if j < i and value != 0:
                    raise DomainError(f"entry ({i},{j}) below the diagonal is nonzero")
            if row[i] == 0:
                raise DomainError(f"diagonal entry ({i},{i}) vanishes")


def omega_matrix(n: int, k: int, p: int) -> OmegaMatrix:
    """Assemble the (n+1) x (n+1) coefficient matrix for genus n, weight k."""
    if n < 1:
        raise DomainError("genus must be >= 1")
    if k % 2 != 0:
        raise DomainError("weight must be even")
    _check_prime(p)
    rows = tuple(
        tuple(c_coeff(i, j, p, n, k) if j >= i else Fraction(0) for j in range(n + 1))
        for i in range(n + 1)
    )
    return OmegaMatrix(n=n, k=k, p=p, entries=rows)


def b_vector(n: int, j: int) -> tuple[int, ...]:
    """Divisor exponent type b_j = (2,...,2,1,...,1) with j ones."""
    if not 0 <= j <= n:
        raise DomainError(f"b_{j} undefined for genus {n}")
    return (2,) * (n - j) + (1,) * j


def spherical_image_t0p(n: int) -> MultiPoly:
    """Omega(T_0(p)) = x0 (1+x1)...(1+xn), expanded (n+1 variables)."""
    if n < 1:
        raise DomainError("genus must be >= 1")
    poly = MultiPoly.monomial((1,) + (0,) * n)
    for i in range(1, n + 1):
        factor = MultiPoly.constant(n + 1, 1) + MultiPoly.variable(n + 1, i)
        poly = poly * factor
    return poly


def spherical_image(i: int, n: int, k: int, p: int) -> MultiPoly:
    """Omega(T_i(p^2)) as a polynomial in x0..xn."""
    if not 0 <= i <= n:
        raise DomainError(f"generator index {i} outside 0..{n}")
    _check_prime(p)
    total = MultiPoly.zero(n + 1)
    for j in range(i, n + 1):
        total = total + wn_symmetrize(n, 2, b_vector(n, j)).scale(c_coeff(i, j, p, n, k))
    return total
