"""From Hecke eigenvalues to the reduced polynomial system.

Given the eigenvalues of an eigenform with respect to the generators
T_0(p) and T_i(p^2), the triangular structure of the spherical images
turns into constants k_1..k_{n+1} (the orbit-sum values), then into the
ratios c_j = k_{n+2-j}/k_1 that parametrize the n-variable system

    f_i = sum_{t=0..n-i+1} SymSum(n, t, i-1) - c_i x_1...x_n,   i = 1..n,

whose solutions are the Satake parameter tuples (without x0).

Genus-2 data usually comes as the aggregate eigenvalue of
T(p^2) = T_0(p^2) + T_1(p^2) + T_2(p^2); the 2x2 linear solve for
(c_1, c_2) supports two conventions:

* "spherical-map": the aggregate identity implied by the spherical images,
  lambda(T(p^2)) = k1*(c1 + c2) + (2p-1) p^(2k-4);
* "published-tables": the variant that reproduces the published genus-2
  Satake tables, lambda(T(p^2)) = k1*c1 + (p^3-1) p^(2k-6) k1/k1... i.e.
  k1*(c1 + (1 - p^-3) c2) + (2p-1) p^(2k-4) + p^(2k-6).

The two differ by p^(2k-6)(c2 - 1); only the second matches the published
tables, only the first is consistent with the spherical map (and hence
with per-generator data).  Both are exposed; datasets select one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .krieg import DomainError, OmegaMatrix, _check_prime
from .polynomials import MultiPoly, sym_sum


class InconsistentDatasetError(ValueError):
    """Supplied eigenvalues contradict a forced identity."""


class DegenerateFormError(ArithmeticError):
    """A quantity that is nonzero for genuine eigenforms vanished."""


class NormalizationError(ArithmeticError):
    """Tripwire: a value that must be integral under the adopted
    normalization came out fractional."""


GENUS2_CONVENTIONS = ("spherical-map", "published-tables")


@dataclass(frozen=True)
class EigenvalueRecord:
    """One eigenform at one prime.

    Exactly one of ``generator_eigenvalues`` (map i -> lambda(T_i(p^2)),
    i = 1..n with i = n optional and i = 0 optional) and ``aggregate_tp2``
    (genus-2 lambda(T(p^2))) must be provided.
    """

    label: str
    n: int
    k: int
    p: int
    lambda_t0p: int
    generator_eigenvalues: Mapping[int, int] | None = None
    aggregate_tp2: int | None = None
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InconsistentDatasetError(f"{self.label}: genus must be >= 1")
        if self.k % 2 != 0:
            raise InconsistentDatasetError(f"{self.label}: weight must be even")
        try:
            _check_prime(self.p)
        except DomainError as exc:
            raise InconsistentDatasetError(f"{self.label}: {exc}") from exc
        has_gen = self.generator_eigenvalues is not None
        has_agg = self.aggregate_tp2 is not None
        if has_gen == has_agg:
            raise InconsistentDatasetError(
                f"{self.label}: need exactly one of per-generator eigenvalues and the aggregate")
        if has_agg and self.n != 2:
            raise InconsistentDatasetError(f"{self.label}: the aggregate form is genus-2 only")
        if has_gen:
            gens = dict(self.generator_eigenvalues)
            object.__setattr__(self, "generator_eigenvalues", gens)
            needed = set(range(1, self.n))
            if not needed <= set(gens):
                missing = sorted(needed - set(gens))
                raise InconsistentDatasetError(f"{self.label}: missing generator eigenvalues {missing}")
            extra = set(gens) - set(range(0, self.n + 1))
            if extra:
                raise InconsistentDatasetError(f"{self.label}: unknown generator indices {sorted(extra)}")
            if self.n in gens and gens[self.n] != scalar_eigenvalue(self.n, self.k, self.p):
                raise InconsistentDatasetError(
                    f"{self.label}: lambda(T_{self.n}(p^2)) = {gens[self.n]} but the similitude "
                    f"computation forces {scalar_eigenvalue(self.n, self.k, self.p)}")

    @property
    def excluded(self) -> bool:
        return "excluded-erratum" in self.flags


@dataclass(frozen=True)
class ReducedSystem:
    """The n-variable system the elimination algorithm consumes."""

    n: int
    constants: tuple[Fraction, ...]
    polys: tuple[MultiPoly, ...]
    k1: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        if self.k1 == 0:
            raise DegenerateFormError("k1 = x0^2 x1...xn must be nonzero")


def scalar_eigenvalue(n: int, k: int, p: int) -> int:
    """Eigenvalue of the scalar similitude coset T_n(p^2): p^(nk - n(n+1))."""
    return p ** (n * k - n * (n + 1))


def k_constants(rec: EigenvalueRecord, matrix: OmegaMatrix) -> tuple[Fraction, ...]:
    """Solve the triangular system for k_1..k_{n+1}.

    k_j comes from the row of T_{n-j+1}(p^2); the missing lambda(T_n(p^2))
    is synthesized from the similitude computation, and k_{n+1} from the
    square identity lambda(T_0(p))^2 = sum_j 2^(n+1-j) k_j when
    lambda(T_0(p^2)) is absent.  When it is present, both values must
    agree exactly.
    """
    if rec.generator_eigenvalues is None:
        raise InconsistentDatasetError(f"{rec.label}: k_constants needs per-generator eigenvalues")
    n = rec.n
    if matrix.n != n or matrix.p != rec.p:
        raise InconsistentDatasetError(f"{rec.label}: matrix is for (n={matrix.n}, p={matrix.p})")
    gens = dict(rec.generator_eigenvalues)
    gens.setdefault(n, scalar_eigenvalue(n, rec.k, rec.p))

    kv: list[Fraction | None] = [None] * (n + 2)  # 1-based
    for j in range(1, n + 1):
        row = n - j + 1
        if matrix.entry(row, row) == 0:
            raise DegenerateFormError(f"diagonal entry c({row},{row}) vanished")
        acc = Fraction(gens[row])
        for col in range(row + 1, n + 1):
            acc -= matrix.entry(row, col) * kv[n - col + 1]
        kv[j] = acc / matrix.entry(row, row)

    from_square = Fraction(rec.lambda_t0p) ** 2 - sum(
        Fraction(2) ** (n + 1 - j) * kv[j] for j in range(1, n + 1))
    if 0 in gens:
        acc = Fraction(gens[0])
        for col in range(1, n + 1):
            acc -= matrix.entry(0, col) * kv[n - col + 1]
        from_row = acc / matrix.entry(0, 0)
        if from_row != from_square:
            raise InconsistentDatasetError(
                f"{rec.label}: lambda(T_0(p^2)) disagrees with the square identity "
                f"({from_row} vs {from_square})")
    kv[n + 1] = from_square
    return tuple(kv[1:])


def reduced_constants(kvec: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """c_j = k_{n+2-j} / k_1 for j = 1..n."""
    n = len(kvec) - 1
    k1 = kvec[0]
    if k1 == 0:
        raise DegenerateFormError("k1 vanishes; lambda(T_n(p^2)) cannot be zero")
    return tuple(kvec[n + 1 - j] / k1 for j in range(1, n + 1))


def genus2_constants(lambda_tp: int, lambda_tp2: int, k: int, p: int,
                     convention: str = "published-tables") -> tuple[Fraction, Fraction]:
    """Recover (c_1, c_2) from the genus-2 aggregate eigenvalues.

    Solves the exact linear system

        lambda(T(p))^2  = k1 (c_1 + 2 c_2 + 4),         k1 = p^(2k-3)
        lambda(T(p^2))  = k1 (c_1 + B c_2) + const

    with (B, const) fixed by ``convention`` (see the module docstring).
    """
    if convention not in GENUS2_CONVENTIONS:
        raise DomainError(f"unknown convention {convention!r}")
    _check_prime(p)
    k1 = Fraction(p) ** (2 * k - 3)
    if convention == "spherical-map":
        bcoef = Fraction(1)
        const = (2 * p - 1) * Fraction(p) ** (2 * k - 4)
    else:
        bcoef = 1 - Fraction(1, p ** 3)
        const = (2 * p - 1) * Fraction(p) ** (2 * k - 4) + Fraction(p) ** (2 * k - 6)
    lhs1 = Fraction(lambda_tp) ** 2 / k1 - 4        # c1 + 2 c2
    lhs2 = (Fraction(lambda_tp2) - const) / k1      # c1 + B c2
    if bcoef == 2:
        raise DegenerateFormError("degenerate 2x2 system")  # unreachable for p >= 2
    c2 = (lhs1 - lhs2) / (2 - bcoef)
    c1 = lhs1 - 2 * c2
    return c1, c2


def build_system(constants: tuple[Fraction, ...] | list[Fraction], n: int | None = None,
                 k1: Fraction = Fraction(1)) -> ReducedSystem:
    """Assemble f_i = sum_t SymSum(n,t,i-1) - c_i x1...xn for i = 1..n."""
    constants = tuple(Fraction(c) for c in constants)
    n = len(constants) if n is None else n
    if n != len(constants) or n < 1:
        raise DomainError(f"need n = len(constants) >= 1, got n={n}, {len(constants)} constants")
    polys = []
    all_ones = (1,) * n
    for i in range(1, n + 1):
        f = MultiPoly.zero(n)
        for t in range(0, n - i + 2):
            f = f + sym_sum(n, t, i - 1)
        f = f + MultiPoly.monomial(all_ones, -constants[i - 1])
        polys.append(f)
    return ReducedSystem(n=n, constants=constants, polys=tuple(polys), k1=Fraction(k1))


def t0p2_from_identity(lambda_t0p: int, kvec: tuple[Fraction, ...], matrix: OmegaMatrix) -> int:
    """lambda(T_0(p^2)) from row 0 of the matrix and the k-chain.

    The result must be an integer; a fractional value signals a broken
    index mapping or normalization and raises NormalizationError.
    """
    n = matrix.n
    if len(kvec) != n + 1:
        raise DomainError(f"kvec must have length n+1 = {n + 1}")
    square = Fraction(lambda_t0p) ** 2 - sum(
        Fraction(2) ** (n + 1 - j) * kvec[j - 1] for j in range(1, n + 1))
    if square != kvec[n]:
        raise InconsistentDatasetError(
            f"k_{n + 1} = {kvec[n]} does not satisfy the square identity (expected {square})")
    total = sum(matrix.entry(0, col) * kvec[n - col] for col in range(0, n + 1))
    if total.denominator != 1:
        raise NormalizationError(f"lambda(T_0(p^2)) came out fractional: {total}")
    return int(total)


@dataclass(frozen=True)
class RecordConstants:
    """Constants derived from one record, with provenance notes."""

    constants: tuple[Fraction, ...]
    kvec: tuple[Fraction, ...]
    flags: tuple[str, ...] = ()


def constants_from_record(rec: EigenvalueRecord, matrix: OmegaMatrix | None = None,
                          genus2_convention: str = "published-tables") -> RecordConstants:
    """Dispatch between the per-generator chain and the genus-2 aggregate solve."""
    flags: list[str] = []
    if rec.generator_eigenvalues is not None:
        if matrix is None:
            raise DomainError("per-generator records need the coefficient matrix")
        if rec.n not in rec.generator_eigenvalues:
            flags.append("synthesized-lambda-tn")
        kvec = k_constants(rec, matrix)
        constants = reduced_constants(kvec)
    else:
        c1, c2 = genus2_constants(rec.lambda_t0p, rec.aggregate_tp2, rec.k, rec.p,
                                  convention=genus2_convention)
        k1 = Fraction(rec.p) ** (2 * rec.k - 3)
        kvec = (k1, c2 * k1, c1 * k1)
        constants = (c1, c2)
        flags.append(f"genus2-{genus2_convention}")
    return RecordConstants(constants=tuple(constants), kvec=tuple(kvec), flags=tuple(flags))
