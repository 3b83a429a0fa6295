"""Elimination of the reduced system to a palindromic polynomial and back.

The chain of leading-term cancellations

    f_{n+1} = S(f_1, f_2);  f_{n+2} = S(f_2, f_{n+1});
    for j = 3..n: repeat j times  f_new = S(f_prev, f_j)

collapses the n-variable system to a single polynomial G_n of leading
degree (1,...,1,2n) whose terms are all divisible by x_1...x_{n-1}; the
quotient P_n is palindromic of degree 2n in x_n.  Substituting a root z of
P_n yields an (n-1)-variable system of the same shape with constants

    c'_1 = z c_1 / w,    c'_{i+1} = chat_i / w^(i+1),    w = z^2 + 1,
    chat_1 = z w c_2 - z^2 c_1,    chat_i = z w^i c_{i+1} - z chat_{i-1},

so back-substitution walks down to a quadratic.  Each level's root set is
closed under z -> 1/z, and the full solution set is one orbit of the
signed-permutation group (2^n n! tuples), so a single representative per
inverse pair already solves the system; that shortcut is the cross-check
path for the recursive descent.

The chain is run once per dimension with the constants as symbols; the
cached coefficients of P_n (polynomials in c_1..c_n) are then substituted
with exact rationals (top level) or complex values (hat levels).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .hecke import EigenvalueRecord, ReducedSystem
from .krieg import OmegaMatrix, b_vector, spherical_image, spherical_image_t0p
from .numerics import NumericContext
from .polynomials import (EliminationError, MultiPoly, evaluate, s_polynomial,
                          sym_sum, wn_symmetrize)
from .roots import (DEFAULT_ROOT_TOL, PalindromicPoly, all_roots, lift_roots,
                    palindromic_reduce, solve_palindromic)

_DOUBLE = NumericContext()

_IM_TOL = 1e-9          # treat |Im z| below this as real when canonicalizing
_DEGENERATE_W = 1e-8    # |z^2 + 1| below this blocks the hat division


class SolverError(ArithmeticError):
    """Back-substitution paths disagreed or degenerated irrecoverably."""


# ---------------------------------------------------------------------------
# the elimination chain
# ---------------------------------------------------------------------------


def _run_chain(polys: Sequence[MultiPoly], nx: int) -> list[MultiPoly]:
    """Apply the cancellation schedule; returns [f_{n+1}, f_{n+2}, ...]."""
    n = len(polys)
    f = {idx + 1: poly for idx, poly in enumerate(polys)}
    chain: list[MultiPoly] = []
    f[n + 1] = s_polynomial(f[1], f[2], nx)
    chain.append(f[n + 1])
    f[n + 2] = s_polynomial(f[2], f[n + 1], nx)
    chain.append(f[n + 2])
    i = 3
    for j in range(3, n + 1):
        for _ in range(1, j + 1):
            f[n + i] = s_polynomial(f[n + i - 1], f[j], nx)
            chain.append(f[n + i])
            i += 1
    return chain


def _extract_pn(g_poly: MultiPoly, n: int, nx: int) -> list[MultiPoly]:
    """Split G_n into the 2n+1 coefficients of P_n = G_n / (x_1...x_{n-1}).

    Checks the structure the elimination is supposed to deliver: leading
    x-degree (1,...,1,2n), divisibility by x_1...x_{n-1}, and exact
    palindromicity of the coefficient sequence.
    """
    expected_lead = (1,) * (n - 1) + (2 * n,)
    lead = g_poly.leading_exponents(nx)
    if lead != expected_lead:
        raise EliminationError(f"final polynomial has leading degree {lead}, expected {expected_lead}")
    ncoef = g_poly.nvars - nx
    coeffs = [MultiPoly.zero(ncoef) for _ in range(2 * n + 1)]
    for exps, value in g_poly.terms.items():
        xpart = exps[:nx]
        if xpart[: n - 1] != (1,) * (n - 1) or any(e != 0 for e in xpart[n - 1 : nx - 1]):
            raise EliminationError(f"term {xpart} is not divisible by x1...x{n - 1}")
        degree = xpart[nx - 1]
        coeffs[degree] = coeffs[degree] + MultiPoly(ncoef, {exps[nx:]: value})
    for l in range(2 * n + 1):
        if coeffs[l] != coeffs[2 * n - l]:
            raise EliminationError(f"coefficient {l} breaks palindromicity")
    return coeffs


@dataclass(frozen=True)
class SymbolicElimination:
    """Cached chain for dimension n with symbolic constants c_1..c_n.

    Polynomials live in 2n variables: slots 0..n-1 are x_1..x_n and slots
    n..2n-1 are the constants.
    """

    n: int
    system: tuple[MultiPoly, ...]
    chain: tuple[MultiPoly, ...]
    g_poly: MultiPoly
    p_coeffs: tuple[MultiPoly, ...]  # each in n variables (the constants)


def _symbolic_system(n: int) -> tuple[MultiPoly, ...]:
    polys = []
    for i in range(1, n + 1):
        f = MultiPoly.zero(2 * n)
        for t in range(0, n - i + 2):
            f = f + sym_sum(n, t, i - 1, nvars=2 * n)
        cterm = [1] * n + [0] * n
        cterm[n + i - 1] = 1
        f = f + MultiPoly.monomial(tuple(cterm), -1)
        polys.append(f)
    return tuple(polys)


@lru_cache(maxsize=None)
def symbolic_elimination(n: int) -> SymbolicElimination:
    """Run the chain once for dimension n with the constants left symbolic."""
    if n < 1:
        raise EliminationError("dimension must be >= 1")
    system = _symbolic_system(n)
    if n == 1:
        g_poly = system[0]
        coeffs = _extract_pn(g_poly, 1, 1)
        return SymbolicElimination(1, system, (), g_poly, tuple(coeffs))
    chain = _run_chain(system, nx=n)
    g_poly = chain[-1]
    coeffs = _extract_pn(g_poly, n, n)
    return SymbolicElimination(n, system, tuple(chain), g_poly, tuple(coeffs))


def algorithm_A(system: ReducedSystem) -> tuple[MultiPoly, tuple[Fraction, ...]]:
    """Run the chain on a numeric system; exact rational throughout.

    Returns (G_n, coefficients of P_n by ascending degree).  For n = 1 the
    single quadratic f_1 is already P_1.
    """
    n = system.n
    if n == 1:
        g_poly = system.polys[0]
        coeffs = _extract_pn(g_poly, 1, 1)
    else:
        chain = _run_chain(system.polys, nx=n)
        g_poly = chain[-1]
        coeffs = _extract_pn(g_poly, n, n)
    flat = []
    for c in coeffs:
        flat.append(c.terms.get((), Fraction(0)))
    return g_poly, tuple(flat)


def pn_coefficients(constants: Sequence, ctx: NumericContext | None = None) -> list:
    """P_n coefficients for the given constants, via the symbolic cache.

    Exact Fractions in, exact Fractions out; complex in, complex out.
    The substituted sequence is palindromic by construction (coefficients
    l and 2n-l are the same cached polynomial).
    """
    n = len(constants)
    sym = symbolic_elimination(n)
    if all(isinstance(c, (int, Fraction)) for c in constants):
        values = [Fraction(c) for c in constants]
        return [poly.substitute_tail(0, values).terms.get((), Fraction(0))
                for poly in sym.p_coeffs]
    ctx = ctx or _DOUBLE
    point = [ctx.scalar(c) for c in constants]
    return [evaluate(poly, point, scalar=ctx.scalar) for poly in sym.p_coeffs]


# ---------------------------------------------------------------------------
# back-substitution
# ---------------------------------------------------------------------------


def hat_reduce(z, constants: Sequence, ctx: NumericContext | None = None) -> tuple[list, float]:
    """Constants of the (m-1)-variable system after substituting x_m = z.

    Returns (new_constants, diagnostic) where the diagnostic is the
    relative error of the final consistency identity chat_{m-1} = w^m
    (small iff z really is a root of P_m).
    """
    ctx = ctx or _DOUBLE
    m = len(constants)
    if m < 2:
        raise SolverError("hat reduction needs at least two constants")
    z = ctx.scalar(z)
    w = z * z + 1
    if abs(w) < _DEGENERATE_W:
        raise SolverError(f"z = {z} is too close to +-i for the hat division (|z^2+1| = {abs(w):.2e})")
    cs = [ctx.scalar(c) for c in constants]
    new = [z * cs[0] / w]
    chat = z * w * cs[1] - z * z * cs[0]
    wpow = w * w
    for i in range(1, m - 1):
        if i >= 2:
            chat = z * wpow * cs[i] - z * chat
            wpow = wpow * w
        if i <= m - 2:
            new.append(chat / wpow)
    # wpow currently w^(m-1); the unused last combination must equal w^m
    chat_last = z * wpow * cs[m - 1] - z * chat if m >= 3 else chat
    target = wpow * w if m >= 3 else wpow
    diagnostic = abs(chat_last - target) / max(1.0, abs(target))
    return new, diagnostic


def _stability(z) -> float:
    z = complex(z)
    return abs(z * z + 1)


def _root_candidates(constants: Sequence, tol: float, ctx: NumericContext) -> list[tuple]:
    coeffs = pn_coefficients(constants, ctx=ctx)
    return solve_palindromic(coeffs, tol=tol, ctx=ctx)


def primary_solve(constants: Sequence, tol: float = DEFAULT_ROOT_TOL,
                  ctx: NumericContext | None = None) -> list:
    """Recursive descent: pick one stable root per level, reduce, recurse."""
    ctx = ctx or _DOUBLE
    m = len(constants)
    if m == 1:
        big, _ = lift_roots(ctx.scalar(constants[0]), ctx=ctx)
        return [big]
    pairs = _root_candidates(constants, tol, ctx)
    flat = [z for pair in pairs for z in pair]
    flat.sort(key=lambda t: (-_stability(t), -complex(t).real, -complex(t).imag))
    z = flat[0]
    if _stability(z) < _DEGENERATE_W:
        # every root sits at +-i; the pairing shortcut needs no division by z^2+1
        return pairing_solve(constants, tol=tol, ctx=ctx)
    reduced, _ = hat_reduce(z, constants, ctx=ctx)
    return primary_solve(reduced, tol=tol, ctx=ctx) + [z]


def pairing_solve(constants: Sequence, tol: float = DEFAULT_ROOT_TOL,
                  ctx: NumericContext | None = None) -> list:
    """Shortcut: one representative from each inverse pair of P_n's roots.

    Valid because the solution set is a full signed-permutation orbit, so
    every per-pair choice in every order solves the system.
    """
    ctx = ctx or _DOUBLE
    m = len(constants)
    if m == 1:
        big, _ = lift_roots(ctx.scalar(constants[0]), ctx=ctx)
        return [big]
    pairs = _root_candidates(constants, tol, ctx)
    return [pair[0] for pair in pairs]


def enumerate_solutions(constants: Sequence, tol: float = DEFAULT_ROOT_TOL,
                        ctx: NumericContext | None = None, max_dim: int = 3) -> list[tuple]:
    """All back-substitution branches; 2^n n! tuples for generic systems.

    Exponential; intended for property tests, hence the dimension guard.
    """
    ctx = ctx or _DOUBLE
    m = len(constants)
    if m > max_dim:
        raise SolverError(f"exhaustive enumeration capped at dimension {max_dim}")
    if m == 1:
        z1, z2 = lift_roots(ctx.scalar(constants[0]), ctx=ctx)
        return [(z1,), (z2,)]
    out = []
    pairs = _root_candidates(constants, tol, ctx)
    for pair in pairs:
        for z in pair:
            if _stability(z) < _DEGENERATE_W:
                raise SolverError("degenerate root +-i in exhaustive mode (non-generic system)")
            reduced, _ = hat_reduce(z, constants, ctx=ctx)
            for sub in enumerate_solutions(reduced, tol=tol, ctx=ctx, max_dim=max_dim):
                out.append(sub + (z,))
    return out


# ---------------------------------------------------------------------------
# the Satake tuple: alpha_0 recovery, canonical form, residuals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SatakeTuple:
    """Canonical parameter tuple (alpha_0, ..., alpha_n) with bookkeeping."""

    alpha: tuple[complex, ...]
    residual: float | None = None
    multiplicity_flags: tuple[bool, ...] = ()
    provenance: tuple[str, ...] = ()
    alpha0_alternate: complex | None = None

    @property
    def alpha0(self) -> complex:
        return self.alpha[0]

    @property
    def parameters(self) -> tuple[complex, ...]:
        """alpha_1..alpha_n (the signed-permutation part)."""
        return self.alpha[1:]

    def certified(self, threshold: float) -> bool:
        return self.residual is not None and self.residual < threshold


def recover_alpha0(lambda_t0p: int, alphas: Sequence, k1: Fraction | None = None,
                   ctx: NumericContext | None = None):
    """alpha_0 = lambda(T_0(p)) / prod(1 + alpha_i), with a guarded fallback.

    When the product is tiny (some alpha_i near -1) the direct division is
    ill-conditioned; then |alpha_0| is taken from alpha_0^2 prod(alpha) = k1
    and the sign resolved by minimizing the first-equation residual.  If
    both signs fit equally the tuple is flagged and the alternate kept.
    """
    ctx = ctx or _DOUBLE
    flags: list[str] = []
    alternate = None
    prod = ctx.scalar(1)
    for a in alphas:
        prod = prod * (1 + ctx.scalar(a))
    scale = 1.0
    for a in alphas:
        scale *= max(1.0, abs(complex(a)))
    if abs(prod) > 1e-8 * scale:
        return ctx.scalar(lambda_t0p) / prod, tuple(flags), alternate
    if k1 is None:
        raise SolverError("prod(1 + alpha_i) is numerically zero and no k1 was supplied")
    flags.append("alpha0-fallback")
    prod_alpha = ctx.scalar(1)
    for a in alphas:
        prod_alpha = prod_alpha * ctx.scalar(a)
    root = ctx.sqrt(ctx.scalar(k1) / prod_alpha)
    candidates = [root, -root]
    lam = ctx.scalar(lambda_t0p)
    residuals = [abs(c * prod - lam) for c in candidates]
    best = 0 if residuals[0] <= residuals[1] else 1
    if abs(residuals[0] - residuals[1]) <= 1e-9 * max(1.0, abs(complex(lam))):
        flags.append("alpha0-ambiguous")
        alternate = candidates[1 - best]
    return candidates[best], tuple(flags), alternate


def _canonical_rep(z: complex) -> tuple[complex, bool]:
    """Representative of {z, 1/z} with non-negative imaginary part.

    Real pairs break the tie toward modulus >= 1.  Returns (rep, flipped).
    """
    zc = complex(z)
    if zc == 0:
        raise SolverError("zero entry cannot be canonicalized")
    if zc.imag < -_IM_TOL:
        return 1 / zc, True
    if abs(zc.imag) <= _IM_TOL and abs(zc) < 1 - _IM_TOL:
        return 1 / zc, True
    return zc, False


def canonicalize(raw: Sequence, cluster_tol: float = DEFAULT_ROOT_TOL * 1e7,
                 provenance: tuple[str, ...] = ()) -> SatakeTuple:
    """Canonical ordering of (alpha_0, alpha_1, ..., alpha_n).

    Each alpha_i (i >= 1) is replaced by its inverse-pair representative
    with non-negative imaginary part (modulus >= 1 for real pairs); each
    inversion multiplies alpha_0 by the old value.  The representatives are
    then sorted by descending real part, then descending imaginary part.
    Near-identical representatives get multiplicity flags.
    """
    if not raw:
        raise SolverError("empty tuple")
    alpha0 = complex(raw[0])
    reps = []
    for z in raw[1:]:
        rep, flipped = _canonical_rep(z)
        if flipped:
            alpha0 *= complex(z)
        reps.append(rep)
    reps.sort(key=lambda w: (-w.real, -w.imag))
    flags = [False] * len(reps)
    for i, j in combinations(range(len(reps)), 2):
        if abs(reps[i] - reps[j]) < cluster_tol * max(1.0, abs(reps[i])):
            flags[i] = flags[j] = True
    return SatakeTuple(alpha=(alpha0, *reps), multiplicity_flags=tuple(flags),
                       provenance=tuple(provenance))


def _relative_eval(poly: MultiPoly, point: Sequence[complex]) -> float:
    """|poly(point)| normalized by the total evaluation mass."""
    value = evaluate(poly, point)
    mass = 0.0
    for exps, coeff in poly.terms.items():
        term = abs(float(coeff))
        for z, e in zip(point, exps):
            if e:
                term *= abs(complex(z)) ** e
        mass += term
    return abs(value) / max(mass, 1e-300)


def residual(t: SatakeTuple, system: ReducedSystem, rec: EigenvalueRecord | None = None,
             matrix: OmegaMatrix | None = None,
             genus2_convention: str = "published-tables") -> float:
    """Certification residual: system equations, the T_0(p) equation, the
    k1 identity, and eigenvalue reconstruction where a record is given."""
    alphas = t.parameters
    parts = [_relative_eval(f, alphas) for f in system.polys]

    prod_alpha = 1 + 0j
    for a in alphas:
        prod_alpha *= complex(a)
    k1 = float(system.k1)
    if k1:
        parts.append(abs(complex(t.alpha0) ** 2 * prod_alpha - k1) / abs(k1))

    if rec is not None:
        n = rec.n
        full = (complex(t.alpha0), *map(complex, alphas))
        lam0 = evaluate(spherical_image_t0p(n), full)
        parts.append(abs(lam0 - rec.lambda_t0p) / max(1.0, abs(rec.lambda_t0p)))
        if rec.generator_eigenvalues is not None:
            if matrix is None:
                raise SolverError("per-generator residuals need the coefficient matrix")
            for i, lam in rec.generator_eigenvalues.items():
                image = spherical_image(i, n, rec.k, rec.p)
                parts.append(abs(evaluate(image, full) - lam) / max(1.0, abs(lam)))
        else:
            p = rec.p
            khat = [evaluate(wn_symmetrize(n, 2, b_vector(n, n - j + 1)), full)
                    for j in range(1, n + 2)]
            recon = khat[2] + khat[1] + (2 - 1 / p) * khat[0]
            if genus2_convention == "published-tables":
                recon += (khat[0] - khat[1]) / p ** 3
            parts.append(abs(recon - rec.aggregate_tp2) / max(1.0, abs(rec.aggregate_tp2)))
    return max(parts)


# ---------------------------------------------------------------------------
# the combined solver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SolveResult:
    primary: tuple[complex, ...]
    pairing: tuple[complex, ...]
    path_agreement: float
    gamma: tuple[complex, ...]  # roots of the half-degree polynomial at top level


def _canonical_parameter_key(alphas: Sequence) -> list[complex]:
    reps = [_canonical_rep(z)[0] for z in alphas]
    reps.sort(key=lambda w: (-w.real, -w.imag))
    return reps


def solve_system(system: ReducedSystem, tol: float = DEFAULT_ROOT_TOL,
                 ctx: NumericContext | None = None) -> SolveResult:
    """Solve by both the recursive and the pairing path and compare them."""
    ctx = ctx or _DOUBLE
    constants = system.constants
    primary = primary_solve(constants, tol=tol, ctx=ctx)
    pairing = pairing_solve(constants, tol=tol, ctx=ctx)
    ka = _canonical_parameter_key([complex(z) for z in primary])
    kb = _canonical_parameter_key([complex(z) for z in pairing])
    agreement = max((abs(a - b) / max(1.0, abs(a)) for a, b in zip(ka, kb)), default=0.0)
    if system.n == 1:
        gamma: tuple[complex, ...] = ()
    else:
        coeffs = pn_coefficients(constants, ctx=ctx)
        gamma = tuple(complex(y) for y in all_roots(palindromic_reduce(
            PalindromicPoly(tuple(coeffs))), tol=tol, ctx=ctx))
    return SolveResult(primary=tuple(primary), pairing=tuple(pairing),
                       path_agreement=agreement, gamma=gamma)
