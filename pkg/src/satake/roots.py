"""Numerical machinery for palindromic polynomials and unimodularity tests.

A palindromic polynomial of degree 2m satisfies a(l) = a(2m-l); its roots
come in inverse pairs {z, 1/z}, so the substitution y = x + 1/x halves the
degree.  All root finding here goes through that reduction: the half-degree
polynomial is solved by a deterministic Aberth-Ehrlich iteration (closed
forms for degree <= 2) and each y-root is lifted back to an inverse pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numerics import NumericContext


class RootFindingError(ArithmeticError):
    """Iteration failed to converge; carries diagnostics."""


class PairingError(ValueError):
    """A root multiset could not be grouped into inverse pairs."""


DEFAULT_ROOT_TOL = 1e-13
DEFAULT_CERT_TOL = 1e-10
DEFAULT_PAIR_TOL = 1e-6

_DOUBLE = NumericContext()


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction))


def check_palindromic(coeffs: Sequence, tol: float = 1e-12) -> bool:
    """a(l) == a(deg - l), exactly for rational input, to ``tol`` otherwise."""
    deg = len(coeffs) - 1
    if all(_is_exact(c) for c in coeffs):
        return all(coeffs[l] == coeffs[deg - l] for l in range(deg + 1))
    scale = max(abs(complex(c)) for c in coeffs) or 1.0
    return all(abs(complex(coeffs[l]) - complex(coeffs[deg - l])) <= tol * scale
               for l in range(deg + 1))


@dataclass(frozen=True)
class PalindromicPoly:
    """Coefficients a_0..a_2m, validated as palindromic with a_2m != 0."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) % 2 == 0:
            raise ValueError("palindromic polynomial must have even degree")
        if not check_palindromic(coeffs):
            raise ValueError("coefficients are not palindromic")
        if complex(coeffs[-1]) == 0:
            raise ValueError("leading coefficient vanishes")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def palindromic_reduce(poly: PalindromicPoly | Sequence) -> list:
    """Coefficients of Q with Q(x + 1/x) = P(x) / x^m, degree m.

    Uses the three-term recursion x^(i+1) + x^-(i+1) =
    (x^i + x^-i)(x + 1/x) - (x^(i-1) + x^-(i-1)); exact for exact input.
    """
    if not isinstance(poly, PalindromicPoly):
        poly = PalindromicPoly(tuple(poly))
    coeffs = poly.coeffs
    m = poly.degree // 2
    exact = all(_is_exact(c) for c in coeffs)
    zero, one = (Fraction(0), Fraction(1)) if exact else (0j, complex(1))

    def as_scalar(c):
        return Fraction(c) if exact else complex(c)

    # v[i] = coefficients of x^i + x^-i expressed in y = x + 1/x
    v_prev = [2 * one]          # v_0 = 2
    v_cur = [zero, one]         # v_1 = y
    out = [zero] * (m + 1)
    out[0] = as_scalar(coeffs[m])
    for i in range(1, m + 1):
        vi = v_prev if i == 0 else (v_cur if i == 1 else None)
        if i >= 2:
            vi = [zero] * (i + 1)
            for d, c in enumerate(v_cur):
                vi[d + 1] += c
            for d, c in enumerate(v_prev):
                vi[d] -= c
            v_prev, v_cur = v_cur, vi
        ci = as_scalar(coeffs[m + i])
        for d, c in enumerate(vi):
            out[d] += ci * c
    return out


def _horner(coeffs: Sequence, z):
    total = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        total = total * z + c
    return total


def _horner_pair(coeffs: Sequence, z):
    p = coeffs[-1]
    dp = 0 * p
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def all_roots(coeffs: Sequence, tol: float = DEFAULT_ROOT_TOL,
              ctx: NumericContext | None = None, max_iter: int = 200) -> list:
    """All complex roots of sum c_l x^l, deterministic.

    Degree <= 2 is closed-form; otherwise simultaneous Aberth-Ehrlich
    iteration from fixed starting points on a coefficient-bound circle
    (rotated by a fixed angle so no start coincides with a real root),
    followed by Newton polish.
    """
    ctx = ctx or _DOUBLE
    cs = [ctx.scalar(c) for c in coeffs]
    while cs and abs(cs[-1]) == 0:
        cs.pop()
    deg = len(cs) - 1
    if deg < 1:
        raise RootFindingError("degree must be at least 1")
    lead = cs[-1]
    monic = [c / lead for c in cs]
    if deg == 1:
        return [-monic[0]]
    if deg == 2:
        b, c = monic[1], monic[0]
        disc = b * b - 4 * c
        s = ctx.sqrt(disc)
        # avoid cancellation: big root first, cofactor for the other
        zplus, zminus = (-b + s) / 2, (-b - s) / 2
        big = zplus if abs(zplus) >= abs(zminus) else zminus
        if abs(big) == 0:
            return [big, big]
        return sorted([big, c / big], key=lambda z: (-z.real, -z.imag))

    radius = 1.0 + max(abs(c) for c in monic[:-1])
    z = [ctx.scalar(radius) * _unit(ctx, 2 * math.pi * i / deg + 0.7) for i in range(deg)]
    previous = math.inf
    stagnant = 0
    for _ in range(max_iter):
        biggest = 0.0
        for i in range(deg):
            p, dp = _horner_pair(monic, z[i])
            if abs(p) == 0:
                continue
            if abs(dp) == 0:
                newton = p  # fall back to a crude step away from the stationary point
            else:
                newton = p / dp
            rep = sum(1 / (z[i] - z[j]) for j in range(deg) if j != i)
            denom = 1 - newton * rep
            step = newton if abs(denom) == 0 else newton / denom
            z[i] = z[i] - step
            biggest = max(biggest, abs(step) / max(1.0, abs(z[i])))
        if biggest < tol:
            break
        # root clusters make the corrections plateau above any strict tol;
        # detect the plateau and let the residual certificate decide below
        if biggest < 1e-6:
            stagnant = stagnant + 1 if biggest > 0.25 * previous else 0
            if stagnant >= 4:
                break
        previous = biggest
    else:
        raise RootFindingError(
            f"Aberth iteration did not converge in {max_iter} iterations "
            f"(degree {deg}, last correction {biggest:.3e})")
    for i in range(deg):
        for _ in range(3):
            p, dp = _horner_pair(monic, z[i])
            if abs(dp) == 0 or abs(p) == 0:
                break
            z[i] = z[i] - p / dp
    certify_roots(monic, z)
    return sorted(z, key=lambda w: (-float(w.real), -float(w.imag)))


def _unit(ctx: NumericContext, angle: float):
    return ctx.scalar(complex(math.cos(angle), math.sin(angle)))


def certify_roots(coeffs: Sequence, roots: Sequence, tol: float = DEFAULT_CERT_TOL) -> float:
    """Largest normalized |P(z)| over the claimed roots; raises past ``tol``."""
    cs = [complex(c) for c in coeffs]
    scale = sum(abs(c) for c in cs)
    worst = 0.0
    for z in roots:
        zb = complex(z)
        bound = scale * max(1.0, abs(zb)) ** (len(cs) - 1)
        worst = max(worst, abs(_horner(cs, zb)) / bound)
    if worst > tol:
        raise RootFindingError(f"root certification failed: residual {worst:.3e} > {tol:.1e}")
    return worst


def lift_roots(y, ctx: NumericContext | None = None) -> tuple:
    """The two roots of z^2 - y z + 1 = 0, with z1 z2 = 1 by construction.

    The larger-magnitude root is computed first; the other is its exact
    reciprocal, which keeps the pair stable when the discriminant is tiny.
    """
    ctx = ctx or _DOUBLE
    y = ctx.scalar(y)
    s = ctx.sqrt(y * y - 4)
    big = (y + s) / 2 if abs(y + s) >= abs(y - s) else (y - s) / 2
    if abs(big) == 0:  # y*y == 4 cancellation cannot reach 0; guard anyway
        return (ctx.scalar(1), ctx.scalar(1))
    return (big, 1 / big)


def solve_palindromic(poly: PalindromicPoly | Sequence, tol: float = DEFAULT_ROOT_TOL,
                      ctx: NumericContext | None = None) -> list[tuple]:
    """Inverse pairs {z, 1/z} of a palindromic polynomial, via y = x + 1/x."""
    ctx = ctx or _DOUBLE
    if not isinstance(poly, PalindromicPoly):
        poly = PalindromicPoly(tuple(poly))
    reduced = palindromic_reduce(poly)
    ys = all_roots(reduced, tol=tol, ctx=ctx)
    return [lift_roots(y, ctx=ctx) for y in ys]


def inverse_pairing(roots: Sequence, tol: float = DEFAULT_PAIR_TOL) -> list[tuple[int, int]]:
    """Group a root multiset into inverse pairs {z, 1/z}; greedy matching.

    Each root is matched (in a deterministic order) to the unused root
    closest to its reciprocal; an unmatched residue beyond ``tol`` means
    the multiset was not closed under inversion.
    """
    if len(roots) % 2 != 0:
        raise PairingError("odd number of roots cannot pair up")
    order = sorted(range(len(roots)), key=lambda i: (-abs(complex(roots[i])),
                                                     -complex(roots[i]).real,
                                                     -complex(roots[i]).imag))
    used = [False] * len(roots)
    pairs = []
    for i in order:
        if used[i]:
            continue
        used[i] = True
        target = 1 / complex(roots[i])
        candidates = [j for j in order if not used[j]]
        best = min(candidates, key=lambda j: abs(complex(roots[j]) - target))
        err = abs(complex(roots[best]) - target)
        if err > tol * max(1.0, abs(target)):
            raise PairingError(f"no inverse partner for root {roots[i]} (best error {err:.3e})")
        used[best] = True
        pairs.append((i, best))
    return pairs


def km_unimodular_test(coeffs: Sequence) -> bool:
    """One-sided certificate that a real palindromic polynomial has a
    unimodular root pair.

    True when some k < m satisfies |a_k| >= |a_m| cos(pi / (floor(m/(m-k)) + 2));
    False is inconclusive.  Intended for real coefficients.
    """
    poly = coeffs.coeffs if isinstance(coeffs, PalindromicPoly) else tuple(coeffs)
    deg = len(poly) - 1
    if deg % 2 != 0:
        raise ValueError("even degree required")
    m = deg // 2
    mid = abs(complex(poly[m]))
    for k in range(m):
        bound = mid * math.cos(math.pi / (math.floor(m / (m - k)) + 2))
        if abs(complex(poly[k])) >= bound - 1e-15 * max(1.0, mid):
            return True
    return False


@dataclass(frozen=True)
class RPVerdict:
    """Unimodularity verdict for a parameter tuple."""

    status: str  # "unimodular" | "violated" | "uncertified"
    max_deviation: float
    deviations: tuple[float, ...]
    gamma_moduli: tuple[float, ...] | None = None  # genus-2 diagnostic |alpha + 1/alpha|


def rp_verdict(alphas: Sequence, tol: float = 1e-6, certified: bool = True) -> RPVerdict:
    """Ramanujan-Petersson check on alpha_1..alpha_n (alpha_0 excluded)."""
    devs = tuple(abs(abs(complex(a)) - 1.0) for a in alphas)
    maxdev = max(devs) if devs else 0.0
    gammas = None
    if len(alphas) == 2:
        gammas = tuple(abs(complex(a) + 1 / complex(a)) for a in alphas)
    if not certified:
        return RPVerdict("uncertified", maxdev, devs, gammas)
    status = "unimodular" if maxdev < tol else "violated"
    return RPVerdict(status, maxdev, devs, gammas)
