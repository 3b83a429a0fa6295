"""Batch orchestration: records in, certified parameter tuples out."""

from __future__ import annotations

import fnmatch
from dataclasses import dataclass, replace
from itertools import permutations
from typing import Iterable, Sequence

from .datasets import Dataset
from .eliminate import (SatakeTuple, SolverError, canonicalize,
                        recover_alpha0, residual, solve_system)
from .hecke import EigenvalueRecord, build_system, constants_from_record
from .krieg import OmegaMatrix, omega_matrix
from .numerics import NumericContext, context_from_env
from .roots import rp_verdict


@dataclass(frozen=True)
class Tolerances:
    """Knobs of the numeric pipeline; defaults as documented."""

    root_correction: float = 1e-13
    certification: float = 1e-10       # polynomial root certificates
    pairing: float = 1e-6
    cluster: float = 1e-6
    table_comparison: float = 5e-4     # against published 4-decimal values
    path_agreement: float = 1e-8
    residual_certify: float = 1e-8     # SatakeTuple certification threshold
    rp: float = 1e-6                   # unimodularity


@dataclass(frozen=True)
class ResultRow:
    """One computed (form, prime) result, serialization-friendly."""

    label: str
    p: int
    genus: int
    weight: int
    satake: SatakeTuple | None
    verdict: str
    max_deviation: float | None
    gamma_moduli: tuple[float, ...] | None
    path_agreement: float | None
    flags: tuple[str, ...]
    excluded: bool = False
    error: str | None = None
    note: str | None = None

    @property
    def failed(self) -> bool:
        return not self.excluded and self.error is not None


def _sig10(x: float) -> float:
    return float(f"{x:.10g}")


def _complex_pair(z: complex) -> list[float]:
    return [_sig10(z.real), _sig10(z.imag)]


def row_to_dict(row: ResultRow) -> dict:
    out = {
        "label": row.label,
        "p": row.p,
        "genus": row.genus,
        "weight": row.weight,
        "verdict": row.verdict,
        "excluded": row.excluded,
        "flags": list(row.flags),
    }
    if row.satake is not None:
        out["alpha"] = [_complex_pair(z) for z in row.satake.alpha]
        out["moduli"] = [_sig10(abs(z)) for z in row.satake.alpha[1:]]
        out["residual"] = _sig10(row.satake.residual)
        out["multiplicity_flags"] = list(row.satake.multiplicity_flags)
    if row.max_deviation is not None:
        out["max_deviation"] = _sig10(row.max_deviation)
    if row.gamma_moduli is not None:
        out["gamma_moduli"] = [_sig10(g) for g in row.gamma_moduli]
    if row.path_agreement is not None:
        out["path_agreement"] = _sig10(row.path_agreement)
    if row.error:
        out["error"] = row.error
    if row.note:
        out["note"] = row.note
    return out


def _format_complex(z: complex) -> str:
    return f"{_sig10(z.real)!r}{'+' if z.imag >= 0 else '-'}{_sig10(abs(z.imag))!r}i"


def row_to_csv(row: ResultRow, genus: int) -> str:
    cells = [row.label, str(row.p), str(row.genus), str(row.weight), row.verdict,
             "" if row.max_deviation is None else f"{row.max_deviation:.10g}",
             "" if row.satake is None else f"{row.satake.residual:.10g}",
             "yes" if row.excluded else "no",
             ";".join(row.flags)]
    alphas = list(row.satake.alpha) if row.satake is not None else []
    alphas += [None] * (genus + 1 - len(alphas))
    cells += ["" if z is None else _format_complex(z) for z in alphas]
    return ",".join(cells)


def csv_header(genus: int) -> str:
    cols = ["label", "p", "genus", "weight", "verdict", "max_deviation",
            "residual", "excluded", "flags", "alpha0"]
    cols += [f"alpha{i}" for i in range(1, genus + 1)]
    return ",".join(cols)


def compute_record(rec: EigenvalueRecord, tolerances: Tolerances | None = None,
                   ctx: NumericContext | None = None,
                   genus2_convention: str = "published-tables",
                   matrix: OmegaMatrix | None = None) -> ResultRow:
    """Full pipeline for one record: constants, elimination, roots, alpha_0,
    canonical form, residual certification, unimodularity verdict."""
    tol = tolerances or Tolerances()
    ctx = ctx or NumericContext()
    base = dict(label=rec.label, p=rec.p, genus=rec.n, weight=rec.k,
                satake=None, verdict="excluded" if rec.excluded else "error",
                max_deviation=None, gamma_moduli=None, path_agreement=None,
                flags=rec.flags, excluded=rec.excluded)
    if rec.excluded:
        return ResultRow(**base, note="excluded by dataset erratum annotation")
    try:
        if matrix is None and rec.generator_eigenvalues is not None:
            matrix = omega_matrix(rec.n, rec.k, rec.p)
        derived = constants_from_record(rec, matrix, genus2_convention=genus2_convention)
        system = build_system(derived.constants, rec.n, k1=derived.kvec[0])
        solved = solve_system(system, tol=tol.root_correction, ctx=ctx)
        if solved.path_agreement > tol.path_agreement:
            raise SolverError(
                f"recursive and pairing paths disagree by {solved.path_agreement:.3e} "
                f"(> {tol.path_agreement:.1e})")
        alpha0, a0_flags, alternate = recover_alpha0(
            rec.lambda_t0p, solved.primary, k1=derived.kvec[0], ctx=ctx)
        tuple_raw = (ctx.to_builtin(alpha0), *[ctx.to_builtin(ctx.scalar(z)) for z in solved.primary])
        sat = canonicalize(tuple_raw, cluster_tol=tol.cluster,
                           provenance=rec.flags + derived.flags + a0_flags)
        if alternate is not None:
            sat = replace(sat, alpha0_alternate=ctx.to_builtin(alternate))
        res = residual(sat, system, rec, matrix, genus2_convention=genus2_convention)
        sat = replace(sat, residual=res)
        verdict = rp_verdict(sat.parameters, tol=tol.rp,
                             certified=sat.certified(tol.residual_certify))
        return ResultRow(**{**base, "satake": sat, "verdict": verdict.status,
                            "max_deviation": verdict.max_deviation,
                            "gamma_moduli": tuple(abs(g) for g in solved.gamma) or None,
                            "path_agreement": solved.path_agreement,
                            "flags": rec.flags + derived.flags + a0_flags})
    except Exception as exc:  # per-record failures must not abort the batch
        return ResultRow(**base, error=f"{type(exc).__name__}: {exc}")


def select_records(dataset: Dataset, form: str | None = None,
                   primes: Iterable[int] | None = None) -> list[EigenvalueRecord]:
    prime_set = set(primes) if primes is not None else None
    out = []
    for rec in dataset.records:
        if form is not None and not fnmatch.fnmatch(rec.label, form):
            continue
        if prime_set is not None and rec.p not in prime_set:
            continue
        out.append(rec)
    return out


def run_compute(dataset: Dataset, form: str | None = None,
                primes: Iterable[int] | None = None,
                tolerances: Tolerances | None = None,
                ctx: NumericContext | None = None,
                genus2_convention: str = "published-tables") -> list[ResultRow]:
    """Compute every selected record, in dataset order, deterministically."""
    tol = tolerances or Tolerances()
    ctx = ctx or context_from_env()
    rows = []
    matrices: dict[tuple[int, int, int], OmegaMatrix] = {}
    for rec in select_records(dataset, form, primes):
        key = (rec.n, rec.k, rec.p)
        if rec.generator_eigenvalues is not None and key not in matrices:
            matrices[key] = omega_matrix(*key)
        rows.append(compute_record(rec, tolerances=tol, ctx=ctx,
                                   genus2_convention=genus2_convention,
                                   matrix=matrices.get(key)))
    return rows


def exit_status(rows: Sequence[ResultRow], tolerances: Tolerances | None = None) -> int:
    """0 when every non-excluded row computed and certified, else 1."""
    tol = tolerances or Tolerances()
    for row in rows:
        if row.excluded:
            continue
        if row.error is not None:
            return 1
        if row.satake is None or not row.satake.certified(tol.residual_certify):
            return 1
    return 0


def match_parameters(computed: Sequence[complex], expected: Sequence[complex],
                     tol: float) -> float:
    """Largest componentwise deviation under the best orbit matching.

    Each computed parameter contributes its inverse pair {z, 1/z}; expected
    values (as printed, never inverted) are matched bijectively against the
    pairs.  Returns the max over components of max(|d re|, |d im|) for the
    optimal assignment; raises if no assignment fits within ``tol``.
    """
    n = len(expected)
    if len(computed) != n:
        raise ValueError(f"length mismatch: {len(computed)} computed vs {n} expected")

    def cost(z: complex, w: complex) -> float:
        candidates = [z]
        if z != 0:
            candidates.append(1 / z)
        return min(max(abs(c.real - w.real), abs(c.imag - w.imag)) for c in candidates)

    best = None
    for perm in permutations(range(n)):
        worst = max(cost(complex(computed[i]), complex(expected[perm[i]])) for i in range(n))
        if best is None or worst < best:
            best = worst
    if best is None or best > tol:
        raise AssertionError(f"no matching within {tol:.1e} (best {best})")
    return best
