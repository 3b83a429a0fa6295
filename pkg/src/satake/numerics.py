"""Floating-point context: plain complex doubles or mpmath at higher precision.

Everything numeric downstream of the exact algebra (root finding, hat
reduction, residuals) goes through a NumericContext so the whole pipeline
can run at an elevated precision when SATAKE_PRECISION_BITS asks for it.
"""

from __future__ import annotations

import os
from fractions import Fraction

ENV_PRECISION = "SATAKE_PRECISION_BITS"
DOUBLE_BITS = 53


class NumericContext:
    """Complex arithmetic provider at a fixed significand size."""

    def __init__(self, bits: int = DOUBLE_BITS):
        if bits < 24:
            raise ValueError("precision below 24 bits is not supported")
        self.bits = bits
        if bits > DOUBLE_BITS:
            import mpmath

            self._mp = mpmath.mp.clone()
            self._mp.prec = bits
        else:
            self._mp = None

    # -- conversions ---------------------------------------------------------

    def scalar(self, value) -> complex:
        """Exact value (int/Fraction/complex) to a working-precision complex."""
        if self._mp is None:
            if isinstance(value, complex):
                return value
            if isinstance(value, Fraction):
                return complex(value.numerator / Fraction(value.denominator))
            return complex(value)
        mp = self._mp
        if isinstance(value, Fraction):
            return mp.mpc(mp.mpf(value.numerator) / mp.mpf(value.denominator))
        if isinstance(value, complex):
            return mp.mpc(value.real, value.imag)
        return mp.mpc(value)

    def to_builtin(self, z) -> complex:
        return complex(float(z.real), float(z.imag))

    # -- operations ----------------------------------------------------------

    def sqrt(self, z):
        if self._mp is None:
            import cmath

            return cmath.sqrt(z)
        return self._mp.sqrt(z)

    def abs(self, z) -> float:
        return float(abs(z))

    def eps(self) -> float:
        return 2.0 ** (1 - self.bits)


def context_from_env() -> NumericContext:
    raw = os.environ.get(ENV_PRECISION, "").strip()
    if not raw:
        return NumericContext()
    return NumericContext(int(raw))
