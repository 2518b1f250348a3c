"""High-precision arithmetic helpers shared by the rest of the package.

Everything here is a thin layer over :mod:`mpmath`.  Precision is always set
through :func:`working_precision` so callers never depend on the global
``mp.prec`` in effect at call time.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator, Union

import mpmath
from mpmath import mp, mpf, mpc

Real = Union[int, float, Fraction, mpf]

DEFAULT_MANTISSA_BITS = 128
PRECISION_ENV_VAR = "ONEBIT_PRECISION"


class PrecisionExhausted(RuntimeError):
    """Raised when escalation runs past ``max_escalations``."""


def _default_bits() -> int:
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None:
        return DEFAULT_MANTISSA_BITS
    return int(raw)


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision plus escalation policy.

    ``mantissa_bits`` is the precision results are reported at; internal
    evaluation adds ``guard_bits`` on top.  :meth:`escalated` doubles the
    mantissa, at most ``max_escalations`` times.
    """

    mantissa_bits: int = DEFAULT_MANTISSA_BITS
    guard_bits: int = 32
    max_escalations: int = 4
    escalation: int = 0

    def __post_init__(self):
        if self.mantissa_bits < 64:
            raise ValueError(f"mantissa_bits must be >= 64, got {self.mantissa_bits}")
        if self.guard_bits < 1:
            raise ValueError("guard_bits must be positive")
        if self.max_escalations < 0:
            raise ValueError("max_escalations must be non-negative")

    @classmethod
    def from_env(cls, **kwargs) -> "PrecisionConfig":
        kwargs.setdefault("mantissa_bits", _default_bits())
        return cls(**kwargs)

    @property
    def working_bits(self) -> int:
        return self.mantissa_bits + self.guard_bits

    @property
    def eps(self) -> mpf:
        """Unit roundoff at the reported precision, ``2**-mantissa_bits``."""
        return mpmath.ldexp(mpf(1), -self.mantissa_bits)

    def escalated(self) -> "PrecisionConfig":
        if self.escalation >= self.max_escalations:
            raise PrecisionExhausted(
                f"precision escalation exhausted after {self.max_escalations} "
                f"doublings (mantissa_bits={self.mantissa_bits})"
            )
        return replace(self, mantissa_bits=2 * self.mantissa_bits,
                       escalation=self.escalation + 1)


@dataclass(frozen=True)
class EvalResult:
    """A truncated-series value together with a bound on what was dropped.

    The true quantity lies within ``tail_bound`` of ``value`` (in absolute
    value, real or complex).
    """

    value: Union[mpf, mpc]
    tail_bound: mpf
    precision_used: int

    def __post_init__(self):
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be non-negative")

    @property
    def lower(self) -> mpf:
        return self.value - self.tail_bound

    @property
    def upper(self) -> mpf:
        return self.value + self.tail_bound

    def brackets(self, target) -> bool:
        """True if ``target`` lies within ``tail_bound`` of ``value``."""
        with working_precision(self.precision_used + 16):
            return abs(mpmath.mpmathify(target) - self.value) <= self.tail_bound

    def __float__(self) -> float:
        return float(self.value)


@contextmanager
def working_precision(bits: int) -> Iterator[None]:
    with mp.workprec(bits):
        yield


def to_mpf(x, bits: int) -> mpf:
    """Convert ints, floats, Fractions, strings and mpf to an mpf at ``bits``."""
    with working_precision(bits):
        if isinstance(x, Fraction):
            return mpf(x.numerator) / x.denominator
        return mpf(x)


def to_fraction(x) -> Fraction:
    """Exact rational value of a binary float, int, Fraction or mpf."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, mpf):
        if not mpmath.isfinite(x):
            raise ValueError(f"cannot convert {x} to an exact rational")
        sign, man, exp, _ = x._mpf_
        man = -int(man) if sign else int(man)
        if exp >= 0:
            return Fraction(int(man) << exp)
        return Fraction(int(man), 1 << -exp)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def to_fixed(x, frac_bits: int) -> int:
    """Round ``x`` to the nearest multiple of ``2**-frac_bits``; return the scaled int."""
    return round(to_fraction(x) * (1 << frac_bits))


def from_fixed(n: int, frac_bits: int) -> mpf:
    """Exact mpf value of ``n * 2**-frac_bits``."""
    with working_precision(max(abs(n).bit_length(), 1) + 1):
        return mpmath.ldexp(mpf(n), -frac_bits)


def c_sigma(sigma: int, bits: int) -> mpf:
    """``sinh(pi/sqrt(sigma)) / (pi/sqrt(sigma))``."""
    with working_precision(bits):
        x = mp.pi / mpmath.sqrt(sigma)
        return mpmath.sinh(x) / x


def cosh_pi_over_sqrt(sigma: int, bits: int) -> mpf:
    with working_precision(bits):
        return mpmath.cosh(mp.pi / mpmath.sqrt(sigma))


_CONSTANTS = {
    "pi": None,
    "c_sigma": c_sigma,
    "cosh_pi_over_sqrt": cosh_pi_over_sqrt,
}


def eval_constant(name: str, cfg: PrecisionConfig | None = None,
                  sigma: int | None = None) -> mpf:
    """Evaluate one of the named constants at ``cfg.working_bits``.

    >>> float(eval_constant("c_sigma", sigma=6))  # doctest: +ELLIPSIS
    1.29760...
    """
    cfg = cfg or PrecisionConfig()
    if name not in _CONSTANTS:
        raise KeyError(f"unknown constant {name!r}; expected one of {sorted(_CONSTANTS)}")
    if name == "pi":
        with working_precision(cfg.working_bits):
            return +mp.pi
    if sigma is None or int(sigma) != sigma or sigma < 1:
        raise ValueError(f"{name} needs an integer sigma >= 1, got {sigma!r}")
    return _CONSTANTS[name](int(sigma), cfg.working_bits)


def nstr(x, digits: int = 40) -> str:
    """Format with ``digits`` significant digits, no trailing-zero stripping."""
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-4, max_fixed=5)
