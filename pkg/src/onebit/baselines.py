"""Reference duel orderings and their closed-form biases.

* alternating  ``+1, -1, +1, -1, ...``            bias ``eps / (2 - eps)``
* four_periodic ``+1, -1, -1, +1`` repeated        bias ``eps^2 / (1 + (1-eps)^2)``
* thue_morse    ``(-1)^popcount(n)``               bias ``eps * prod_n (1 - (1-eps)^(2^n))``
* beta_expansion(eps): greedy digits of ``1/(2 eps)`` in base ``1/(1-eps)``;
  its bias at that one ``eps`` is zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mpf

from .numerics import EvalResult, PrecisionConfig, to_fraction, to_mpf, working_precision
from .quantizer import SignSequence

KINDS = ("alternating", "four_periodic", "thue_morse", "beta_expansion", "file")

_FOUR = (1, -1, -1, 1)


def thue_morse_bit(n: int) -> int:
    return -1 if bin(n).count("1") % 2 else 1


@dataclass
class Ordering:
    """A deterministic +/-1 ordering addressable by index."""

    kind: str
    _bit: Callable[[int], int] = field(repr=False)
    length: int | None = None
    epsilon: Fraction | None = None

    def bit(self, n: int) -> int:
        if self.length is not None and n >= self.length:
            raise IndexError(f"{self.kind} ordering has only {self.length} terms")
        return self._bit(n)

    def prefix(self, n: int) -> list[int]:
        return [self.bit(i) for i in range(n)]

    def __getitem__(self, n):
        return self.bit(n)

    def __len__(self):
        if self.length is None:
            raise TypeError(f"{self.kind} ordering is infinite")
        return self.length

    @classmethod
    def alternating(cls) -> "Ordering":
        return cls("alternating", lambda n: -1 if n % 2 else 1)

    @classmethod
    def four_periodic(cls) -> "Ordering":
        return cls("four_periodic", lambda n: _FOUR[n % 4])

    @classmethod
    def thue_morse(cls) -> "Ordering":
        return cls("thue_morse", thue_morse_bit)

    @classmethod
    def beta_expansion(cls, epsilon, n_steps: int) -> "Ordering":
        seq = beta_expansion_ordering(epsilon, n_steps)
        return cls("beta_expansion", seq.bits.__getitem__, len(seq), to_fraction(epsilon))

    @classmethod
    def from_sequence(cls, seq, kind: str = "file") -> "Ordering":
        bits = list(seq)
        return cls(kind, bits.__getitem__, len(bits))

    @classmethod
    def from_file(cls, path) -> "Ordering":
        from .formats import read_bitstream
        return cls.from_sequence(read_bitstream(path), "file")

    @classmethod
    def named(cls, kind: str) -> "Ordering":
        if kind in ("alternating", "four_periodic", "thue_morse"):
            return getattr(cls, kind)()
        raise ValueError(f"unsupported ordering kind {kind!r}")


def _check_eps(epsilon):
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")


def thue_morse_product(x, cfg: PrecisionConfig) -> EvalResult:
    """``prod_{n>=0} (1 - x^(2^n))`` for ``0 <= x < 1``.

    Stops once ``x^(2^K) < 2^-mantissa_bits``.  The omitted factors lie in
    ``[1 - t, 1]`` with ``t = sum_{n>=K} x^(2^n) <= x^(2^K) / (1 - x^(2^K))``,
    so the truncated product overestimates by at most ``P * t``.
    """
    bits = cfg.working_bits
    with working_precision(bits):
        x = to_mpf(x, bits)
        if not 0 <= x < 1:
            raise ValueError("thue_morse_product needs 0 <= x < 1")
        prod = mpf(1)
        p = x
        while p >= cfg.eps:
            prod *= 1 - p
            p = p * p
        t = p / (1 - p)
        # the partial product itself carries ~K roundings at working precision
        rounding = prod * mpmath.ldexp(mpf(1), -cfg.mantissa_bits)
        return EvalResult(prod, prod * t + rounding, bits)


def closed_form_bias(kind: str, epsilon, cfg: PrecisionConfig | None = None) -> EvalResult:
    cfg = cfg or PrecisionConfig()
    _check_eps(epsilon)
    bits = cfg.working_bits
    with working_precision(bits):
        e = to_mpf(to_fraction(epsilon), bits)
        if kind == "alternating":
            return EvalResult(e / (2 - e), mpf(0), bits)
        if kind == "four_periodic":
            return EvalResult(e ** 2 / (1 + (1 - e) ** 2), mpf(0), bits)
        if kind == "thue_morse":
            p = thue_morse_product(1 - e, cfg)
            return EvalResult(e * p.value, e * p.tail_bound, bits)
    raise ValueError(f"no closed-form bias for ordering kind {kind!r}")


def beta_expansion_ordering(epsilon, n_steps: int) -> SignSequence:
    """Greedy expansion of ``1/(2 eps)`` in powers of ``1 - eps``; digit 1 -> +1.

    Exact rational arithmetic.  The remainder before digit n stays in
    ``[0, (1-eps)^n / eps)``, which is what makes greedy work for
    ``eps <= 1/2``; the truncated bias is then at most ``(1-eps)^N``.
    At ``eps = 1/2`` the expansion is dyadic and not unique; greedy picks one.
    """
    eps = to_fraction(epsilon)
    if not 0 < eps <= Fraction(1, 2):
        raise ValueError(f"beta expansion ordering needs 0 < eps <= 1/2, got {epsilon}")
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    digits, _ = greedy_digits(eps, n_steps)
    return SignSequence([2 * d - 1 for d in digits], description=f"beta_expansion({epsilon})")


def greedy_digits(eps: Fraction, n_steps: int) -> tuple[list[int], list[Fraction]]:
    """Digits and the remainder before each digit (plus the final one)."""
    rho = 1 - eps
    r = 1 / (2 * eps)
    power = Fraction(1)
    digits, remainders = [], [r]
    for _ in range(n_steps):
        if r >= power:
            digits.append(1)
            r -= power
        else:
            digits.append(0)
        power *= rho
        remainders.append(r)
    return digits, remainders


@dataclass(frozen=True)
class SandwichReport:
    epsilon: Fraction
    n_eps: int
    upper: mpf
    product: EvalResult
    lower: mpf
    lower_tail: mpf
    holds: bool


def tm_sandwich_check(epsilon, cfg: PrecisionConfig | None = None) -> SandwichReport:
    """Check ``prod_{n<N}(2^n eps) >= prod_n (1-(1-eps)^(2^n)) >= eps^N prod_n (1-e^(-2^n))``
    with ``N`` the integer such that ``1 <= 2^N eps < 2``.

    Both infinite products are truncated; the comparison uses the side of
    each bracket that makes the check conservative.
    """
    cfg = cfg or PrecisionConfig()
    eps = to_fraction(epsilon)
    _check_eps(eps)
    n_eps = 0
    while (1 << n_eps) * eps < 1:
        n_eps += 1
    bits = cfg.working_bits
    with working_precision(bits):
        e = to_mpf(eps, bits)
        upper = mpf(1)
        for n in range(n_eps):
            upper *= mpmath.ldexp(e, n)
        product = thue_morse_product(to_mpf(1 - eps, bits), cfg)
        const = thue_morse_product(mpmath.exp(-1), cfg)
        lower = e ** n_eps * const.value
        lower_tail = e ** n_eps * const.tail_bound
        holds = (product.value + product.tail_bound <= upper
                 and product.value - product.tail_bound >= lower)
    return SandwichReport(eps, n_eps, upper, product, lower, lower_tail, bool(holds))
