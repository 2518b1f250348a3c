"""One-bit quantization of a bounded coefficient stream.

Recursion, for n = 0, 1, 2, ...::

    w_n = sum_{k=1}^{n} h_k v_{n-k} + a_n
    q_n = sign(w_n)          (sign(0) = +1)
    v_n = w_n - q_n

Residuals ``v_n`` are kept as fixed-point integers with ``mantissa_bits``
fractional bits.  Every quantity in the recursion is bounded by 2 in absolute
value, so fixed point loses nothing against floating point, and the inner
sum is accumulated exactly with a single rounding per step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath

from .filters import FilterSpec, tap_index
from .numerics import (PrecisionConfig, PrecisionExhausted, from_fixed,
                       to_fixed, to_fraction, working_precision)

logger = logging.getLogger(__name__)


class CoefficientOutOfRange(ValueError):
    pass


class SignAmbiguous(ArithmeticError):
    """``|w_n|`` stayed below the reliability threshold at every precision tried."""

    def __init__(self, n, bits):
        self.n = n
        self.bits = bits
        super().__init__(f"sign of w_{n} unresolved at {bits} bits")


class InvariantViolation(AssertionError):
    """A residual left [-1, 1] beyond rounding slack. Indicates a bug."""


class CheckpointMismatch(ValueError):
    pass


class _Ambiguous(Exception):
    def __init__(self, n):
        self.n = n


class CoefficientStream:
    """Index-addressable coefficients ``a_n`` with declared bound ``mu``.

    ``source`` is either a sequence (finite; indexing past its end is an
    error) or a callable ``n -> a_n``.  Values may be ints, floats, Fractions,
    decimal strings or mpf; they are rounded to working precision on use.
    """

    def __init__(self, source: Sequence | Callable[[int], object], mu=0.0,
                 description: str | None = None):
        self.mu = mu
        if callable(source):
            self._get = source
            self.length = None
        else:
            seq = list(source)
            self._get = seq.__getitem__
            self.length = len(seq)
        self.description = description or ("callable" if self.length is None
                                           else f"sequence[{self.length}]")

    @classmethod
    def zeros(cls, mu=0.0) -> "CoefficientStream":
        return cls(lambda n: 0, mu, description="zeros")

    @classmethod
    def constant(cls, value, mu=None) -> "CoefficientStream":
        mu = abs(value) if mu is None else mu
        return cls(lambda n: value, mu, description=f"constant({value})")

    def __getitem__(self, n: int):
        if self.length is not None and n >= self.length:
            raise IndexError(f"coefficient stream has only {self.length} terms")
        return self._get(n)

    def fixed(self, n: int, frac_bits: int) -> int:
        """``a_n`` rounded to fixed point, checked against the declared bound."""
        a = to_fixed(self[n], frac_bits)
        if abs(a) > to_fixed(self.mu, frac_bits):
            raise CoefficientOutOfRange(f"|a_{n}| = |{self[n]}| exceeds mu = {self.mu}")
        return a


@dataclass
class QuantizerState:
    """Everything needed to continue a run: residual history and emitted bits.

    ``v_fixed[k]`` is ``v_k * 2**precision`` as an exact integer.
    """

    sigma: int
    mu: float
    precision: int
    v_fixed: list[int] = field(default_factory=list)
    bits: list[int] = field(default_factory=list)
    max_abs_w: int = 0
    max_abs_v: int = 0

    @property
    def n(self) -> int:
        return len(self.v_fixed)

    @property
    def v_history(self) -> list:
        return [from_fixed(v, self.precision) for v in self.v_fixed]

    def residual(self, k: int):
        return from_fixed(self.v_fixed[k], self.precision)

    def copy(self) -> "QuantizerState":
        return QuantizerState(self.sigma, self.mu, self.precision,
                              list(self.v_fixed), list(self.bits),
                              self.max_abs_w, self.max_abs_v)


@dataclass
class SignSequence:
    """A +/-1 sequence plus how it was produced."""

    bits: list[int]
    sigma: int | None = None
    mu: float | None = None
    precision: int | None = None
    description: str = ""
    state: QuantizerState | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for b in self.bits:
            if b != 1 and b != -1:
                raise ValueError(f"sign sequences hold only +1/-1, got {b!r}")

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, n):
        return self.bits[n]

    def __iter__(self):
        return iter(self.bits)

    def to01(self, limit: int | None = None) -> str:
        """Render with +1 -> '1', -1 -> '0'."""
        bits = self.bits if limit is None else self.bits[:limit]
        return "".join("1" if b > 0 else "0" for b in bits)

    @classmethod
    def from01(cls, text: str, **meta) -> "SignSequence":
        return cls([1 if ch == "1" else -1 for ch in text if ch in "01"], **meta)


def _fixed_taps(spec: FilterSpec, n_max: int, frac_bits: int) -> list[tuple[int, int]]:
    bits = frac_bits + spec.cfg.guard_bits + 8
    with working_precision(bits):
        x = mpmath.pi / mpmath.sqrt(spec.sigma)
        c = mpmath.sinh(x) / x
        out = []
        m = 0
        while tap_index(spec.sigma, m) <= max(n_max, 1):
            k = tap_index(spec.sigma, m)
            h = c if m == 0 else 2 * (-1 if m % 2 else 1) * c / k
            out.append((k, to_fixed(h, frac_bits)))
            m += 1
    return out


_AMPLIFICATION: dict[tuple[int, int], list[int]] = {}


def _error_gain(spec: FilterSpec, n_total: int, P: int) -> list[int]:
    """Running sums ``S_n = sum_{j<=n} |g_j|`` (scaled by ``2**P``), where ``g`` are
    the power-series coefficients of ``1/H``.

    A rounding error ``r_j`` made at step j reaches ``v_n`` as ``g_{n-j} r_j``
    (while the emitted signs agree), so ``S_n`` times the per-step rounding
    bounds the accumulated error in ``w_n``.  ``H`` vanishes at z = 1, and
    ``S_n`` grows roughly like ``2**(1.8*sqrt(n))`` for sigma = 6.
    """
    key = (spec.sigma, P)
    sums = _AMPLIFICATION.setdefault(key, [])
    if len(sums) >= n_total:
        return sums
    taps = _fixed_taps(spec, n_total, P)
    g = _AMPLIFICATION.setdefault(key + (0,), [])  # the g_n themselves
    half = 1 << (P - 1)
    for n in range(len(g), n_total):
        if n == 0:
            gn = 1 << P
        else:
            acc = sum([h * g[n - k] for k, h in taps if k <= n])
            gn = (acc + half) >> P
        g.append(gn)
        sums.append((sums[-1] if sums else 0) + abs(gn))
    return sums


def _run(spec: FilterSpec, stream: CoefficientStream, state: QuantizerState,
         n_total: int, cfg: PrecisionConfig) -> QuantizerState:
    P = state.precision
    one = 1 << P
    half = 1 << (P - 1)
    v_limit = one + (1 << 8)          # 1 + 2**(8 - P)
    w_limit = 2 * one + (1 << 8)
    taps = _fixed_taps(spec, n_total, P)
    ks = [k for k, _ in taps]
    hs = [h for _, h in taps]
    gain = _error_gain(spec, n_total, P)
    v = state.v_fixed
    q = state.bits
    active = sum(1 for k in ks if k <= state.n)
    for n in range(state.n, n_total):
        while active < len(ks) and ks[active] <= n:
            active += 1
        acc = sum([h * v[n - k] for k, h in zip(ks[:active], hs)])
        # round the double-width accumulator back to P fractional bits
        w = ((acc + half) >> P) + stream.fixed(n, P)
        if n == 0:
            # w_0 = a_0, whose sign is known exactly
            qn = 1 if to_fraction(stream[0]) >= 0 else -1
        else:
            # per-step rounding <= (active + 2) * 2**-P, amplified by gain[n];
            # demand a further 2**guard_bits of headroom
            threshold = ((active + 2) * gain[n]) >> (P - cfg.guard_bits)
            if abs(w) <= max(threshold, 1 << cfg.guard_bits):
                raise _Ambiguous(n)
            qn = 1 if w > 0 else -1
        vn = w - qn * one
        aw, av = abs(w), abs(vn)
        if av > v_limit or aw > w_limit:
            raise InvariantViolation(
                f"step {n}: |w|={float(from_fixed(w, P))}, |v|={float(from_fixed(vn, P))}")
        if aw > state.max_abs_w:
            state.max_abs_w = aw
        if av > state.max_abs_v:
            state.max_abs_v = av
        q.append(qn)
        v.append(vn)
    return state


def _check_inputs(spec: FilterSpec, stream: CoefficientStream):
    if to_fraction(stream.mu) > to_fraction(spec.mu):
        raise CoefficientOutOfRange(
            f"stream bound mu={stream.mu} exceeds the filter's mu={spec.mu}")


def _sequence(spec, stream, state) -> SignSequence:
    return SignSequence(list(state.bits), sigma=spec.sigma, mu=spec.mu,
                        precision=state.precision,
                        description=stream.description, state=state)


def quantize(spec: FilterSpec, stream: CoefficientStream | None, n_steps: int,
             cfg: PrecisionConfig | None = None) -> SignSequence:
    """Quantize the first ``n_steps`` coefficients of ``stream`` to +/-1.

    When a pre-quantization value falls inside the sign-reliability window
    ``|w| < 2**-(mantissa_bits - guard_bits)`` the whole run is repeated at
    doubled precision, up to ``cfg.max_escalations`` times.
    """
    cfg = cfg or spec.cfg
    stream = stream if stream is not None else CoefficientStream.zeros()
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    _check_inputs(spec, stream)
    state = QuantizerState(spec.sigma, spec.mu, cfg.mantissa_bits)
    return _sequence(spec, stream, _escalating(spec, stream, state, n_steps, cfg))


def _escalating(spec, stream, state, n_total, cfg) -> QuantizerState:
    while True:
        try:
            return _run(spec, stream, state, n_total, cfg)
        except _Ambiguous as amb:
            try:
                cfg = cfg.escalated()
            except PrecisionExhausted:
                raise SignAmbiguous(amb.n, cfg.mantissa_bits) from None
            logger.info("sign of w_%d unreliable; restarting at %d bits",
                        amb.n, cfg.mantissa_bits)
            # lower-precision residuals cannot be refined, so start over
            state = QuantizerState(spec.sigma, spec.mu, cfg.mantissa_bits)


def resume(state: QuantizerState, spec: FilterSpec, stream: CoefficientStream | None,
           extra_steps: int, cfg: PrecisionConfig | None = None) -> SignSequence:
    """Continue a run from ``state``; the result equals an uninterrupted run."""
    cfg = cfg or spec.cfg
    stream = stream if stream is not None else CoefficientStream.zeros()
    if state.sigma != spec.sigma or to_fraction(state.mu) != to_fraction(spec.mu):
        raise CheckpointMismatch(
            f"checkpoint is for sigma={state.sigma}, mu={state.mu}; "
            f"got sigma={spec.sigma}, mu={spec.mu}")
    if state.n and state.precision < cfg.mantissa_bits:
        raise CheckpointMismatch(
            f"checkpoint precision {state.precision} below requested {cfg.mantissa_bits}")
    if extra_steps < 0:
        raise ValueError("extra_steps must be non-negative")
    _check_inputs(spec, stream)
    if state.n == 0:
        state = QuantizerState(spec.sigma, spec.mu, cfg.mantissa_bits)
    else:
        state = state.copy()
        # continue at the checkpoint's own precision
        cfg = replace(cfg, mantissa_bits=state.precision)
    return _sequence(spec, stream,
                     _escalating(spec, stream, state, state.n + extra_steps, cfg))


def reconstruction_defect(spec: FilterSpec, stream: CoefficientStream,
                          seq: SignSequence) -> Fraction:
    """Largest ``|a_n - q_n - v_n + sum h_k v_{n-k}|`` over the run, exactly.

    Uses the same rounded fixed-point taps as the run, so the defect measures
    only the per-step rounding of ``w_n`` and coefficient rounding.
    """
    st = seq.state
    P = st.precision
    taps = _fixed_taps(spec, st.n, P)
    worst = Fraction(0)
    scale = Fraction(1, 1 << P)
    for n in range(st.n):
        conv = sum(h * st.v_fixed[n - k] for k, h in taps if k <= n) * scale * scale
        lhs = to_fraction(stream[n]) - st.bits[n]
        rhs = st.v_fixed[n] * scale - conv
        worst = max(worst, abs(lhs - rhs))
    return worst
