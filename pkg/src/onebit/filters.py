"""The lacunary filter ``h`` whose generating function is

    H(z) = 1 - c z - 2c * sum_{m>=1} (-1)^m z^(sigma m^2 + 1) / (sigma m^2 + 1),

with ``c = sinh(pi/sqrt(sigma)) / (pi/sqrt(sigma))`` and ``H(z) = 1 - sum h_k z^k``.
Its l1 norm has the closed form ``cosh(pi/sqrt(sigma))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import mpmath
from mpmath import mp, mpf

from .numerics import (EvalResult, PrecisionConfig, c_sigma,
                       cosh_pi_over_sqrt, to_fraction, to_mpf, working_precision)


class InadmissiblePair(ValueError):
    """``mu + cosh(pi/sqrt(sigma)) > 2``: the residuals would not stay bounded."""

    def __init__(self, sigma, mu, min_sigma):
        self.sigma = sigma
        self.mu = mu
        self.min_sigma = min_sigma
        super().__init__(
            f"(sigma={sigma}, mu={mu}) is not admissible; "
            f"minimal admissible sigma = {min_sigma}"
        )


def tap_index(sigma: int, m: int) -> int:
    """Index of the m-th nonzero tap (m = 0 gives k = 1)."""
    return sigma * m * m + 1


def tap_order(sigma: int, k: int) -> int | None:
    """Return m if ``k == sigma*m*m + 1``, else None."""
    if k < 1:
        raise ValueError("tap indices start at 1")
    r, rem = divmod(k - 1, sigma)
    if rem:
        return None
    m = math.isqrt(r)
    return m if m * m == r else None


def count_nonzero_taps(sigma: int, K: int) -> int:
    """Number of nonzero taps among ``h_1..h_K``."""
    if K < 1:
        return 0
    return 1 + math.isqrt((K - 1) // sigma)


@dataclass(frozen=True)
class FilterSpec:
    sigma: int
    mu: float
    c_sigma: mpf
    cfg: PrecisionConfig = field(default_factory=PrecisionConfig)

    def tap(self, k: int) -> mpf:
        """Coefficient ``h_k`` (zero off the lacunary support)."""
        m = tap_order(self.sigma, k)
        if m is None:
            return mpf(0)
        return self._tap_m(m)

    def _tap_m(self, m: int) -> mpf:
        if m == 0:
            return self.c_sigma
        with working_precision(self.cfg.working_bits):
            sign = -1 if m % 2 else 1
            return 2 * sign * self.c_sigma / tap_index(self.sigma, m)

    def nonzero_taps(self, K: int) -> Iterator[tuple[int, mpf]]:
        """Yield ``(k, h_k)`` for the nonzero taps with ``k <= K``."""
        m = 0
        while tap_index(self.sigma, m) <= K:
            yield tap_index(self.sigma, m), self._tap_m(m)
            m += 1

    def l1_closed_form(self) -> mpf:
        return cosh_pi_over_sqrt(self.sigma, self.cfg.working_bits)


@lru_cache(maxsize=None)
def _threshold(mu_frac, bits: int) -> mpf:
    with working_precision(bits):
        mu = to_mpf(mu_frac, bits)
        base = 2 - mu + mpmath.sqrt((1 - mu) * (3 - mu))
        return mp.pi ** 2 / mpmath.log(base) ** 2


def sigma_threshold(mu, bits: int = 160) -> mpf:
    """``pi^2 / log^2(2 - mu + sqrt((1-mu)(3-mu)))``; admissible sigmas exceed it."""
    _check_mu(mu)
    return _threshold(to_fraction(mu), bits)


def min_admissible_sigma(mu) -> int:
    """Smallest integer sigma strictly above :func:`sigma_threshold`."""
    t = sigma_threshold(mu)
    return int(mpmath.floor(t)) + 1


def _check_mu(mu):
    if not 0 <= mu < 1:
        raise ValueError(f"mu must lie in [0, 1), got {mu}")


def is_admissible(sigma: int, mu, cfg: PrecisionConfig | None = None) -> bool:
    cfg = cfg or PrecisionConfig()
    with working_precision(cfg.working_bits):
        total = to_mpf(to_fraction(mu), cfg.working_bits) + cosh_pi_over_sqrt(sigma, cfg.working_bits)
        return total <= 2


def build_filter(sigma: int, mu=0.0, cfg: PrecisionConfig | None = None) -> FilterSpec:
    """Construct the filter for ``sigma`` after checking ``mu``-admissibility.

    Admissibility is decided from the closed-form l1 norm, not a truncated sum.
    """
    cfg = cfg or PrecisionConfig()
    if int(sigma) != sigma or sigma < 1:
        raise ValueError(f"sigma must be a positive integer, got {sigma!r}")
    sigma = int(sigma)
    _check_mu(mu)
    if not is_admissible(sigma, mu, cfg):
        raise InadmissiblePair(sigma, mu, min_admissible_sigma(mu))
    return FilterSpec(sigma, mu, c_sigma(sigma, cfg.working_bits), cfg)


def _hurwitz_tail(sigma: int, m0: int, bits: int) -> tuple[mpf, mpf]:
    """Estimate ``S = sum_{m>m0} 1/(sigma m^2 + 1)`` and a bound on its error.

    Expands ``1/(sigma m^2 + 1) = sum_j (-1)^(j-1) sigma^-j m^-2j``; summing over
    m gives an alternating series in Hurwitz zeta values with decreasing terms,
    so the first omitted term bounds the error.
    """
    a = m0 + 1
    ratio_bound = mpf(1) / (sigma * a * a)
    total = mpf(0)
    j = 1
    while True:
        term = mpmath.zeta(2 * j, a) / mpf(sigma) ** j
        nxt = term * ratio_bound
        total += term if j % 2 else -term
        if nxt < mpmath.ldexp(total, -bits):
            return total, nxt
        j += 1


def l1_norm(spec: FilterSpec, m0: int = 1000, cfg: PrecisionConfig | None = None,
            tail: str = "integral") -> EvalResult:
    """Partial l1 norm of the taps up to ``m = m0`` with a rigorous tail bound.

    ``tail="integral"`` reports the bare partial sum and bounds the omitted
    mass by ``2c/(sigma*m0)``.  ``tail="zeta"`` adds an alternating Hurwitz-zeta
    estimate of the omitted mass, leaving only its (much smaller) remainder in
    ``tail_bound``.
    """
    cfg = cfg or spec.cfg
    if m0 < 1:
        raise ValueError("m0 must be >= 1")
    bits = cfg.working_bits
    with working_precision(bits):
        s = spec.sigma
        inner = mpmath.fsum(mpf(1) / (s * m * m + 1) for m in range(1, m0 + 1))
        c = spec.c_sigma
        if tail == "integral":
            value = c * (1 + 2 * inner)
            bound = 2 * c / (s * m0)
        elif tail == "zeta":
            est, err = _hurwitz_tail(s, m0, bits)
            value = c * (1 + 2 * (inner + est))
            bound = 2 * c * err + mpmath.ldexp(value, -cfg.mantissa_bits) * (m0 + 8)
        else:
            raise ValueError(f"unknown tail mode {tail!r}")
    return EvalResult(value, bound, bits)
