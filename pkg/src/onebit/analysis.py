"""Evaluators: duel bias, approximation error, theta-4, the filter's
generating function, the decay envelope and the approach region near z = 1.

Every truncated series comes back as an :class:`EvalResult` carrying a
bound on the omitted tail.
"""

from __future__ import annotations

from typing import Sequence

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

from .numerics import (EvalResult, PrecisionConfig, c_sigma, to_fraction,
                       to_mpf, working_precision)
from .quantizer import CoefficientStream, SignSequence

MAX_THETA_TERMS = 1_000_000
H_BOUNDARY_TERMS = 10_000


def _bits_of(q, n_terms: int) -> Sequence[int]:
    if hasattr(q, "prefix"):
        return q.prefix(n_terms)
    bits = list(q[:n_terms]) if hasattr(q, "__getitem__") else list(q)
    if len(bits) < n_terms:
        raise ValueError(f"ordering has {len(bits)} terms, {n_terms} requested")
    return bits


def _point(z, bits: int):
    z = mpmath.mpmathify(z)
    if isinstance(z, mpc) and z.imag == 0:
        z = z.real
    return z


def bias(q, epsilon, n_terms: int, cfg: PrecisionConfig | None = None) -> EvalResult:
    """``eps * sum_{n<N} q_n (1-eps)^n``; the rest of the series is at most ``(1-eps)^N``."""
    cfg = cfg or PrecisionConfig()
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    bits = _bits_of(q, n_terms)
    with working_precision(cfg.working_bits):
        e = to_mpf(to_fraction(epsilon), cfg.working_bits)
        rho = 1 - e
        # Horner from the far end keeps a single running product
        acc = mpf(0)
        for b in reversed(bits):
            acc = acc * rho + b
        return EvalResult(e * acc, rho ** n_terms, cfg.working_bits)


def _horner(coeffs, z):
    acc = mpf(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def series_error(a: CoefficientStream, q, z, n_terms: int,
                 cfg: PrecisionConfig | None = None) -> EvalResult:
    """``sum_{n<N} (a_n - q_n) z^n`` with tail ``2|z|^N / (1 - |z|)``."""
    cfg = cfg or PrecisionConfig()
    bits = cfg.working_bits
    with working_precision(bits):
        z = _point(z, bits)
        r = abs(z)
        if r >= 1:
            raise ValueError(f"|z| must be < 1, got |z| = {mpmath.nstr(r, 8)}")
        qs = _bits_of(q, n_terms)
        coeffs = [to_mpf(to_fraction(a[n]), bits) - qs[n] for n in range(n_terms)]
        return EvalResult(_horner(coeffs, z), 2 * r ** n_terms / (1 - r), bits)


def residual_series(seq: SignSequence, z, n_terms: int | None = None,
                    cfg: PrecisionConfig | None = None) -> EvalResult:
    """``V(z) = sum v_n z^n`` from a quantizer run; ``|v_n| <= 1`` gives the tail."""
    cfg = cfg or PrecisionConfig()
    st = seq.state
    if st is None:
        raise ValueError("sequence carries no quantizer state")
    n_terms = st.n if n_terms is None else n_terms
    if n_terms > st.n:
        raise ValueError(f"only {st.n} residuals available")
    bits = cfg.working_bits
    with working_precision(bits):
        z = _point(z, bits)
        r = abs(z)
        if r >= 1:
            raise ValueError("|z| must be < 1")
        vs = [st.residual(k) for k in range(n_terms)]
        return EvalResult(_horner(vs, z), r ** n_terms / (1 - r), bits)


# --- theta-4 -----------------------------------------------------------------

def theta4_direct(z_arg, cfg: PrecisionConfig | None = None,
                  n_terms: int | None = None) -> EvalResult:
    """``1 + 2 sum_{n>=1} (-1)^n z^(n^2)``.

    After N terms the omitted part is at most ``2|z|^((N+1)^2) / (1 - |z|^(2N+3))``.
    """
    cfg = cfg or PrecisionConfig()
    bits = cfg.working_bits
    with working_precision(bits):
        z = _point(z_arg, bits)
        r = abs(z)
        if r >= 1:
            raise ValueError("theta4 needs |z| < 1")
        target = mpmath.ldexp(mpf(1), -bits)
        total = mpf(1)
        limit = n_terms if n_terms is not None else MAX_THETA_TERMS
        n = 0
        tail = 2 * r / (1 - r ** 3) if r else mpf(0)
        while n < limit:
            if n_terms is None and tail <= target:
                break
            n += 1
            term = z ** (n * n)
            total += -2 * term if n % 2 else 2 * term
            rn = r ** ((n + 1) ** 2)
            tail = 2 * rn / (1 - r ** (2 * n + 3))
        return EvalResult(total, tail, bits)


def theta4_poisson(lam, cfg: PrecisionConfig | None = None,
                   n_terms: int | None = None) -> EvalResult:
    """``theta4(0, e^-lam)`` via its Poisson-transformed series

        sqrt(pi/lam) * sum_n exp(-pi^2 (n - 1/2)^2 / lam),   Re(lam) > 0,

    using the principal square root.  The n and 1 - n terms coincide, so only
    n >= 1 is summed and doubled.
    """
    cfg = cfg or PrecisionConfig()
    bits = cfg.working_bits
    with working_precision(bits):
        lam = _point(lam, bits)
        if mpmath.re(lam) <= 0:
            raise ValueError("poisson form needs Re(lambda) > 0")
        pref = mpmath.sqrt(mp.pi / lam)
        x = mpmath.exp(-mp.pi ** 2 * mpmath.re(1 / lam))
        target = mpmath.ldexp(mpf(1), -bits)
        s = mpf(0)
        limit = n_terms if n_terms is not None else MAX_THETA_TERMS
        n = 0
        tail = 2 * abs(pref) * x ** mpf(0.25) / (1 - x ** 2)
        while n < limit:
            # relative stopping rule: near z = 1 the whole value is tiny
            if n_terms is None and n and tail <= target * abs(2 * pref * s):
                break
            n += 1
            s += mpmath.exp(-mp.pi ** 2 * (n - mpf(0.5)) ** 2 / lam)
            tail = 2 * abs(pref) * x ** ((n + mpf(0.5)) ** 2) / (1 - x ** (2 * n + 2))
        return EvalResult(2 * pref * s, tail, bits)


def theta4(z_arg, cfg: PrecisionConfig | None = None, method: str = "auto") -> EvalResult:
    """Jacobi ``theta_4(0, z_arg) = sum_n (-1)^n z_arg^(n^2)`` for ``|z_arg| < 1``.

    ``method="auto"`` writes ``z_arg = e^-lam`` (principal log, so
    ``-pi < Im(lam) <= pi``) and picks whichever series has the smaller
    Gaussian ratio: direct when ``Re(lam) >= pi^2 Re(1/lam)``.
    """
    cfg = cfg or PrecisionConfig()
    with working_precision(cfg.working_bits):
        z = _point(z_arg, cfg.working_bits)
        if abs(z) >= 1:
            raise ValueError("theta4 needs |z| < 1")
        if method == "direct" or (method == "auto" and z == 0):
            return theta4_direct(z, cfg)
        lam = -mpmath.log(z)
        if method == "poisson":
            return theta4_poisson(lam, cfg)
        if method != "auto":
            raise ValueError(f"unknown method {method!r}")
        if mpmath.re(lam) >= mp.pi ** 2 * mpmath.re(1 / lam):
            return theta4_direct(z, cfg)
        return theta4_poisson(lam, cfg)


# --- generating function H_sigma -------------------------------------------

def H_sigma(z, sigma: int, cfg: PrecisionConfig | None = None,
            n0: int | None = None) -> EvalResult:
    """``1 - c z - 2c sum_{n=1}^{n0} (-1)^n z^(sigma n^2 + 1) / (sigma n^2 + 1)``.

    Valid on the closed unit disc.  The tail is at most ``2c/(sigma n0)``; for
    ``|z| < 1`` a geometric bound is also available and ``n0`` may be left
    to be chosen automatically.
    """
    cfg = cfg or PrecisionConfig()
    bits = cfg.working_bits
    c = c_sigma(sigma, bits)
    with working_precision(bits):
        z = _point(z, bits)
        r = abs(z)
        if r > 1:
            raise ValueError("H_sigma needs |z| <= 1")
        if n0 is None and r == 1:
            n0 = H_BOUNDARY_TERMS
        target = mpmath.ldexp(mpf(1), -bits)

        def tail_after(n):
            k = sigma * (n + 1) ** 2 + 1
            bound = 2 * c / (sigma * n) if n else mpf("inf")
            if r < 1:
                geo = 2 * c * r ** k / (k * (1 - r ** (sigma * (2 * n + 3))))
                bound = min(bound, geo)
            return bound

        s = mpf(0)
        n = 0
        tail = tail_after(0)
        while (n < n0) if n0 is not None else (tail > target):
            n += 1
            k = sigma * n * n + 1
            term = z ** k / k
            s += -term if n % 2 else term
            tail = tail_after(n)
        return EvalResult(1 - c * z - 2 * c * s, tail, bits)


def _gauss_legendre(f, a, b, degree: int, panels: int):
    x, w = np.polynomial.legendre.leggauss(degree)
    h = (b - a) / panels
    total = 0
    for p in range(panels):
        left = a + p * h
        for xi, wi in zip(x, w):
            total += wi * f(left + h * (1 + mpf(xi)) / 2)
    return total * h / 2


def H_sigma_integral(z, sigma: int, cfg: PrecisionConfig | None = None,
                     tol: float = 1e-12, degree: int = 20, max_panels: int = 1 << 12):
    """``c * integral_z^1 theta_4(0, s^sigma) ds`` along the segment ``[z, 1]``.

    Composite Gauss-Legendre with the panel count doubled until two successive
    estimates agree to ``tol``.  Meant as an independent check on
    :func:`H_sigma`, not as a way to evaluate it.
    """
    cfg = cfg or PrecisionConfig()
    bits = cfg.working_bits
    c = c_sigma(sigma, bits)
    with working_precision(bits):
        z = _point(z, bits)

        def integrand(t):
            # s = z + t (1 - z) for t in [0, 1)
            s = z + t * (1 - z)
            return theta4(s ** sigma, cfg).value

        panels = 1
        prev = _gauss_legendre(integrand, mpf(0), mpf(1), degree, panels)
        while True:
            panels *= 2
            cur = _gauss_legendre(integrand, mpf(0), mpf(1), degree, panels)
            if abs(cur - prev) < tol or panels >= max_panels:
                break
            prev = cur
        return c * (1 - z) * cur, abs(c * (1 - z)) * abs(cur - prev)


# --- envelope and region ------------------------------------------------------

def envelope(point, sigma: int = 6, M=1, bits: int = 160) -> mpf:
    """Decay profile ``sqrt(d) * exp(-pi^2 / (4 sigma M d))``.

    For a real ``point`` in (0, 1) it is read as ``eps`` and ``d = eps``; for a
    complex point z, ``d = |1 - z|``.  Only the exponent is meaningful; the
    multiplicative constant is left to calibration.
    """
    with working_precision(bits):
        if isinstance(point, complex) or isinstance(point, mpc):
            z = mpmath.mpmathify(point)
            d = abs(1 - z)
            if d == 0:
                raise ValueError("envelope is undefined at z = 1")
        else:
            d = to_mpf(to_fraction(point), bits)
            if not 0 < d < 1:
                raise ValueError(f"epsilon must lie in (0, 1), got {point}")
        return mpmath.sqrt(d) * mpmath.exp(-mp.pi ** 2 / (4 * sigma * M * d))


def terms_for_envelope(epsilon, sigma: int = 6, factor=1e-3) -> int:
    """Smallest N with ``(1 - eps)^N < factor * envelope(eps)``."""
    with working_precision(160):
        e = to_mpf(to_fraction(epsilon), 160)
        target = mpmath.log(mpmath.mpf(factor) * envelope(epsilon, sigma))
        n = int(mpmath.floor(target / mpmath.log(1 - e))) + 1
        while (1 - e) ** n >= factor * envelope(epsilon, sigma):
            n += 1
        return n


def envelope_exponent(sigma: int = 6, M=1) -> mpf:
    """Coefficient ``pi^2 / (4 sigma M)`` multiplying ``1/eps`` in the exponent."""
    return mp.pi ** 2 / (4 * sigma * M)


def in_region(z, M, tol=0) -> bool:
    """Membership in ``{z : |1 - z| <= M (1 - |z|)}``."""
    if M < 1:
        raise ValueError("M must be >= 1")
    with working_precision(max(mp.prec, 160)):
        z = mpmath.mpmathify(z)
        return bool(abs(1 - z) <= M * (1 - abs(z)) + tol)


def boundary_radius(theta, M) -> mpf:
    """``exp(-acosh(1 + (1 - cos theta) / (M^2 - 1)))`` for ``M > 1``."""
    if M <= 1:
        raise ValueError("polar boundary needs M > 1")
    M = to_mpf(M, mp.prec)
    return mpmath.exp(-mpmath.acosh(1 + (1 - mpmath.cos(theta)) / (M * M - 1)))


def region_boundary(M, n_points: int, bits: int = 160) -> list[tuple[mpf, mpc]]:
    """``(theta, z)`` pairs on the region boundary, ``theta = 2 pi k / n_points``."""
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    with working_precision(bits):
        out = []
        for k in range(n_points):
            theta = 2 * mp.pi * k / n_points
            r = boundary_radius(theta, M)
            out.append((theta, mpmath.mpc(r * mpmath.cos(theta), r * mpmath.sin(theta))))
        return out
