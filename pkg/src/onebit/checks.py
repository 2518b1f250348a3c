"""Self-checks of the identities the construction rests on.

Each check returns a :class:`CheckResult`; nothing raises on failure.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from . import analysis
from .filters import build_filter, l1_norm
from .numerics import PrecisionConfig, cosh_pi_over_sqrt, working_precision
from .quantizer import CoefficientStream, quantize


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _s(x, n=6):
    return mpmath.nstr(x, n)


def check_l1(sigma: int = 6, cfg: PrecisionConfig | None = None, m0: int = 200,
             width: float = 1e-20) -> CheckResult:
    cfg = cfg or PrecisionConfig()
    spec = build_filter(sigma, 0, cfg)
    res = l1_norm(spec, m0, cfg, tail="zeta")
    target = cosh_pi_over_sqrt(sigma, cfg.working_bits)
    with working_precision(cfg.working_bits):
        ok = res.brackets(target) and 2 * res.tail_bound < width
        gap = abs(res.value - target)
    return CheckResult(f"l1[sigma={sigma}]", bool(ok),
                       f"value={_s(res.value, 25)} tail={_s(res.tail_bound)} "
                       f"|value-cosh(pi/sqrt(sigma))|={_s(gap)}")


def theta_gap(lam, cfg: PrecisionConfig | None = None):
    """Direct and Poisson evaluations of ``theta_4(0, e^-lam)`` and their gap."""
    cfg = cfg or PrecisionConfig()
    with working_precision(cfg.working_bits):
        lam = mpmath.mpmathify(lam) if not isinstance(lam, float) else mpf(str(lam))
        direct = analysis.theta4_direct(mpmath.exp(-lam), cfg)
        poisson = analysis.theta4_poisson(lam, cfg)
        return direct, poisson, abs(direct.value - poisson.value)


def check_theta(lam=1.0, cfg: PrecisionConfig | None = None, tol=1e-25) -> CheckResult:
    direct, poisson, gap = theta_gap(lam, cfg)
    return CheckResult(f"theta[lambda={lam}]", bool(gap < tol),
                       f"direct={_s(direct.value, 25)} poisson={_s(poisson.value, 25)} "
                       f"gap={_s(gap)}")


def check_h_at_one(sigma: int = 6, cfg: PrecisionConfig | None = None,
                   n0: int = 10_000) -> CheckResult:
    res = analysis.H_sigma(1, sigma, cfg, n0=n0)
    ok = abs(res.value) <= res.tail_bound
    return CheckResult(f"H(1)=0[sigma={sigma}]", bool(ok),
                       f"H_n0(1)={_s(res.value)} tail={_s(res.tail_bound)}")


def check_integral(x=0.95, sigma: int = 6, cfg: PrecisionConfig | None = None,
                   tol=1e-10) -> CheckResult:
    series = analysis.H_sigma(x, sigma, cfg)
    quad, _ = analysis.H_sigma_integral(x, sigma, cfg)
    gap = abs(series.value - quad)
    return CheckResult(f"integral[x={x}]", bool(gap < tol),
                       f"series={_s(series.value, 15)} quadrature={_s(quad, 15)} gap={_s(gap)}")


def check_product(z=0.9, sigma: int = 6, cfg: PrecisionConfig | None = None,
                  tol=1e-15, tail=1e-18) -> CheckResult:
    """``f - Q = H * V`` for ``f = 0`` at a real or complex point."""
    cfg = cfg or PrecisionConfig()
    with working_precision(cfg.working_bits):
        r = abs(mpmath.mpmathify(z))
        n = int(mpmath.ceil(mpmath.log(tail * (1 - r) / 2) / mpmath.log(r))) + 1
    seq = quantize(build_filter(sigma, 0, cfg), None, n, cfg)
    fq = analysis.series_error(CoefficientStream.zeros(), seq, z, n, cfg)
    h = analysis.H_sigma(z, sigma, cfg)
    v = analysis.residual_series(seq, z, n, cfg)
    with working_precision(cfg.working_bits):
        gap = abs(fq.value - h.value * v.value)
        tails = max(fq.tail_bound, h.tail_bound, v.tail_bound)
    ok = gap < tol and tails < tail
    return CheckResult(f"product[z={z}]", bool(ok),
                       f"N={n} |(f-Q)-H*V|={_s(gap)} max_tail={_s(tails)}")


def check_admissibility(cfg: PrecisionConfig | None = None) -> CheckResult:
    from .filters import InadmissiblePair, min_admissible_sigma
    cfg = cfg or PrecisionConfig()
    ok = min_admissible_sigma(0) == 6
    try:
        build_filter(5, 0, cfg)
        ok = False
    except InadmissiblePair:
        pass
    build_filter(6, 0.0584, cfg)
    try:
        build_filter(6, 0.0585, cfg)
        ok = False
    except InadmissiblePair:
        pass
    return CheckResult("admissibility", bool(ok),
                       "min sigma(0)=6; sigma=5 rejected; mu=0.0584 ok, 0.0585 rejected")


CHECKS = ("l1", "theta", "h1", "integral", "product", "admissibility")


def run_checks(names=CHECKS, sigma: int = 6, lambdas=(0.2, 0.5, 1.0, 2.0, 5.0),
               cfg: PrecisionConfig | None = None) -> list[CheckResult]:
    out = []
    for name in names:
        if name == "l1":
            out.append(check_l1(sigma, cfg))
        elif name == "theta":
            out.extend(check_theta(lam, cfg) for lam in lambdas)
        elif name == "h1":
            out.append(check_h_at_one(sigma, cfg))
        elif name == "integral":
            out.extend(check_integral(x, sigma, cfg) for x in (0.9, 0.95, 0.99))
        elif name == "product":
            out.extend(check_product(z, sigma, cfg) for z in (0.5, 0.7, 0.9))
        elif name == "admissibility":
            out.append(check_admissibility(cfg))
        else:
            raise ValueError(f"unknown check {name!r}; choose from {CHECKS}")
    return out
