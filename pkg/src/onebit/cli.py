"""Command-line front end.

Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from fractions import Fraction

import mpmath

from . import analysis, baselines, checks
from .duel import simulate_duel
from .filters import InadmissiblePair, build_filter
from .formats import write_bitstream, write_checkpoint, read_bitstream
from .numerics import PrecisionConfig, PrecisionExhausted, nstr, working_precision
from .quantizer import SignAmbiguous, quantize

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

SWEEP_COLUMNS = ("epsilon", "n_terms", "precision_bits", "bias", "tail_bound",
                 "envelope", "ratio")


class ValidationError(ValueError):
    pass


def _decimal(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a decimal: {text!r}") from exc


def _float_list(text: str) -> list[float]:
    items = [t for t in text.replace(" ", "").split(",") if t]
    try:
        return [float(t) for t in items]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cfg(args) -> PrecisionConfig:
    if args.bits is None:
        return PrecisionConfig.from_env()
    return PrecisionConfig(mantissa_bits=args.bits)


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def _ordering(args, n: int, epsilon=None, cfg=None):
    """The first ``n`` symbols of the requested ordering and the precision used."""
    seq = _ordering_seq(args, n, epsilon, cfg)
    return list(seq[:n]), getattr(seq, "precision", None) or cfg.mantissa_bits


def _ordering_seq(args, n, epsilon, cfg):
    kind = args.ordering
    if kind == "quantized":
        return quantize(build_filter(args.sigma, args.mu, cfg), None, n, cfg)
    if kind == "beta":
        return baselines.beta_expansion_ordering(epsilon, n)
    if kind == "file":
        if not args.file:
            raise ValidationError("--ordering file needs --file")
        seq = read_bitstream(args.file)
        if len(seq) < n:
            raise ValidationError(f"{args.file} holds {len(seq)} symbols, {n} needed")
        return seq
    return baselines.Ordering.named(kind).prefix(n)


# --- commands ---------------------------------------------------------------

def cmd_generate(args) -> int:
    if args.n < 1:
        raise ValidationError("--n must be >= 1")
    cfg = _cfg(args)
    spec = build_filter(args.sigma, args.mu, cfg)
    seq = quantize(spec, None, args.n, cfg)
    if args.out:
        write_bitstream(seq, args.out)
    if args.checkpoint:
        write_checkpoint(seq.state, args.checkpoint)
    print(seq.to01(64))
    st = seq.state
    print(f"# sigma={spec.sigma} mu={spec.mu} n={len(seq)} precision={seq.precision} "
          f"max|v|={float(st.max_abs_v) / 2 ** st.precision:.6f} "
          f"max|w|={float(st.max_abs_w) / 2 ** st.precision:.6f}")
    return EXIT_OK


def sweep_rows(args) -> list[dict]:
    grid = args.eps
    if not grid:
        raise ValidationError("epsilon grid is empty")
    for e in grid:
        if not 0 < e < 1:
            raise ValidationError(f"epsilon {e} outside (0, 1)")
    if args.ordering == "beta":
        raise ValidationError("the beta-expansion ordering is specific to one epsilon; "
                              "use duel-mc")
    cfg = _cfg(args)
    if args.n:
        ns = [args.n] * len(grid)
    elif args.ordering == "quantized":
        ns = [analysis.terms_for_envelope(e, args.sigma) for e in grid]
    else:
        # baselines: truncate below the working precision instead
        ns = [math.ceil(-cfg.mantissa_bits * math.log(2) / math.log1p(-e)) + 1 for e in grid]
    bits, precision = _ordering(args, max(ns), cfg=cfg)
    rows = []
    for e, n in zip(grid, ns):
        exact = Fraction(repr(e))  # read the grid as decimals, not binary floats
        b = analysis.bias(bits, exact, n, cfg)
        env = analysis.envelope(exact, args.sigma)
        with working_precision(cfg.working_bits):
            ratio = abs(b.value) / env
        rows.append({
            "epsilon": repr(e), "n_terms": n, "precision_bits": precision,
            "bias": nstr(b.value), "tail_bound": nstr(b.tail_bound),
            "envelope": nstr(env), "ratio": nstr(ratio),
        })
    return rows


def cmd_sweep(args) -> int:
    rows = sweep_rows(args)
    out = _open_out(args.out)
    try:
        w = csv.DictWriter(out, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_duel_mc(args) -> int:
    e = args.epsilon
    if not 0 < e < 1:
        raise ValidationError(f"epsilon {e} outside (0, 1)")
    if args.trials < 1:
        raise ValidationError("--trials must be >= 1")
    if args.ordering == "beta" and e > 0.5:
        raise ValidationError("beta-expansion ordering needs epsilon <= 1/2")
    cfg = _cfg(args)
    n = args.n or max(1, math.ceil(math.log(args.residual) / math.log1p(-e)))
    bits, _ = _ordering(args, n, epsilon=Fraction(str(e)), cfg=cfg)
    truncated = analysis.bias(bits, Fraction(str(e)), n, cfg)
    rep = simulate_duel(bits, e, args.trials, args.seed, float(truncated.value))
    print(f"ordering={args.ordering} epsilon={e} trials={args.trials} seed={args.seed} n={n}")
    print(f"analytic_bias={nstr(truncated.value, 20)} (truncation <= {nstr(truncated.tail_bound, 3)})")
    if args.ordering in ("alternating", "four_periodic", "thue_morse"):
        closed = baselines.closed_form_bias(args.ordering, Fraction(str(e)), cfg)
        print(f"closed_form_bias={nstr(closed.value, 20)}")
    print(f"empirical_bias={rep.empirical:.8f} x={rep.x_survives} y={rep.y_survives} "
          f"both={rep.both_survive}")
    print(f"stderr={rep.stderr:.3e} z={rep.z_score:+.3f} within_4sigma={abs(rep.z_score) <= 4}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _cfg(args)
    names = args.check or list(checks.CHECKS)
    lambdas = args.lam or (0.2, 0.5, 1.0, 2.0, 5.0)
    try:
        results = checks.run_checks(names, args.sigma, lambdas, cfg)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def cmd_region(args) -> int:
    if args.M <= 1:
        raise ValidationError("polar boundary sampling needs M > 1")
    if args.n_points < 2:
        raise ValidationError("--n-points must be >= 2")
    pts = analysis.region_boundary(args.M, args.n_points)
    out = _open_out(args.out)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("theta", "re", "im"))
        for theta, z in pts:
            w.writerow((nstr(theta), nstr(z.real), nstr(z.imag)))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="onebit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, sigma_default=6):
        sp.add_argument("--sigma", type=int, default=sigma_default)
        sp.add_argument("--mu", type=float, default=0.0)
        sp.add_argument("--bits", type=int, default=None,
                        help="mantissa bits (default 128, or $ONEBIT_PRECISION)")

    g = sub.add_parser("generate", help="quantize a = 0 and print the sign sequence")
    common(g)
    g.add_argument("--n", type=int, default=64)
    g.add_argument("--out", help="bitstream file to write")
    g.add_argument("--checkpoint", help="quantizer checkpoint to write")
    g.set_defaults(func=cmd_generate)

    orderings = ("quantized", "alternating", "four_periodic", "thue_morse", "beta", "file")

    s = sub.add_parser("sweep", help="bias versus epsilon as CSV")
    common(s)
    s.add_argument("--eps", type=_float_list, default=[0.1, 0.05, 0.02, 0.01],
                   help="comma-separated epsilon grid")
    s.add_argument("--ordering", choices=orderings, default="quantized")
    s.add_argument("--file")
    s.add_argument("--n", type=int, default=None, help="terms per epsilon (default: automatic)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    d = sub.add_parser("duel-mc", help="Monte Carlo duel versus analytic bias")
    common(d)
    d.add_argument("--ordering", choices=orderings, default="alternating")
    d.add_argument("--file")
    d.add_argument("--epsilon", type=float, required=True)
    d.add_argument("--trials", type=int, default=1_000_000)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--n", type=int, default=None, help="duel length cap")
    d.add_argument("--residual", type=float, default=1e-12,
                   help="bound on P(both survive) used to pick the default cap")
    d.set_defaults(func=cmd_duel_mc)

    v = sub.add_parser("verify", help="run identity self-checks")
    common(v)
    v.add_argument("--check", action="append", choices=checks.CHECKS)
    v.add_argument("--lambda", dest="lam", type=float, action="append")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("region", help="boundary of the approach region as CSV")
    r.add_argument("--M", type=_decimal, required=True)
    r.add_argument("--n-points", type=int, default=512)
    r.add_argument("--out")
    r.set_defaults(func=cmd_region)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InadmissiblePair as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SignAmbiguous, PrecisionExhausted) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
