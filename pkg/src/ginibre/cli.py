"""Command-line interface: ``ginibre {average,pfaffian,jpdf,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .antisym import pfaffian, read_matrix
from .averages import compute_average
from .config import RunConfig, merge
from .errors import NumericalError, UsageError
from .quadrature import QuadratureConfig
from .report import make_report, to_csv, to_json, write_sample_csv
from .sampler import (
    DEFAULT_THRESHOLD,
    jpdf_partial,
    mc_average,
    real_count_distribution,
    sector_probability,
)
from .verify import SUITES, run_suites

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


def _pair(kind):
    def parse(text: str):
        parts = text.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected two comma-separated values, got {text!r}")
        return tuple(kind(p) for p in parts)

    return parse


def _add_quadrature_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("quadrature")
    g.add_argument("--real-cutoff", type=float, dest="quadrature.real_cutoff")
    g.add_argument("--nodes-1d", type=int, dest="quadrature.nodes_1d")
    g.add_argument("--halfplane-cutoff", type=_pair(float), dest="quadrature.halfplane_cutoff", metavar="X,Y")
    g.add_argument("--nodes-2d", type=_pair(int), dest="quadrature.nodes_2d", metavar="NX,NY")
    g.add_argument("--tol", type=float, dest="quadrature.target_rel_tol")


def _add_mc_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("monte carlo")
    g.add_argument("--samples", type=int, dest="mc.samples")
    g.add_argument("--seed", type=int, dest="mc.seed")
    g.add_argument("--threshold", type=float, dest="mc.threshold")
    g.add_argument("--workers", type=int, default=None, help="threads (default: $GINIBRE_THREADS or 1)")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv"], dest="output_format")
    p.add_argument("--output", type=Path, default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ginibre", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    avg = sub.add_parser("average", help="ensemble average of a multiplicative class function")
    avg.add_argument("--config", type=Path, default=None, help="JSON run configuration")
    avg.add_argument("--ensemble", choices=["ginoe", "ginue"])
    avg.add_argument("--n", type=int)
    avg.add_argument("--psi", help="one | pow:n | shift:z | poly:c0,c1,... | modsq")
    avg.add_argument(
        "--method",
        help="auto | pfaffian | skew_orth | parity_det | ginue_det (det) | ginue_orth (orth) | mc",
    )
    avg.add_argument("--samples-csv", type=Path, default=None, help="per-sample CSV for the mc method")
    _add_quadrature_flags(avg)
    _add_mc_flags(avg)
    _add_output_flags(avg)

    pf = sub.add_parser("pfaffian", help="Pfaffian of an antisymmetric matrix file")
    pf.add_argument("matrix", type=Path, help="first line n, then n rows of n entries")
    pf.add_argument("--method", choices=["elimination", "combinatorial"], default="elimination")
    _add_output_flags(pf)

    jp = sub.add_parser("jpdf", help="partial joint eigenvalue densities of GinOE")
    jp.add_argument("--n", type=int, required=True)
    jp.add_argument("--sector", type=_pair(int), default=None, metavar="L,M")
    mode = jp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--point", default=None, help="comma-separated: L reals then M complex (e.g. 0.1,0.5+1j)")
    mode.add_argument("--integrate", action="store_true", help="sector probability by quadrature (n <= 2)")
    mode.add_argument("--mc-distribution", action="store_true", help="Monte Carlo distribution of L")
    _add_quadrature_flags(jp)
    _add_mc_flags(jp)
    _add_output_flags(jp)

    ver = sub.add_parser("verify", help="run verification batteries")
    ver.add_argument("suites", nargs="+", choices=[*SUITES, "all"])
    ver.add_argument("--seed", type=int, default=0)
    _add_output_flags(ver)
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    keys = ("ensemble", "n", "psi", "method", "output_format")
    out = {k: getattr(args, k, None) for k in keys}
    out.update({k: v for k, v in vars(args).items() if k.startswith(("quadrature.", "mc."))})
    return out


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def cmd_average(args: argparse.Namespace) -> int:
    base = RunConfig.load(args.config) if args.config else RunConfig()
    cfg = merge(base, _overrides(args)).resolved()
    psi = cfg.psi_spec
    start = time.perf_counter()
    if cfg.method == "monte_carlo":
        est = mc_average(
            cfg.ensemble,
            cfg.n,
            psi,
            cfg.mc.samples,
            cfg.mc.seed,
            threshold=cfg.mc.threshold,
            workers=args.workers,
            keep_samples=args.samples_csv is not None,
        )
        if args.samples_csv is not None:
            write_sample_csv(args.samples_csv, est.products, est.real_counts, cfg.n)
        result = {
            "value": est.mean,
            "method": "monte_carlo",
            "n": cfg.n,
            "psi": str(psi),
            "est_error": est.std_error,
            **est.to_dict(),
        }
    else:
        avg = compute_average(cfg.ensemble, cfg.n, psi, cfg.method, cfg.quadrature)
        result = avg.to_dict()
    wall = time.perf_counter() - start
    if cfg.output_format == "csv":
        row = {"ensemble": cfg.ensemble, "wall_time_s": wall, **result}
        _emit(to_csv("average", [row]), args.output)
    else:
        _emit(to_json(make_report("average", cfg.to_dict(), result, wall)) + "\n", args.output)
    return EXIT_OK


def cmd_pfaffian(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    try:
        m = read_matrix(args.matrix)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    res = pfaffian(m, args.method)
    wall = time.perf_counter() - start
    value, sign = complex(res.value), complex(res.sign)
    if args.output_format == "csv":
        row = {
            "dim": m.shape[0],
            "method": res.method,
            "value_real": value.real,
            "value_imag": value.imag,
            "sign_real": sign.real,
            "sign_imag": sign.imag,
            "log_abs": res.log_abs,
        }
        _emit(to_csv("pfaffian", [row]), args.output)
    else:
        real = not np.iscomplexobj(m)
        result = {
            "dim": m.shape[0],
            "method": res.method,
            "value": value.real if real else value,
            "sign": sign.real if real else sign,
            "log_abs": res.log_abs,
        }
        config = {"matrix": str(args.matrix), "method": args.method}
        _emit(to_json(make_report("pfaffian", config, result, wall)) + "\n", args.output)
    return EXIT_OK


def _parse_point(text: str, n: int, sector: tuple[int, int] | None):
    try:
        values = [complex(tok.strip()) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse point {text!r}: {exc}") from None
    if sector is None:
        alpha = [v.real for v in values if v.imag == 0]
        beta = [v for v in values if v.imag != 0]
        if len(alpha) + len(beta) != len(values) or any(v.imag == 0 for v in values[len(alpha):]):
            raise UsageError("list real coordinates before complex ones")
    else:
        big_l, big_m = sector
        if len(values) != big_l + big_m:
            raise UsageError(f"sector {sector} needs {big_l} reals and {big_m} complex values")
        if any(v.imag != 0 for v in values[:big_l]):
            raise UsageError("the first L coordinates must be real")
        alpha = [v.real for v in values[:big_l]]
        beta = values[big_l:]
    if len(alpha) + 2 * len(beta) != n:
        raise UsageError(f"point has L={len(alpha)}, M={len(beta)}, which does not match n={n}")
    return alpha, beta


def _sectors(n: int):
    return [(n - 2 * m, m) for m in range(n // 2 + 1)]


def cmd_jpdf(args: argparse.Namespace) -> int:
    n = args.n
    if n < 1:
        raise UsageError("n must be at least 1")
    if args.sector is not None and (args.sector not in _sectors(n)):
        raise UsageError(f"sector {args.sector} is invalid for n={n} (need L + 2M = n)")
    quad_cfg = merge(RunConfig(), _overrides(args)).quadrature
    start = time.perf_counter()
    rows = []
    config: dict[str, Any] = {"n": n, "sector": list(args.sector) if args.sector else None}
    if args.point is not None:
        alpha, beta = _parse_point(args.point, n, args.sector)
        value = float(jpdf_partial(np.array(alpha), np.array(beta, dtype=complex), n))
        rows.append({"L": len(alpha), "M": len(beta), "quantity": "density", "value": value, "std_error": None})
        config.update(mode="point", point=args.point)
    elif args.integrate:
        for big_l, big_m in [args.sector] if args.sector else _sectors(n):
            p = sector_probability(n, big_l, big_m, quad_cfg)
            rows.append({"L": big_l, "M": big_m, "quantity": "sector_probability", "value": p, "std_error": None})
        config.update(mode="integrate", quadrature=quad_cfg.to_dict())
    else:
        samples = getattr(args, "mc.samples") or 1_000_000
        seed = getattr(args, "mc.seed") or 0
        threshold = getattr(args, "mc.threshold") or DEFAULT_THRESHOLD
        hist = real_count_distribution(n, samples, seed, threshold, args.workers)
        for big_l, big_m in _sectors(n):
            if args.sector and (big_l, big_m) != args.sector:
                continue
            rows.append(
                {
                    "L": big_l,
                    "M": big_m,
                    "quantity": "empirical_probability",
                    "value": hist.probability(big_l),
                    "std_error": hist.std_error(big_l),
                }
            )
        config.update(mode="mc_distribution", samples=samples, seed=seed, threshold=threshold)
    wall = time.perf_counter() - start
    if args.output_format == "csv":
        _emit(to_csv("jpdf", [{"n": n, **r} for r in rows]), args.output)
    else:
        result = {"mode": config["mode"], "n": n, "rows": rows}
        _emit(to_json(make_report("jpdf", config, result, wall)) + "\n", args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    suites = list(SUITES) if "all" in args.suites else list(dict.fromkeys(args.suites))
    start = time.perf_counter()
    checks = run_suites(suites, seed=args.seed, cfg=QuadratureConfig())
    wall = time.perf_counter() - start
    passed = all(c.passed for c in checks)
    if args.output_format == "csv":
        _emit(to_csv("verify", [c.to_dict() for c in checks]), args.output)
    else:
        result = {"passed": passed, "checks": [c.to_dict() for c in checks]}
        config = {"suites": suites, "seed": args.seed, "quadrature": QuadratureConfig().to_dict()}
        _emit(to_json(make_report("verify", config, result, wall)) + "\n", args.output)
    for c in checks:
        if not c.passed:
            print(f"FAILED {c.suite}/{c.name}: residual {c.max_residual:.3g} > {c.tolerance:.3g}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_VERIFY


COMMANDS = {"average": cmd_average, "pfaffian": cmd_pfaffian, "jpdf": cmd_jpdf, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"ginibre: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"ginibre: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
