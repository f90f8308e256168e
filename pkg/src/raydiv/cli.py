"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 unreadable or malformed input
data, 4 violated mathematical precondition or failed property check.
Every run echoes its fully resolved configuration (and the tool version)
into the output, so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .distributions import (
    AbsoluteContinuityViolated,
    DiscreteDistribution,
    DistributionParseError,
    load_distribution,
    make_distribution,
)
from .divergence import divergence, divergence_over_rays, symmetrized_over_rays
from .fuzz import run_property_fuzz
from .generators import generator_catalogue
from .levelcurves import (
    compute_level_grids,
    grid_csv_lines,
    grid_json_payload,
    render_contours,
)
from .rays import certify_ks_identity, ks_two_sided, ray_supremum
from .simulation import (
    RNG_FAMILY,
    GcConfig,
    GcTrace,
    format_float,
    run_sweep,
    write_trace_csv,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_VIOLATION = 4


def _human(value: float) -> str:
    return f"{value:.12g}"


def _resolve_distribution(text: str) -> DiscreteDistribution:
    """Inline comma-separated weights (atoms 1..k), or a JSON file path."""
    parts = text.split(",")
    if len(parts) > 1:
        try:
            weights = [float(p) for p in parts]
        except ValueError:
            raise DistributionParseError(
                f"{text!r}: neither a weight list nor a readable file"
            ) from None
        atoms = np.arange(1, len(weights) + 1, dtype=np.float64)
        return make_distribution(atoms, weights)
    return load_distribution(text)


def _config_lines(command: str, resolved: dict) -> list[str]:
    blob = json.dumps(resolved, sort_keys=True)
    return [f"# raydiv {__version__} {command} rng={RNG_FAMILY}", f"# config {blob}"]


def _parse_names(text: str) -> tuple[str, ...]:
    names = tuple(p for p in (s.strip() for s in text.split(",")) if p)
    if not names:
        raise DistributionParseError("empty generator list")
    catalogue = generator_catalogue()
    for name in names:
        if name not in catalogue:
            known = ", ".join(sorted(catalogue))
            raise DistributionParseError(f"unknown generator {name!r}; known: {known}")
    return names


def cmd_divergence(args) -> int:
    mu = _resolve_distribution(args.mu)
    nu = _resolve_distribution(args.nu)
    names = _parse_names(args.gen)
    mode = "rays" if args.over_rays else "plain"
    for line in _config_lines(
        "divergence",
        {
            "gen": list(names),
            "mu": args.mu,
            "nu": args.nu,
            "direction": args.direction,
            "over_rays": args.over_rays,
        },
    ):
        print(line)
    compute = divergence_over_rays if args.over_rays else divergence
    for name in names:
        if args.direction in ("forward", "both"):
            res = compute(name, mu, nu)
            print(f"forward {name} {mode} = {_human(res.value)}")
        if args.direction in ("reverse", "both"):
            res = compute(name, nu, mu, direction=("nu", "mu"))
            print(f"reverse {name} {mode} = {_human(res.value)}")
        if args.direction == "symmetrized":
            if args.over_rays:
                value = symmetrized_over_rays(name, mu, nu).value
            else:
                value = max(
                    divergence(name, mu, nu).value,
                    divergence(name, nu, mu, direction=("nu", "mu")).value,
                )
            print(f"symmetrized {name} {mode} = {_human(value)}")
    return EXIT_OK


def cmd_ks(args) -> int:
    mu = _resolve_distribution(args.mu)
    nu = _resolve_distribution(args.nu)
    for line in _config_lines("ks", {"mu": args.mu, "nu": args.nu}):
        print(line)
    for label, first, second in (("forward", mu, nu), ("reverse", nu, mu)):
        sup = ray_supremum(first, second)
        where = "empty ray" if sup.argmax_atom is None else f"ray up to atom {sup.argmax_atom:g}"
        print(f"{label} supremum = {_human(sup.value)} ({where})")
    print(f"two-sided = {_human(ks_two_sided(mu, nu))}")
    try:
        report = certify_ks_identity(mu, nu)
    except AbsoluteContinuityViolated:
        print("identity = not applicable (mu is not absolutely continuous wrt nu)")
    else:
        status = "ok" if report.passed else "FAILED"
        print(f"identity residual = {_human(report.residual)} ({status})")
        if not report.passed:
            return EXIT_VIOLATION
    return EXIT_OK


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise DistributionParseError(f"bad size list {text!r}") from None


def _render_gc_figure(trace: GcTrace, path) -> None:
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    with plt.rc_context({"svg.hashsalt": "raydiv"}):
        fig, ax = plt.subplots(figsize=(5.0, 4.0))
        sizes = trace.config.sample_sizes
        for g in trace.config.generators:
            medians = [trace.stat(g, n, "forward_median") for n in sizes]
            ax.loglog(sizes, medians, marker="o", label=g)
        ax.set_xlabel("sample size")
        ax.set_ylabel("median divergence over rays")
        ax.legend()
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)


def cmd_gc(args) -> int:
    target = _resolve_distribution(args.nu)
    config = GcConfig(
        target=target,
        sample_sizes=_parse_sizes(args.sizes),
        trials=args.trials,
        generators=_parse_names(args.gens),
        seed=args.seed,
    )
    resolved = {
        "nu": args.nu,
        "sizes": list(config.sample_sizes),
        "trials": config.trials,
        "gens": list(config.generators),
        "seed": config.seed,
        "out": str(args.out),
    }
    header = _config_lines("gc", resolved)
    trace = run_sweep(config)
    write_trace_csv(trace, args.out, header_lines=header)
    written = [str(args.out)]
    if not args.no_figures:
        figure_path = Path(args.out).with_suffix(".svg")
        _render_gc_figure(trace, figure_path)
        written.append(str(figure_path))
    for line in header:
        print(line)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_levelcurves(args) -> int:
    nu = _resolve_distribution(args.nu)
    names = _parse_names(args.gens)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    resolved = {
        "nu": args.nu,
        "grid": args.grid,
        "gens": list(names),
        "format": args.format,
        "out": str(out_dir),
    }
    header = _config_lines("levelcurves", resolved)
    grids = compute_level_grids(nu, args.grid, names)
    written = []
    for key in sorted(grids):
        grid = grids[key]
        if args.format == "csv":
            path = out_dir / f"{key}.csv"
            path.write_text("\n".join(grid_csv_lines(grid, header)) + "\n", encoding="utf-8")
            written.append(path)
        elif args.format == "json":
            path = out_dir / f"{key}.json"
            payload = {"tool": f"raydiv {__version__}", "config": resolved}
            payload.update(grid_json_payload(grid))
            path.write_text(json.dumps(payload) + "\n", encoding="utf-8")
            written.append(path)
        if args.format == "svg" or not args.no_figures:
            figure_path = out_dir / f"{key}.svg"
            render_contours(grid, figure_path)
            written.append(figure_path)
    for line in header:
        print(line)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_fuzz(args) -> int:
    resolved = {
        "pairs": args.pairs,
        "max_atoms": args.max_atoms,
        "seed": args.seed,
        "slack": args.slack,
    }
    for line in _config_lines("fuzz", resolved):
        print(line)
    report = run_property_fuzz(
        pairs=args.pairs, max_atoms=args.max_atoms, seed=args.seed, slack=args.slack
    )
    print(f"pairs = {report.pairs}")
    print(f"checks = {report.checks_run}")
    print(f"violations = {len(report.violations)}")
    for v in report.violations:
        print(f"VIOLATION pair={v.pair_index} check={v.check} {v.detail}")
        print(f"  mu = {v.mu_json}")
        print(f"  nu = {v.nu_json}")
    if args.out:
        payload = {
            "tool": f"raydiv {__version__}",
            "config": resolved,
            "pairs": report.pairs,
            "checks": report.checks_run,
            "violations": [
                {
                    "check": v.check,
                    "detail": v.detail,
                    "pair_index": v.pair_index,
                    "mu": json.loads(v.mu_json),
                    "nu": json.loads(v.nu_json),
                }
                for v in report.violations
            ],
        }
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
    return EXIT_OK if report.passed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="raydiv",
        description="f-divergences restricted to rays for finite discrete distributions",
    )
    parser.add_argument("--version", action="version", version=f"raydiv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("divergence", help="evaluate divergences of a pair")
    p.add_argument("--gen", required=True, help="comma-separated generator names")
    p.add_argument("--mu", required=True, help="distribution file or inline weights")
    p.add_argument("--nu", required=True, help="distribution file or inline weights")
    p.add_argument(
        "--direction",
        choices=("forward", "reverse", "both", "symmetrized"),
        default="forward",
    )
    p.add_argument("--over-rays", action="store_true", help="project onto rays first")
    p.set_defaults(func=cmd_divergence)

    p = sub.add_parser("ks", help="ray suprema and the tv identity")
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.set_defaults(func=cmd_ks)

    p = sub.add_parser("gc", help="empirical convergence sweep")
    p.add_argument("--nu", required=True, help="target distribution (file or weights)")
    p.add_argument("--sizes", required=True, help="comma-separated sample sizes")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--gens", default="tv", help="comma-separated generator names")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="trace CSV path")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_gc)

    p = sub.add_parser("levelcurves", help="divergence surfaces over the 3-simplex")
    p.add_argument("--nu", required=True, help="three-atom reference (file or weights)")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--gens", default="tv,hellinger2")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_levelcurves)

    p = sub.add_parser("fuzz", help="randomized property checks")
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--max-atoms", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--slack", type=float, default=1e-9)
    p.add_argument("--out", default=None, help="optional JSON report path")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AbsoluteContinuityViolated as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DistributionParseError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
