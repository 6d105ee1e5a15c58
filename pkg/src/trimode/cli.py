"""Command-line interface.

Subcommands:
  sweep    criteria over a tau grid, written as CSV (stdout or --out)
  figures  CSV data for the published figures 1..5 plus parameter sidecars
  oracle   cross-check every moment path; exits nonzero when any fails
  eval     criteria at a single tau, printed as key=value lines

Exit codes: 0 success, 1 failed oracle comparison, 2 usage error,
3 file I/O error, 4 invalid parameter values.  A config file (--config,
flat key=value lines with '#' comments) supplies defaults; explicit flags
always win.
"""

from __future__ import annotations

import argparse
import sys

from .core import Sign, TauConvention
from .criteria import evaluate_all
from .propagator import moments_at
from .sweep import (
    FIGURE_PRESETS,
    RunConfig,
    load_config_file,
    reproduce_figure,
    run_oracle_check,
    run_sweep,
    sweep_csv_text,
    time_scale,
    write_sweep_csv,
)

__all__ = ["build_parser", "main"]

_CONFIG_FIELDS = {
    "kappa1": float,
    "kappa2": float,
    "tau_min": float,
    "tau_max": float,
    "points": int,
    "tau_convention": str,
    "sign": str,
    "seed": int,
    "mc_samples": int,
    "out": str,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="trimode",
        description=(
            "Quadrature moment dynamics and tripartite entanglement criteria "
            "for three modes coupled by interlinked parametric interactions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kappa1", type=float, help="first coupling (default 1.2)")
    common.add_argument("--kappa2", type=float, help="second coupling (default 1.0)")
    common.add_argument("--tau-min", type=float, help="grid start (default 0)")
    common.add_argument("--tau-max", type=float, help="grid end (default 3)")
    common.add_argument("--points", type=int, help="grid size (default 301)")
    common.add_argument(
        "--tau-convention",
        choices=[c.value for c in TauConvention],
        help="tau = rate*t or tau = max(kappa)*t (default rate)",
    )
    common.add_argument(
        "--sign",
        choices=[s.value for s in Sign],
        help="two-mode combination sign used by the inference criteria",
    )
    common.add_argument("--seed", type=int, help="Monte Carlo seed (default 1)")
    common.add_argument(
        "--mc-samples", type=int, help="Monte Carlo sample count (default 10^6)"
    )
    common.add_argument("--config", help="key=value config file; flags override it")

    p_sweep = sub.add_parser("sweep", parents=[common], help="criteria over a tau grid")
    p_sweep.add_argument("--out", help="output CSV path (default: stdout)")

    p_fig = sub.add_parser("figures", parents=[common], help="figure data as CSV")
    p_fig.add_argument(
        "--which",
        default="all",
        choices=["1", "2", "3", "4", "5", "all"],
        help="figure number 1..5 or 'all' (default all)",
    )
    p_fig.add_argument("--out", help="output directory (default: current)")

    p_oracle = sub.add_parser(
        "oracle", parents=[common], help="cross-check the moment paths"
    )
    p_oracle.add_argument("--out", help="optional report file")

    p_eval = sub.add_parser("eval", parents=[common], help="criteria at one tau")
    p_eval.add_argument("--tau", type=float, required=True, help="dimensionless time")

    return parser


def _merge_config(args):
    """Resolve flags > config file > RunConfig defaults."""
    file_values = {}
    if args.config is not None:
        file_values = load_config_file(args.config)
        unknown = set(file_values) - set(_CONFIG_FIELDS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")

    resolved = {}
    for key, cast in _CONFIG_FIELDS.items():
        flag_value = getattr(args, key if key != "out" else "out", None)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in file_values:
            resolved[key] = cast(file_values[key])

    kwargs = {}
    for key in ("kappa1", "kappa2", "tau_min", "tau_max", "points", "seed",
                "mc_samples"):
        if key in resolved:
            kwargs[key] = resolved[key]
    if "tau_convention" in resolved:
        kwargs["tau_convention"] = TauConvention(resolved["tau_convention"])
    if "sign" in resolved:
        kwargs["sign"] = Sign(resolved["sign"])
    if "out" in resolved:
        kwargs["out_path"] = resolved["out"]
    return RunConfig(**kwargs)


def _cmd_sweep(cfg):
    result = run_sweep(cfg)
    if cfg.out_path:
        write_sweep_csv(result, cfg.out_path)
    else:
        sys.stdout.write(sweep_csv_text(result))
    return 0


def _cmd_figures(cfg, which, out_dir):
    numbers = sorted(FIGURE_PRESETS) if which == "all" else [int(which)]
    for number in numbers:
        paths = reproduce_figure(
            number,
            out_dir,
            tau_min=cfg.tau_min,
            tau_max=cfg.tau_max,
            points=cfg.points,
            sign=cfg.sign,
        )
        print(" ".join(paths))
    return 0


def _cmd_oracle(cfg):
    reports = run_oracle_check(cfg)
    lines = []
    all_passed = True
    for name, report in reports:
        status = "PASS" if report.passed else "FAIL"
        all_passed &= report.passed
        lines.append(
            f"{status} {name}: max_rel={report.max_rel_err:.3e} "
            f"max_abs={report.max_abs_err:.3e} tol={report.tolerance:.0e} "
            f"worst={report.worst_entry[0].value}[{report.worst_entry[1]},"
            f"{report.worst_entry[2]}] tau={report.worst_entry[3]:.6g}"
        )
    text = "\n".join(lines) + "\n"
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0 if all_passed else 1


def _cmd_eval(cfg, tau):
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")
    c = cfg.couplings
    t = tau / time_scale(c, cfg.tau_convention)
    report = evaluate_all(moments_at(c, t), t, cfg.sign)
    print(f"tau = {tau:.17g}")
    print(f"t = {report.t:.17g}")
    print(f"kappa1 = {cfg.kappa1:.17g}")
    print(f"kappa2 = {cfg.kappa2:.17g}")
    print(f"tau_convention = {cfg.tau_convention.value}")
    print(f"sign = {report.sign.value}")
    for name, values in (
        ("vlf_raw", report.vlf_raw),
        ("vlf_opt", report.vlf_opt),
        ("gains", report.gains),
        ("obr_single", report.obr_single),
        ("obr_pair", report.obr_pair),
    ):
        for field, value in zip(values._fields, values):
            print(f"{name}.{field} = {value:.17g}")
    print(f"vlf_flag = {str(report.vlf_flag).lower()}")
    print(f"obr_single_flag = {str(report.obr_single_flag).lower()}")
    print(f"obr_pair_flag = {str(report.obr_pair_flag).lower()}")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        if args.command == "sweep":
            return _cmd_sweep(cfg)
        if args.command == "figures":
            return _cmd_figures(cfg, args.which, cfg.out_path or ".")
        if args.command == "oracle":
            return _cmd_oracle(cfg)
        return _cmd_eval(cfg, args.tau)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
