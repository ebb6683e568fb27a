"""Command line front end: build | verify | table | fuzz.

Exit codes: 0 all checks pass, 1 a verification failed, 2 config error.
Reports and tables are deterministic for a fixed config + seed; figures are
rendered next to the output when --figures is passed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from .config import ConfigError, load_instance
from .fuzz import FAMILIES, run_fuzz
from .report import human_summary, report_json, run_checks, structure_rows, torus_descriptor

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_ERROR = 2


def _write_json(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _figures_base(out: str | None, fallback: str) -> Path:
    base = Path(out) if out else Path(fallback)
    return base.with_suffix("")


def cmd_build(args) -> int:
    inst = load_instance(args.config)
    bound = args.window or inst.plan.window
    desc = torus_descriptor(inst, bound)
    _write_json(desc, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = load_instance(args.config)
    if args.window:
        inst.plan.window = args.window
    if args.seed is not None:
        inst.plan.seed = args.seed
    if args.checks:
        inst.plan.checks = args.checks.split(",")
    started = time.monotonic()
    results = run_checks(inst)
    elapsed = time.monotonic() - started
    _write_json(report_json(inst, results), args.out)
    print(f"{inst.kind} instance, window {inst.plan.window}, seed {inst.plan.seed}:",
          file=sys.stderr)
    print(human_summary(results), file=sys.stderr)
    print(f"  elapsed {elapsed:.2f}s", file=sys.stderr)
    if args.figures:
        from .figures import render_check_summary, render_support_scatter

        base = _figures_base(args.out, "report")
        render_check_summary(results, str(base) + "_checks.png")
        if inst.view is not None and inst.rank == 2:
            render_support_scatter(inst, inst.plan.window, str(base) + "_support.png")
    return EXIT_OK if all(r.ok for r in results) else EXIT_VERIFY_FAILED


def cmd_table(args) -> int:
    inst = load_instance(args.config)
    bound = args.window or inst.plan.window
    rows = structure_rows(inst, bound)
    if args.format == "json":
        _write_json(rows, args.out)
    else:
        target = open(args.out, "w", newline="") if args.out else sys.stdout
        try:
            writer = csv.writer(target)
            if rows and "sum" in rows[0]:
                writer.writerow(["sigma", "tau", "sum", "coeff"])
                for r in rows:
                    writer.writerow([" ".join(map(str, r["sigma"])),
                                     " ".join(map(str, r["tau"])),
                                     " ".join(map(str, r["sum"])),
                                     r["coeff"]])
            else:
                writer.writerow(["sigma", "tau", "coeff"])
                for r in rows:
                    writer.writerow([" ".join(map(str, r["sigma"])),
                                     " ".join(map(str, r["tau"])),
                                     r["coeff"]])
        finally:
            if args.out:
                target.close()
    if args.figures:
        from .figures import render_structure_heatmap

        base = _figures_base(args.out, "table")
        render_structure_heatmap(rows, str(base) + "_heatmap.png",
                                 title=f"{inst.kind} structure constants, window {bound}")
    return EXIT_OK


def cmd_fuzz(args) -> int:
    report = run_fuzz(args.family, args.trials, args.seed,
                      out_dir=args.out_dir, adversarial=args.adversarial)
    _write_json(report, args.out)
    status = "ok" if report["ok"] else "FAILED"
    print(f"fuzz {args.family}: {report['trials']} trials clean={report['clean']}, "
          f"{report['caught']}/{report['adversarial']} mutations caught [{status}]",
          file=sys.stderr)
    return EXIT_OK if report["ok"] else EXIT_VERIFY_FAILED


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toruslab",
        description="exact construction and verification of graded algebra tori",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct and dump a torus descriptor")
    p_build.add_argument("--config", required=True)
    p_build.add_argument("--out")
    p_build.add_argument("--window", type=int)
    p_build.set_defaults(fn=cmd_build)

    p_verify = sub.add_parser("verify", help="run the verification suite")
    p_verify.add_argument("--config", required=True)
    p_verify.add_argument("--out")
    p_verify.add_argument("--window", type=int)
    p_verify.add_argument("--seed", type=int)
    p_verify.add_argument("--checks", help="comma-separated subset of checks")
    p_verify.add_argument("--figures", action="store_true",
                          help="render figures next to the report")
    p_verify.set_defaults(fn=cmd_verify)

    p_table = sub.add_parser("table", help="dump structure constants")
    p_table.add_argument("--config", required=True)
    p_table.add_argument("--out")
    p_table.add_argument("--window", type=int)
    p_table.add_argument("--format", choices=["json", "csv"], default="json")
    p_table.add_argument("--figures", action="store_true",
                         help="render a coefficient heatmap next to the table")
    p_table.set_defaults(fn=cmd_table)

    p_fuzz = sub.add_parser("fuzz", help="random instances + adversarial mutations")
    p_fuzz.add_argument("--family", required=True, choices=list(FAMILIES))
    p_fuzz.add_argument("--trials", type=int, default=100)
    p_fuzz.add_argument("--adversarial", type=int, default=10)
    p_fuzz.add_argument("--seed", type=int, default=0)
    p_fuzz.add_argument("--out")
    p_fuzz.add_argument("--out-dir", default="fuzz-witnesses",
                        help="directory for shrunk witness configs")
    p_fuzz.set_defaults(fn=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error at {exc.pointer}: {exc.message}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except Exception as exc:
        # construction preconditions surface verbatim as config-level failures
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
