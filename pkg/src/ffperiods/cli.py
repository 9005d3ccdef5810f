"""Command-line front end: group data, tables, Bessel functions, base change and verification runs."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from threadpoolctl import threadpool_limits

from .cache import CacheCorrupted, DiskCache, use_disk_cache
from .cyclotomic import Cyc
from .matgroup import DEFAULT_BUDGET, BudgetExceeded
from .periods import INVOLUTIONS, SUITES, SplitBench, Workbench, float_crosscheck, run_suite
from .report import VerificationReport, fmt

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    n: int = 2
    p: int = 2
    k: int = 1
    mode: str = "exact"          # exact | float
    precision: int = 53          # bits, float mode
    tol: float = 1e-9            # relative, float mode
    suites: list[str] = field(default_factory=lambda: list(SUITES))
    cache_dir: str | None = None
    threads: int = 1
    seed: int = 0
    exploratory: bool = False
    budget: int = DEFAULT_BUDGET

    def echo(self) -> dict:
        out = asdict(self)
        if self.mode != "float":
            out.pop("tol")
            out.pop("precision")
        return out


def _config(args) -> RunConfig:
    suites = list(SUITES)
    if getattr(args, "suite", None):
        chosen = [s for part in args.suite for s in part.split(",") if s]
        suites = list(SUITES) if "all" in chosen else chosen
        unknown = [s for s in suites if s not in SUITES]
        if unknown:
            raise SystemExit(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    if args.mode == "exact" and args.tol is not None:
        print("note: --tol is ignored in exact mode", file=sys.stderr)
    return RunConfig(args.n, args.p, args.k, args.mode, args.precision,
                     1e-9 if args.tol is None else args.tol, suites, args.cache_dir, args.threads,
                     args.seed, args.exploratory, args.budget)


def _disk(cfg: RunConfig) -> DiskCache | None:
    disk = DiskCache(cfg.cache_dir) if cfg.cache_dir else None
    use_disk_cache(disk)
    return disk


def _workbench(cfg: RunConfig) -> Workbench:
    disk = _disk(cfg)
    wb = Workbench.build(cfg.n, cfg.p, cfg.k, cfg.budget, cfg.seed, disk)
    if disk is not None:
        if not disk.check_context(wb.ctx):
            disk.save_context(wb.ctx)
    return wb


def _show(x) -> str:
    if isinstance(x, Cyc):
        return fmt(x.to_fraction()) if x.is_rational() else repr(x)
    return fmt(x)


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands --------------------------------------------------------------------------------------

def cmd_group_info(cfg: RunConfig, args) -> int:
    wb = _workbench(cfg)
    ctx = wb.ctx
    exp = ctx.expected_orders()
    info = {
        "context": ctx.descriptor,
        "orders": {"G": ctx.G.order, "G_sigma": len(ctx.G_sigma), "G_tau": len(ctx.G_tau),
                   "N": len(ctx.N), "A": len(ctx.A), "P": len(ctx.P), "P_F": len(ctx.P_F),
                   "X_sigma": len(ctx.X("sigma")), "X_tau": len(ctx.X("tau"))},
        "expected": exp,
        "classes": ctx.G.num_classes,
    }
    info["orders_match"] = all(info["orders"][key] == val for key, val in exp.items())
    _emit(json.dumps(info, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK if info["orders_match"] else EXIT_FAIL


def cmd_char_table(cfg: RunConfig, args) -> int:
    wb = _workbench(cfg)
    table = wb.table
    G = wb.G
    K = table.K
    lines = [f"# Irr({G.name}): {len(table)} characters, values in Q(zeta_{K.m})",
             "# class sizes: " + " ".join(str(int(s)) for s in table.sizes)]
    for i, row in enumerate(table.values):
        vals = " | ".join(_show(K.scalar(v)) for v in row)
        lines.append(f"chi_{i} (deg {int(table.degrees[i])}): {vals}")
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        payload = {"group": G.name, "m": K.m, "class_sizes": [int(s) for s in table.sizes],
                   "class_reps": [G.mats[r].tolist() for r in G.classes.reps],
                   "values": table.values.tolist()}
        Path(args.out).write_text(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_bessel(cfg: RunConfig, args) -> int:
    """Cell tables of the Bessel functions; the split group GL_n(F_{p^k}) unless --tower."""
    if args.tower:
        wb = _workbench(cfg)
        tables = [wb.bessels(args.psi)[i] for i in sorted(wb.bessels(args.psi))]
        group = wb.G.name
    else:
        _disk(cfg)
        sb = SplitBench(cfg.n, cfg.p, cfg.k, cfg.seed)
        tables = sb.setup.all_bessel()
        group = sb.G.name
    out = []
    rows = ["pi,degree,composition,torus,value"]
    for B in tables:
        cells = []
        for comp, torus, value in B.rows():
            cells.append({"composition": list(comp), "torus": list(torus), "value": _show(value)})
            rows.append(f'{B.char_index},{B.degree},"{comp}","{torus}",{_show(value)}')
        out.append({"pi": B.char_index, "degree": B.degree, "cells": cells})
    sys.stdout.write("\n".join(rows) + "\n")
    if args.out:
        Path(args.out).write_text(json.dumps({"group": group, "bessel": out}, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_basechange(cfg: RunConfig, args) -> int:
    from .basechange import BaseChangeError, base_change_table

    wb = _workbench(cfg)
    kappas = [args.kappa] if args.kappa else list(INVOLUTIONS)
    result = []
    status = EXIT_OK
    for kappa in kappas:
        try:
            pairs = base_change_table(wb, kappa, cfg.exploratory)
        except BaseChangeError as exc:
            print(f"{kappa}: {exc}", file=sys.stderr)
            continue
        for pair in pairs:
            result.append(asdict(pair))
            if pair.status != "unique":
                status = EXIT_FAIL
    sys.stdout.write(json.dumps(result, indent=1, sort_keys=True) + "\n")
    return status


def run_verification(cfg: RunConfig) -> tuple[VerificationReport, dict]:
    wb = _workbench(cfg)
    report = VerificationReport(wb.descriptor)
    timings = {}
    for suite in cfg.suites:
        t0 = time.perf_counter()
        report.extend(run_suite(wb, suite, cfg.exploratory))
        timings[suite] = round(time.perf_counter() - t0, 3)
    if cfg.mode == "float":
        float_crosscheck(wb, cfg.precision, cfg.tol, report)
    return report, timings


def cmd_verify(cfg: RunConfig, args) -> int:
    report, timings = run_verification(cfg)
    _emit(report.to_csv(timings=args.timings), args.csv)
    summary = report.summary(cfg.echo())
    if args.timings:
        summary["seconds"] = timings
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if args.json:
        Path(args.json).write_text(text)
    else:
        sys.stderr.write(text)
    for row in report.failures:
        sys.stderr.write(f"FAIL [{row.suite}] {row.anchor} {row.params}: {row.lhs} != {row.rhs}\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_report(cfg: RunConfig, args) -> int:
    """Summarise a CSV written by ``verify``."""
    counts: dict[str, dict[str, int]] = {}
    failures = []
    with open(args.source, newline="") as fh:
        for row in csv.DictReader(fh):
            c = counts.setdefault(row["suite"], {"pass": 0, "fail": 0})
            ok = row["pass"] == "pass"
            c["pass" if ok else "fail"] += 1
            if not ok and not row["anchor"].endswith("[exploratory]"):
                failures.append(row)
    width = max([len(s) for s in counts] + [5])
    lines = [f"{'suite':<{width}}  pass  fail"]
    lines += [f"{s:<{width}}  {c['pass']:>4}  {c['fail']:>4}" for s, c in sorted(counts.items())]
    lines += [f"FAIL [{r['suite']}] {r['anchor']} {r['params']}: {r['lhs']} != {r['rhs']}" for r in failures]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if not failures else EXIT_FAIL


COMMANDS = {"group-info": cmd_group_info, "char-table": cmd_char_table, "bessel": cmd_bessel,
            "basechange": cmd_basechange, "verify": cmd_verify, "report": cmd_report}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2)
    common.add_argument("--p", type=int, default=2)
    common.add_argument("--k", type=int, default=1, help="F = F_{p^k}, E = F_{p^{2k}}")
    common.add_argument("--mode", choices=["exact", "float"], default="exact")
    common.add_argument("--precision", type=int, default=53, help="float mode: mantissa bits")
    common.add_argument("--tol", type=float, default=None, help="float mode: relative tolerance")
    common.add_argument("--suite", action="append", help=f"comma list from {', '.join(SUITES)} or all")
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--threads", type=int, default=1, help="BLAS worker threads")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--exploratory", action="store_true",
                        help="also evaluate the even-characteristic unitary-side identities")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="largest |G| to enumerate")

    parser = argparse.ArgumentParser(prog="ffperiods", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("group-info", parents=[common])
    p.add_argument("--out")
    p = sub.add_parser("char-table", parents=[common])
    p.add_argument("--out", help="machine-readable JSON table")
    p = sub.add_parser("bessel", parents=[common])
    p.add_argument("--tower", action="store_true", help="use GL_n(E) instead of the split GL_n(F)")
    p.add_argument("--psi", choices=list(INVOLUTIONS), default="sigma")
    p.add_argument("--out")
    p = sub.add_parser("basechange", parents=[common])
    p.add_argument("--kappa", choices=list(INVOLUTIONS))
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--csv", help="write the CSV here instead of stdout")
    p.add_argument("--json", help="write the JSON summary here instead of stderr")
    p.add_argument("--timings", action="store_true", help="record per-row micros (not reproducible)")
    p = sub.add_parser("report", parents=[common])
    p.add_argument("source", help="CSV produced by verify")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    try:
        with threadpool_limits(limits=max(1, cfg.threads)):
            return COMMANDS[args.command](cfg, args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except CacheCorrupted as exc:
        print(f"error: cache corrupted: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except BrokenPipeError:
        # downstream reader (e.g. ``head``) closed early; silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    finally:
        use_disk_cache(None)


if __name__ == "__main__":
    sys.exit(main())
