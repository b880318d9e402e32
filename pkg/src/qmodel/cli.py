"""Command-line entry point: ``qmodel verify | cgc | umatrix | list-suites``.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or parse error,
3 internal failure while running a suite.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from . import cgc
from .fock.models import parse_variant
from .qarith import AnyPoint, HalfInt, QPointError, parse_qpoint
from .report import CheckReport, all_pass, emit_report
from .suites import SUITES, SuiteSpec, default_points

log = logging.getLogger("qmodel")

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
CGC_JMAX = 10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags, which already matches the
    usage exit code; this only routes the message through ``UsageError`` so
    :func:`main` can be called from tests without ``SystemExit``."""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmodel", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", action="append", help="suite name (repeatable, or 'all')")
    v.add_argument("--q", action="append", help="q point: 1, a real number, or circle:THETA")
    v.add_argument("--ncap", type=int, default=None)
    v.add_argument("--tol", type=float, default=None)
    v.add_argument("--grid", action="store_true", default=None,
                   help="fan out over the default q grid and ncap, ncap+2")
    v.add_argument("--report", default=None, help="write the report here instead of stdout")
    v.add_argument("--format", choices=["json", "text"], default=None)
    v.add_argument("--config", default=None, help="key = value file mirroring these flags")
    v.add_argument("--workers", type=int, default=None)

    c = sub.add_parser("cgc", help="q-Clebsch-Gordan table for j x 1/2")
    c.add_argument("--j", required=True)
    c.add_argument("--q", required=True)
    c.add_argument("--format", choices=["csv", "json"], default="csv")
    c.add_argument("--cross-check", action="store_true")

    u = sub.add_parser("umatrix", help="matrix elements of the generating matrix U")
    u.add_argument("--jmax", required=True)
    u.add_argument("--q", required=True)
    u.add_argument("--variant", default="exact63")
    u.add_argument("--format", choices=["csv", "json"], default="csv")

    sub.add_parser("list-suites", help="list suite names")
    return p


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

_VERIFY_DEFAULTS = {"ncap": 10, "tol": 1e-10, "grid": False, "format": "json", "report": None,
                    "workers": 4}


def read_config(path: str) -> Dict[str, List[str]]:
    """Flat ``key = value`` lines; ``#`` starts a comment; repeated keys
    (and comma-separated values) accumulate."""
    out: Dict[str, List[str]] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{n}: expected key = value")
        key = key.strip().replace("-", "_")
        vals = [x.strip() for x in val.split(",")] if key in ("q", "suite") else [val.strip()]
        out.setdefault(key, []).extend(x for x in vals if x)
    return out


def _bool(text: str) -> bool:
    t = text.lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def resolve_verify(args) -> dict:
    """Merge defaults, the config file and the command line (in that order)."""
    cfg = read_config(args.config) if args.config else {}
    known = {"suite", "q", "ncap", "tol", "grid", "format", "report", "workers"}
    unknown = set(cfg) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    conv = {"ncap": int, "tol": float, "grid": _bool, "workers": int, "format": str, "report": str}
    opts = dict(_VERIFY_DEFAULTS)
    try:
        for key, fn in conv.items():
            if key in cfg:
                opts[key] = fn(cfg[key][-1])
    except ValueError as exc:
        raise UsageError(f"bad config value: {exc}") from exc
    opts["suite"] = cfg.get("suite", [])
    opts["q"] = cfg.get("q", [])
    for key in conv:
        val = getattr(args, key)
        if val is not None:
            opts[key] = val
    if args.suite:
        opts["suite"] = args.suite
    if args.q:
        opts["q"] = args.q
    if opts["format"] not in ("json", "text"):
        raise UsageError(f"unknown format {opts['format']!r}")
    if not opts["suite"]:
        raise UsageError("verify needs --suite")
    if opts["ncap"] < 2:
        raise UsageError("ncap must be at least 2")
    if not opts["tol"] > 0:
        raise UsageError("tol must be positive")
    return opts


def plan_tasks(opts) -> List[Tuple[SuiteSpec, AnyPoint, int]]:
    names: List[str] = []
    for s in opts["suite"]:
        for name in (SUITES if s == "all" else [s]):
            if name not in SUITES:
                raise UsageError(f"unknown suite {name!r} (see list-suites)")
            if name not in names:
                names.append(name)
    ncaps = [opts["ncap"], opts["ncap"] + 2] if opts["grid"] else [opts["ncap"]]
    tasks = []
    for name in names:
        spec = SUITES[name]
        for ncap in ncaps:
            try:
                if opts["q"]:
                    pts = [parse_qpoint(t, ncap) for t in opts["q"]]
                elif opts["grid"]:
                    pts = default_points(ncap, spec.classical)
                else:
                    pts = [parse_qpoint("1.3", ncap)]
            except (QPointError, ValueError) as exc:
                raise UsageError(str(exc)) from exc
            if spec.point_free:
                pts = pts[:1]
            tasks.extend((spec, qp, ncap) for qp in pts)
        if spec.point_free:
            # identical across ncap as well
            tasks = _dedupe_point_free(tasks, spec)
    return tasks


def _dedupe_point_free(tasks, spec):
    seen, out = False, []
    for t in tasks:
        if t[0] is spec:
            if seen:
                continue
            seen = True
        out.append(t)
    return out


def _run_one(task, tol) -> List[CheckReport]:
    spec, qp, ncap = task
    reports = spec.run(qp, ncap, tol)
    for r in reports:
        r.params.setdefault("q", qp.label())
        if not spec.point_free:
            r.params.setdefault("ncap", ncap)
    return reports


def run_tasks(tasks, tol: float, workers: int = 4) -> List[CheckReport]:
    """Run independent tasks concurrently; results keep the task order."""
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [pool.submit(_run_one, t, tol) for t in tasks]
        out: List[CheckReport] = []
        for f in futures:
            out.extend(f.result())
    return out


def cmd_verify(args, stdout) -> int:
    opts = resolve_verify(args)
    tasks = plan_tasks(opts)
    try:
        reports = run_tasks(tasks, opts["tol"], opts["workers"])
    except Exception:
        log.error("internal failure while running suites\n%s", traceback.format_exc())
        return EXIT_INTERNAL
    names = list(dict.fromkeys(t[0].name for t in tasks))
    params = {"q": list(dict.fromkeys(t[1].label() for t in tasks)),
              "ncap": sorted({t[2] for t in tasks}), "tol": opts["tol"]}
    suite = names[0] if len(names) == 1 else names
    text = emit_report(reports, opts["format"], suite=suite, params=params)
    if opts["report"]:
        try:
            with open(opts["report"], "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write report: {exc}") from exc
        stdout.write(f"{'PASS' if all_pass(reports) else 'FAIL'}: {len(reports)} checks, "
                     f"report written to {opts['report']}\n")
    else:
        stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_PASS if all_pass(reports) else EXIT_FAIL


# --------------------------------------------------------------------------
# cgc / umatrix / list-suites
# --------------------------------------------------------------------------


def _parse_j(text: str, what: str = "j"):
    try:
        j = HalfInt.parse(text).value
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{what}={text!r} is not a half-integer") from exc
    if j < 0:
        raise UsageError(f"{what} must be non-negative")
    if j > CGC_JMAX:
        raise UsageError(f"{what} must be at most {CGC_JMAX}")
    return j


def _parse_q(text: str, ncap: int) -> AnyPoint:
    try:
        return parse_qpoint(text, ncap)
    except (QPointError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_cgc(args, stdout) -> int:
    j = _parse_j(args.j)
    qp = _parse_q(args.q, int(2 * j) + 2)
    table = cgc.cgc_table(j, qp)
    status = EXIT_PASS
    if args.cross_check:
        dev = cgc.cross_check_table(table, qp)
        status = EXIT_PASS if dev <= (1e-12 if qp.classical else 1e-10) else EXIT_FAIL
    stdout.write(table.to_csv() if args.format == "csv" else table.to_json() + "\n")
    return status


def cmd_umatrix(args, stdout) -> int:
    jmax = _parse_j(args.jmax, "jmax")
    qp = _parse_q(args.q, int(2 * jmax) + 1)
    try:
        variant = parse_variant(args.variant)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = cgc.u_matrix_records(qp, jmax, variant)
    cols = ["i", "j", "m", "j''", "m''", "re", "im"]
    if args.format == "json":
        stdout.write(json.dumps({"q": qp.label(), "variant": getattr(variant, "name", "exact63"),
                                 "columns": cols, "rows": rows}, indent=2) + "\n")
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([*r[:5], repr(r[5]), repr(r[6])])
        stdout.write(buf.getvalue())
    return EXIT_PASS


def cmd_list(args, stdout) -> int:
    for spec in SUITES.values():
        kind = "exact" if spec.point_free and spec.name != "classical-limit" else "numeric"
        stdout.write(f"{spec.name:20s} {kind:8s} [{', '.join(spec.modules)}] {spec.description}\n")
    return EXIT_PASS


COMMANDS = {"verify": cmd_verify, "cgc": cmd_cgc, "umatrix": cmd_umatrix,
            "list-suites": cmd_list}


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        if not args.command:
            parser.print_help(stdout)
            return EXIT_USAGE
        return COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        sys.stderr.write(f"qmodel: error: {exc}\n")
        return EXIT_USAGE
    except Exception:
        sys.stderr.write(traceback.format_exc())
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())
