"""Command-line front end.

    puebounds table  [--q 4] [--p 0.1] [--rq R] [--raw] [--strict]
    puebounds curves [--grid 0:1:0.01] [--out FILE]
    puebounds pue    --in FILE [--p 0.1]
    puebounds lp     --n 8 --rq 0.5 [--p 0.1] [--q 4] [--form perp|direct] [--out FILE]
    puebounds verify [--level fast|full]

Exit codes: 0 success, 1 failed invariant or solver failure, 2 usage or
input error, 3 a not-applicable value was requested with --strict.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
import warnings
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

from . import asymptote as asy
from .code_lab import EnumFileError, SpectrumWarning, load_weight_enum, pue_eval
from .kraw_core import ParameterError
from .lp_bounds import build_primal, lp_bound_report, size_from_rate
from .simplex import to_lp_format

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NA = 0, 1, 2, 3
DASH = "--"
TABLE_GRID = [i / 10 for i in range(11)]


@dataclass
class RunConfig:
    command: str
    q: int = 4
    p: float = 0.1
    n: int | None = None
    rq: float | None = None
    grid: list[float] | None = None
    inp: str | None = None
    out: str | None = None
    level: str = "fast"
    form: str = "perp"
    raw: bool = False
    strict: bool = False

    def validate(self) -> None:
        if self.q < 2:
            raise ParameterError("--q must be >= 2")
        if not 0 <= self.p < (self.q - 1) / self.q:
            raise ParameterError(f"--p must lie in [0, {self.q - 1}/{self.q})")
        if self.rq is not None and not 0 <= self.rq <= 1:
            raise ParameterError("--rq must lie in [0, 1]")
        if self.command == "lp":
            if self.n is None or self.rq is None:
                raise ParameterError("lp needs --n and --rq")
            if not 1 <= self.n <= 50:
                raise ParameterError("--n must lie in [1, 50]")
        if self.command == "pue" and not self.inp:
            raise ParameterError("pue needs --in FILE")
        if self.level not in ("fast", "full"):
            raise ParameterError("--level is fast or full")


def parse_grid(spec: str) -> list[float]:
    """'a:b:step' -> inclusive grid a, a+step, ..., b."""
    try:
        a, b, step = (float(x) for x in spec.split(":"))
    except ValueError as exc:
        raise ParameterError(f"bad grid {spec!r}; expected a:b:step") from exc
    if step <= 0 or b < a:
        raise ParameterError(f"bad grid {spec!r}")
    count = int(round((b - a) / step)) + 1
    pts = [round(a + i * step, 12) for i in range(count)]
    if pts[-1] > b + 1e-12:
        pts.pop()
    for r in pts:
        if not 0 <= r <= 1:
            raise ParameterError(f"grid point {r} outside [0, 1]")
    return pts


def fmt(value: float | None, raw: bool = False) -> str:
    """Half-to-even rounding to 4 decimals; '--' for not-applicable."""
    if value is None:
        return DASH
    if raw:
        return repr(float(value))
    d = Decimal(repr(float(value))).quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN)
    return str(d + 0)  # normalizes -0.0000


def table_rows(q: int, p: float, grid=None):
    ex, am, hm = asy.curve_sweep(p, q, grid if grid is not None else TABLE_GRID)
    return list(zip(ex.points, am.points, hm.points))


def cmd_table(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    grid = [cfg.rq] if cfg.rq is not None else TABLE_GRID
    rows = table_rows(cfg.q, cfg.p, grid)
    out.write(f"{'R_Q':>5}  {'existence':>10}  {'A-MRRW':>10}  {'Hamming':>10}\n")
    missing = False
    for (r, e1, _), (_, e2, _), (_, e3, _) in rows:
        missing |= None in (e1, e2, e3)
        cells = [fmt(e, cfg.raw) for e in (e1, e2, e3)]
        out.write(f"{r:5.1f}  " + "  ".join(f"{c:>10}" for c in cells) + "\n")
    return EXIT_NA if cfg.strict and missing else EXIT_OK


def curves_csv(q: int, p: float, grid: list[float], raw: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["R_Q", "existence", "amrrw", "hamming", "status"])
    for (r, e1, s1), (_, e2, s2), (_, e3, s3) in table_rows(q, p, grid):
        cells = ["" if e is None else (repr(float(e)) if raw else fmt(e)) for e in (e1, e2, e3)]
        w.writerow([repr(r), *cells, "|".join((s1, s2, s3))])
    return buf.getvalue()


def cmd_curves(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    grid = cfg.grid if cfg.grid is not None else parse_grid("0:1:0.01")
    text = curves_csv(cfg.q, cfg.p, grid)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        out.write(text)
    return EXIT_OK


def cmd_pue(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        text = Path(cfg.inp).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {cfg.inp}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        B, Bp = load_weight_enum(text)
    except (EnumFileError, ValueError, ArithmeticError) as exc:
        print(f"error: {cfg.inp}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SpectrumWarning)
        val = pue_eval(B, Bp, cfg.p)
    out.write(f"P_ue = {val!r}\n")
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return EXIT_OK


def cmd_lp(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    t0 = time.perf_counter()
    try:
        rep = lp_bound_report(cfg.n, cfg.q, cfg.rq, cfg.p, cfg.form)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sol = rep.solution
    out.write(f"n={cfg.n} q={cfg.q} R_Q={cfg.rq} p={cfg.p} form={cfg.form}\n")
    out.write(f"status: {sol.status}  iterations: {sol.iterations}  certified: {sol.certified}\n")
    if cfg.out:
        sp = size_from_rate(cfg.q, cfg.n, 0.5 * (1 + cfg.rq))
        Path(cfg.out).write_text(to_lp_format(build_primal(cfg.n, cfg.q, sp, cfg.p, cfg.form)),
                                 encoding="utf-8")
        out.write(f"LP written to {cfg.out}\n")
    if sol.status != "optimal":
        return EXIT_FAIL
    out.write(f"primal bound: P_ue >= {rep.bound!r}\n")
    cert = rep.certificate
    if cert.feasible:
        out.write(f"dual certificate: feasible, bound {cert.bound!r}\n")
    else:
        out.write(f"dual certificate: INFEASIBLE at {cert.witness} ({cert.reason})\n")
    out.write(f"time: {time.perf_counter() - t0:.3f} s\n")
    ok = cert.feasible and abs(cert.bound - rep.bound) <= 1e-7
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    from .checks import run_suite

    failed = []
    for res in run_suite(cfg.level):
        tag = "PASS" if res.ok else "FAIL"
        out.write(f"{tag} {res.name}: {res.detail} ({res.seconds:.2f} s)\n")
        if not res.ok:
            failed.append(res.name)
    if failed:
        out.write("failed: " + ", ".join(failed) + "\n")
        return EXIT_FAIL
    out.write("all checks passed\n")
    return EXIT_OK


COMMANDS = {"table": cmd_table, "curves": cmd_curves, "pue": cmd_pue, "lp": cmd_lp, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="puebounds", description="Undetected-error bounds for quantum codes")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--q", type=int, default=4)
        sp.add_argument("--p", type=float, default=0.1)

    sp = sub.add_parser("table", help="exponent table on R_Q = 0, 0.1, ..., 1")
    common(sp)
    sp.add_argument("--rq", type=float)
    sp.add_argument("--raw", action="store_true", help="full precision values")
    sp.add_argument("--strict", action="store_true", help="exit 3 on any not-applicable entry")

    sp = sub.add_parser("curves", help="CSV of the three exponent curves")
    common(sp)
    sp.add_argument("--grid", type=str, default="0:1:0.01")
    sp.add_argument("--out", type=str)

    sp = sub.add_parser("pue", help="P_ue of a weight-enumerator file")
    common(sp)
    sp.add_argument("--in", dest="inp", type=str, required=True)

    sp = sub.add_parser("lp", help="finite-length LP lower bound")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--rq", type=float, required=True)
    sp.add_argument("--form", choices=("perp", "direct"), default="perp")
    sp.add_argument("--out", type=str, help="also write the LP in CPLEX LP format")

    sp = sub.add_parser("verify", help="run invariant suites")
    sp.add_argument("--level", choices=("fast", "full"), default="fast")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for key in ("q", "p", "n", "rq", "inp", "out", "level", "form", "raw", "strict"):
        if hasattr(ns, key):
            setattr(cfg, key, getattr(ns, key))
    if getattr(ns, "grid", None) is not None:
        cfg.grid = parse_grid(ns.grid)
    return cfg


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        cfg.validate()
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
