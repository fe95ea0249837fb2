"""Command-line front end: ``fsstsp solve | bench | convergence``.

Exit codes: 0 success, 1 usage error, 2 input error, 3 internal invariant
violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

from .engine import FssParams, RunRecord, default_budget, relative_error, solve
from .instance import build_instance
from .local_search import InvariantError
from .tsplib import (KNOWN_BEST, REFERENCE_RESULTS, TsplibError, bundled_dir, load_known_best,
                     read_instance)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

SUITES = {
    "small": lambda dim: dim < 200,
    "medium": lambda dim: 200 <= dim < 1000,
    "large": lambda dim: dim >= 1000,
    "all": lambda dim: True,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default; usage errors are 1 here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nominal_dimension(name: str) -> int:
    digits = "".join(ch for ch in name if ch.isdigit())
    return int(digits) if digits else 0


def resolve_instance(spec: str) -> Path:
    """A path, or the bare name of a bundled instance (``eil51``)."""
    path = Path(spec)
    if path.exists():
        return path
    if path.suffix == "" and path.parent == Path("."):
        bundled = bundled_dir() / f"{spec}.tsp"
        if bundled.exists():
            return bundled
    raise FileNotFoundError(f"instance file not found: {spec}")


def _method(text: str) -> tuple[str, str]:
    try:
        method, ls = text.strip().lower().split("-")
    except ValueError:
        raise UsageError(f"bad method {text!r}; expected e.g. fss-3opt") from None
    if method not in ("grasp", "fss") or ls not in ("2opt", "3opt"):
        raise UsageError(f"bad method {text!r}; expected grasp|fss - 2opt|3opt")
    return method, ls


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _add_params(p: argparse.ArgumentParser) -> None:
    d = FssParams()
    p.add_argument("--budget", type=int, default=None,
                   help="solutions to generate (default 100|V|, 10|V| from 1000 nodes)")
    p.add_argument("--k", type=int, default=d.k, help="tours sampled per fixed set")
    p.add_argument("--n", type=int, default=d.n, help="elite pool the sample is drawn from")
    p.add_argument("--m", type=int, default=d.m, help="elite pool the base tour is drawn from")
    p.add_argument("--stag", type=int, default=d.stag, help="stagnation window")
    p.add_argument("--rcl", type=int, default=d.rcl_size, help="candidate list size")
    p.add_argument("--init-pop", type=int, default=d.init_population,
                   help="GRASP iterations before fixed sets are used")
    p.add_argument("--min-free", type=int, default=d.min_free,
                   help="smallest number of edges a fixed set leaves free")
    p.add_argument("--known-best", type=Path, default=None,
                   help="file of 'name value' lines overriding the built-in table")
    p.add_argument("--no-timing", action="store_true",
                   help="write zero for all timings so outputs are byte-reproducible")


def _params(args, method: str, ls: str, seed: int) -> FssParams:
    params = FssParams(k=args.k, n=args.n, m=args.m, init_population=args.init_pop,
                       stag=args.stag, rcl_size=args.rcl, local_search=ls,
                       max_solutions=args.budget, seed=seed, min_free=args.min_free,
                       method=method)
    try:
        params.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return params


def _known(args) -> dict[str, int]:
    table = dict(KNOWN_BEST)
    if args.known_best is not None:
        table.update(load_known_best(args.known_best))
    return table


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fsstsp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("--instance", required=True, help=".tsp path or bundled instance name")
    p.add_argument("--method", choices=("grasp", "fss"), default="fss")
    p.add_argument("--ls", choices=("2opt", "3opt"), default="3opt")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--convergence-out", type=Path, default=None)
    p.add_argument("--tour-out", type=Path, default=None)
    _add_params(p)

    p = sub.add_parser("bench", help="run a suite of instances and methods")
    p.add_argument("--dir", type=Path, default=None,
                   help="directory of .tsp files (default: bundled instances)")
    p.add_argument("--suite", "--bench", dest="suite", choices=tuple(SUITES), default=None,
                   help="reference instance group; large is slow and not part of acceptance")
    p.add_argument("--instances", default=None, help="comma-separated instance names")
    p.add_argument("--methods", default="grasp-2opt,fss-2opt,grasp-3opt,fss-3opt")
    p.add_argument("--seeds", default="1")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", type=Path, default=None, help="write the suite CSV here")
    p.add_argument("--table", type=Path, default=None, help="write the text table here")
    _add_params(p)

    p = sub.add_parser("convergence", help="best-so-far traces for several seeds")
    p.add_argument("--instance", required=True)
    p.add_argument("--methods", default="grasp-2opt,fss-2opt")
    p.add_argument("--seeds", default="1,2,3,4,5,6,7,8,9,10")
    p.add_argument("--out", type=Path, default=None, help="CSV path (default stdout)")
    _add_params(p)
    return parser


# solve ----------------------------------------------------------------------

def write_convergence(records: Sequence[tuple[str, int, RunRecord]], out, timing: bool = True) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["method", "seed", "evaluation_index", "best_so_far", "elapsed_ms"])
    for label, seed, rec in records:
        for ev, _, best, elapsed, _ in rec.trace(timing):
            w.writerow([label, seed, ev, best, f"{elapsed * 1000.0:.3f}"])


def cmd_solve(args) -> int:
    path = resolve_instance(args.instance)
    raw = read_instance(path)
    params = _params(args, args.method, args.ls, args.seed)
    inst = build_instance(raw, params.rcl_size)
    rec = solve(inst, params)
    kb = _known(args).get(raw.name)
    lines = [
        f"instance     {raw.name} ({raw.dimension} nodes)",
        f"method       {params.label}",
        f"seed         {params.seed}",
        f"best length  {rec.best_length}",
    ]
    if kb is not None:
        lines += [f"known best   {kb}",
                  f"rel. error   {relative_error(rec.best_length, kb):.2f}%"]
    lines += [f"evaluations  {rec.evaluations}",
              f"size changes {rec.size_switches} (removed {rec.sizes_removed})"]
    if not args.no_timing:
        lines.append(f"wall time    {rec.wall_time:.2f} s")
    print("\n".join(lines))
    if args.convergence_out is not None:
        with open(args.convergence_out, "w", newline="", encoding="utf-8") as fh:
            write_convergence([(params.label, params.seed, rec)], fh, not args.no_timing)
    if args.tour_out is not None:
        args.tour_out.write_text(rec.best_tour.to_tsplib(raw.name), encoding="utf-8")
    return EXIT_OK


# bench ----------------------------------------------------------------------

@dataclass
class BenchRow:
    instance: str
    method: str
    seed: int
    dimension: int = 0
    best: Optional[int] = None
    known_best: Optional[int] = None
    rel_error: Optional[float] = None
    evaluations: int = 0
    wall_time: float = 0.0
    status: str = "ok"


@dataclass
class SuiteReport:
    rows: list[BenchRow]

    def methods(self) -> list[str]:
        seen: dict[str, None] = {}
        for r in self.rows:
            seen.setdefault(r.method)
        return list(seen)

    def aggregate(self) -> dict[str, tuple[int, Optional[float]]]:
        """Per method: (runs reaching the known best, mean relative error)."""
        out = {}
        for m in self.methods():
            errs = [r.rel_error for r in self.rows if r.method == m and r.rel_error is not None]
            hits = sum(1 for e in errs if e == 0.0)
            out[m] = (hits, round(sum(errs) / len(errs), 4) if errs else None)
        return out

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["instance", "method", "seed", "dimension", "best", "known_best",
                    "rel_error", "evaluations", "wall_time", "status"])
        for r in self.rows:
            w.writerow([r.instance, r.method, r.seed, r.dimension, _blank(r.best),
                        _blank(r.known_best),
                        "" if r.rel_error is None else f"{r.rel_error:.2f}",
                        r.evaluations, f"{r.wall_time if timing else 0.0:.3f}", r.status])
        return buf.getvalue()

    def to_table(self, timing: bool = True) -> str:
        head = ["instance", "method", "seed", "best", "known", "err%", "evals", "time[s]", "status"]
        body = [[r.instance, r.method, str(r.seed), _blank(r.best), _blank(r.known_best),
                 "" if r.rel_error is None else f"{r.rel_error:.2f}", str(r.evaluations),
                 f"{r.wall_time if timing else 0.0:.1f}", r.status] for r in self.rows]
        widths = [max(len(x) for x in col) for col in zip(head, *body)] if body else [len(h) for h in head]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        lines = [fmt.format(*head), fmt.format(*("-" * w for w in widths))]
        lines += [fmt.format(*row) for row in body]
        lines = [line.rstrip() for line in lines]
        lines.append("")
        for m, (hits, mean) in self.aggregate().items():
            mean_s = "n/a" if mean is None else f"{mean:.2f}"
            lines.append(f"{m}: known best reached {hits}, average relative error {mean_s}%")
        return "\n".join(lines) + "\n"


def _blank(v) -> str:
    return "" if v is None else str(v)


def _bench_one(task) -> BenchRow:
    path, name, label, seed, params, kb = task
    row = BenchRow(name, label, seed, known_best=kb)
    try:
        raw = read_instance(path)
        row.dimension = raw.dimension
        inst = build_instance(raw, params.rcl_size)
        rec = solve(inst, params)
    except (OSError, TsplibError) as exc:
        row.status = f"input error: {exc}"
        return row
    except (InvariantError, AssertionError) as exc:
        row.status = f"invariant violation: {exc}"
        return row
    row.best = rec.best_length
    row.evaluations = rec.evaluations
    row.wall_time = rec.wall_time
    if kb is not None:
        row.rel_error = relative_error(rec.best_length, kb)
    return row


def _bench_instances(args) -> list[tuple[str, Optional[Path]]]:
    directory = args.dir if args.dir is not None else bundled_dir()
    if not directory.is_dir():
        raise FileNotFoundError(f"not a directory: {directory}")
    files = {p.name[:-4]: p for p in directory.glob("*.tsp")}
    if args.instances:
        names = [s.strip() for s in args.instances.split(",") if s.strip()]
    elif args.suite is not None:
        keep = SUITES[args.suite]
        names = [n for n in REFERENCE_RESULTS if keep(_nominal_dimension(n))]
    else:
        names = sorted(files, key=lambda n: (_nominal_dimension(n), n))
    return [(n, files.get(n)) for n in names]


def run_bench(args) -> SuiteReport:
    methods = [_method(m) for m in args.methods.split(",") if m.strip()]
    seeds = _int_list(args.seeds)
    known = _known(args)
    tasks, rows = [], []
    for name, path in _bench_instances(args):
        for method, ls in methods:
            for seed in seeds:
                label = f"{method}-{ls}"
                if path is None:
                    rows.append(BenchRow(name, label, seed, known_best=known.get(name),
                                         status="input error: instance file not found"))
                    continue
                tasks.append((path, name, label, seed, _params(args, method, ls, seed),
                              known.get(name)))
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows += list(ex.map(_bench_one, tasks))
    else:
        rows += [_bench_one(t) for t in tasks]
    order = {name: i for i, (name, _) in enumerate(_bench_instances(args))}
    morder = {f"{m}-{l}": i for i, (m, l) in enumerate(methods)}
    rows.sort(key=lambda r: (order[r.instance], morder[r.method], r.seed))
    return SuiteReport(rows)


def cmd_bench(args) -> int:
    report = run_bench(args)
    timing = not args.no_timing
    table = report.to_table(timing)
    sys.stdout.write(table)
    if args.csv is not None:
        args.csv.write_text(report.to_csv(timing), encoding="utf-8")
    if args.table is not None:
        args.table.write_text(table, encoding="utf-8")
    return EXIT_OK


# convergence ----------------------------------------------------------------

def cmd_convergence(args) -> int:
    path = resolve_instance(args.instance)
    raw = read_instance(path)
    methods = [_method(m) for m in args.methods.split(",") if m.strip()]
    seeds = _int_list(args.seeds)
    inst = build_instance(raw, args.rcl)
    records = []
    for method, ls in methods:
        for seed in seeds:
            params = _params(args, method, ls, seed)
            records.append((params.label, seed, solve(inst, params)))
    if args.out is None:
        write_convergence(records, sys.stdout, not args.no_timing)
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            write_convergence(records, fh, not args.no_timing)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "convergence": cmd_convergence}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fsstsp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, TsplibError) as exc:
        print(f"fsstsp: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, AssertionError) as exc:
        print(f"fsstsp: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
