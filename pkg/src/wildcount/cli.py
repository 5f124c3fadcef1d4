"""Command-line front end: count, oracle, verify, sweep.

Exit codes: 0 success, 2 usage, 3 out of range, 4 resource cap, 5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product

from .counts import MAIN_SUM, OPEN_REGION, P2_UNRAMIFIED, P_DIVIDES_N, QueryParams, dispatch, region
from .errors import ParameterError, ResourceError, WildcountError
from .galois_ring import DEFAULT_ORACLE_DEGREE, p2_oracle_report
from .oracle import oracle_report
from .subspaces import DEFAULT_SUBSPACE_CAP
from .unitgroup import DEFAULT_GROUP_CAP
from .verify import DEFAULT_SEED, SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_RANGE, EXIT_RESOURCE, EXIT_VERIFY = 0, 2, 3, 4, 5
CSV_COLUMNS = ("p", "e", "f_base", "jump", "inertia", "branch", "formula", "oracle", "delta")


# -- argument parsing -----------------------------------------------------------

def _int_list(text: str) -> list[int]:
    """'3', '1,2,5' or '2..4' (inclusive), or a mix: '1,3..5'."""
    out: list[int] = []
    try:
        for chunk in text.split(","):
            if ".." in chunk:
                lo, hi = chunk.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(chunk))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty range")
    return sorted(set(out))


def _e_values(text: str):
    return "jump" if text == "jump" else _int_list(text)


def _point_args(sp):
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--e", type=int, default=None, help="defaults to the jump")
    sp.add_argument("--f-base", type=int, default=1)
    sp.add_argument("--jump", type=int, required=True)
    sp.add_argument("--inertia", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wildcount",
                                 description="Count Galois extensions of p-adic fields with one wild jump.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="closed-form count at one parameter point")
    _point_args(c)
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--cap", type=int, default=DEFAULT_SUBSPACE_CAP, help="invariant-subspace cap")

    o = sub.add_parser("oracle", help="exhaustive count at one parameter point")
    _point_args(o)
    o.add_argument("--include-full", action="store_true")
    o.add_argument("--format", choices=("json", "csv"), default="json")
    o.add_argument("--cap", type=int, default=DEFAULT_GROUP_CAP, help="unit-group order cap")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)

    s = sub.add_parser("sweep", help="grid sweep with a persistent results cache")
    s.add_argument("--p", type=_int_list, required=True)
    s.add_argument("--e", type=_e_values, default="jump", help="list/range, or 'jump' for e = n")
    s.add_argument("--f-base", type=_int_list, default=[1])
    s.add_argument("--jump", type=_int_list, required=True)
    s.add_argument("--inertia", type=_int_list, default=[1])
    s.add_argument("--engine", choices=("formula", "oracle", "both"), default="formula")
    s.add_argument("--include-full", action="store_true")
    s.add_argument("--format", choices=("json", "csv"), default="csv")
    s.add_argument("--cache", default=None, metavar="PATH")
    s.add_argument("--cap", type=int, default=DEFAULT_GROUP_CAP, help="unit-group order cap for the oracle")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--workers", type=int, default=1)
    return ap


def _params(args) -> QueryParams:
    e = args.e if args.e is not None else args.jump
    return QueryParams(args.p, e, args.f_base, args.jump, args.inertia)


# -- per-point evaluation ---------------------------------------------------------

def oracle_in_cap(params: QueryParams, cap: int = DEFAULT_GROUP_CAP) -> bool:
    branch = region(params)
    if branch in (MAIN_SUM, P_DIVIDES_N):
        return (params.p ** (params.f_base * params.f)) ** params.n <= cap
    if branch == P2_UNRAMIFIED:
        return params.f_base * params.f <= DEFAULT_ORACLE_DEGREE
    return False


def oracle_value(params: QueryParams, include_full: bool, cap: int = DEFAULT_GROUP_CAP):
    """(value, details) from the exhaustive engine appropriate to the branch."""
    branch = region(params)
    if branch in (MAIN_SUM, P_DIVIDES_N):
        rep = oracle_report(params.p, params.f_base, params.f, params.n, include_full, cap)
        per_h = {str(list(h.basis)): list(v) for h, v in rep.per_h.items()}
        return rep.total, {"valid_subgroups": rep.subgroups, "per_h": per_h}
    if branch == P2_UNRAMIFIED:
        rep = p2_oracle_report(params.f_base, params.f)
        return rep.total, {"valid_subgroups": rep.subgroups}
    raise ParameterError(f"no exhaustive engine for the {branch} region")


def evaluate_point(params: QueryParams, engine: str, include_full: bool, cap: int) -> dict:
    rec = {"params": params.as_dict(), "engine": engine, "include_full": include_full,
           "branch": region(params), "formula": None, "oracle": None, "delta": None}
    if engine in ("formula", "both"):
        res = dispatch(params)
        rec["status"] = res.status
        rec["formula"] = res.value if res.status != "out_of_range" else "out_of_range"
    if engine in ("oracle", "both"):
        rec["oracle"], _ = oracle_value(params, include_full, cap)
    if isinstance(rec["formula"], int) and isinstance(rec["oracle"], int):
        rec["delta"] = rec["formula"] - rec["oracle"]
    return rec


def _evaluate_star(args):
    return evaluate_point(*args)


# -- cache ----------------------------------------------------------------------

def cache_key(params: QueryParams, engine: str, include_full: bool) -> str:
    return json.dumps({"params": params.as_dict(), "engine": engine, "include_full": include_full},
                      sort_keys=True)


def load_cache(path: str | None) -> dict:
    out: dict = {}
    if not path or not os.path.exists(path):
        return out
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                continue  # torn final line from an interrupted run
            key = cache_key(QueryParams(**rec["params"]), rec["engine"], rec["include_full"])
            out[key] = rec
    return out


def render_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        p = rec["params"]
        w.writerow([p["p"], p["e"], p["f_base"], p["n"], p["f"], rec["branch"],
                    "" if rec["formula"] is None else rec["formula"],
                    "" if rec["oracle"] is None else rec["oracle"],
                    "" if rec["delta"] is None else rec["delta"]])
    return buf.getvalue()


def render_json(records) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


# -- subcommands ------------------------------------------------------------------

def cmd_count(args, out) -> int:
    params = _params(args)
    res = dispatch(params, cap=args.cap)
    if args.format == "json":
        out.write(res.to_json() + "\n")
    else:
        formula = res.value if res.status != "out_of_range" else "out_of_range"
        rec = {"params": params.as_dict(), "branch": res.branch, "formula": formula,
               "oracle": None, "delta": None}
        out.write(render_csv([rec]))
    return EXIT_RANGE if res.status == "out_of_range" else EXIT_OK


def cmd_oracle(args, out) -> int:
    params = _params(args)
    if region(params) == OPEN_REGION:
        out.write(json.dumps({"params": params.as_dict(), "status": "out_of_range"}) + "\n")
        return EXIT_RANGE
    formula = dispatch(params)
    value, details = oracle_value(params, args.include_full, args.cap)
    rec = {"params": params.as_dict(), "engine": "oracle", "include_full": args.include_full,
           "branch": formula.branch, "formula": formula.value, "oracle": value,
           "delta": formula.value - value, "details": details}
    if args.format == "json":
        out.write(json.dumps(rec, sort_keys=True) + "\n")
    else:
        out.write(render_csv([rec]))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    failed = 0
    for check in run_suite(args.suite, args.seed):
        out.write(json.dumps(check.to_dict(), sort_keys=True, default=str) + "\n")
        out.flush()
        failed += not check.passed
    return EXIT_VERIFY if failed else EXIT_OK


def sweep_points(args) -> list[QueryParams]:
    points = []
    for p, fb, n, f in product(args.p, args.f_base, args.jump, args.inertia):
        es = [n] if args.e == "jump" else args.e
        for e in es:
            points.append(QueryParams(p, e, fb, n, f))
    points = sorted(set(points))
    if args.engine in ("oracle", "both"):
        # the oracle only runs inside its caps; other points are dropped up front
        kept = [q for q in points if oracle_in_cap(q, args.cap)]
        if len(kept) < len(points):
            print(f"skipping {len(points) - len(kept)} points outside the oracle caps",
                  file=sys.stderr)
        points = kept
    return points


def cmd_sweep(args, out) -> int:
    points = sweep_points(args)
    cache = load_cache(args.cache)
    todo = [q for q in points if cache_key(q, args.engine, args.include_full) not in cache]
    results = {}
    jobs = [(q, args.engine, args.include_full, args.cap) for q in todo]
    fh = open(args.cache, "a", encoding="utf-8") if args.cache else None
    try:
        if args.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                stream = pool.map(_evaluate_star, jobs)
                for job, rec in zip(jobs, stream):
                    results[job[0]] = rec
                    if fh:
                        fh.write(json.dumps(rec, sort_keys=True) + "\n")
                        fh.flush()
        else:
            for job in jobs:
                rec = evaluate_point(*job)
                results[job[0]] = rec
                if fh:
                    fh.write(json.dumps(rec, sort_keys=True) + "\n")
                    fh.flush()
    finally:
        if fh:
            fh.close()
    records = []
    for q in points:
        rec = results.get(q) or cache[cache_key(q, args.engine, args.include_full)]
        records.append(rec)
    out.write(render_csv(records) if args.format == "csv" else render_json(records))
    return EXIT_OK


COMMANDS = {"count": cmd_count, "oracle": cmd_oracle, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except ParameterError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1
    except WildcountError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
