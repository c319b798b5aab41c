"""Command line: ``capkit {classify,diagram,scan,verify,build}``.

Exit codes: 0 success, 1 verification failure / uncertified infeasibility /
budget exhausted, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import capfile
from .caps import CapSet
from .config import RunConfig

ALIASES = {"Δ686": "D686", "delta686": "D686", "Delta686": "D686", "45": "45-cap"}


class UsageError(Exception):
    pass


def _triple_arg(text: str) -> tuple[int, int, int]:
    try:
        t = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b,c got {text!r}") from None
    if len(t) != 3:
        raise argparse.ArgumentTypeError(f"expected three counts, got {text!r}")
    return t


def _config(args) -> RunConfig:
    return RunConfig(
        threads=args.threads,
        chunk_limit=getattr(args, "chunk_limit", None),
        time_limit=getattr(args, "time_limit", None),
        catalog=getattr(args, "catalog", None) or "catalog",
    )


# --------------------------------------------------------------------------
# classify


def cmd_classify(args) -> int:
    from .canon import symmetry_group
    from .classify import classify

    if not 1 <= args.dim <= 4:
        raise UsageError("--dim must be between 1 and 4")
    if args.dim == 4 and args.min_size < 18:
        raise UsageError("dimension 4 supports --min-size 18 or more")
    classes = classify(args.dim, args.min_size)
    out = Path(args.out)
    rows = ["internal_id\tsize\tsymmetry_order"]
    for c in classes:
        d = out / f"n{args.dim}" / f"s{c.rep.size}"
        d.mkdir(parents=True, exist_ok=True)
        capfile.write(d / f"{c.label.internal_id}.cap", c.rep, [f"class {c.label.internal_id}"])
        rows.append(f"{c.label.internal_id}\t{c.rep.size}\t{symmetry_group(c.rep).order}")
    (out / "classes.tsv").write_text("\n".join(rows) + "\n")
    sizes: dict[int, int] = {}
    for c in classes:
        sizes[c.rep.size] = sizes.get(c.rep.size, 0) + 1
    print(f"{len(classes)} classes written to {out}")
    for s in sorted(sizes, reverse=True):
        print(f"  size {s}: {sizes[s]}")
    return 0


# --------------------------------------------------------------------------
# diagram


def cmd_diagram(args) -> int:
    from .diagram import DiagramLine, DiagramSpec, infeasible_by_line, render, solve_distribution

    try:
        line = DiagramLine.parse(args.line) if args.line else None
        spec = DiagramSpec(args.dim, args.size, tuple(args.forbid or ()), line)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.out:
        tsv, svg = render(spec, args.out)
        print(f"wrote {tsv} and {svg}")
    if line is not None:
        if not spec.allowed:
            print("INFEASIBLE: no allowed point-count triples")
            return 0
        cert = infeasible_by_line(spec)
        if cert == "inconclusive":
            print(f"not certified: the line {line} does not separate the centroid")
            return 1
        print(cert)
        return 0
    sols = solve_distribution(spec, budget=args.budget)
    if not sols:
        print(f"INFEASIBLE n={args.dim} s={args.size}: no direction-count distribution")
        return 0
    print(f"{len(sols)} distribution(s)")
    for i, sol in enumerate(sols[: args.show]):
        body = ", ".join(f"{{{a},{b},{c}}}x{k}" for (a, b, c), k in sorted(sol.items(), reverse=True))
        print(f"  [{i}] {body}")
    return 0


# --------------------------------------------------------------------------
# scan


def _resolve(token: str, args, cache: dict) -> CapSet:
    if Path(token).is_file():
        return capfile.read(token)
    if token == "empty":
        return CapSet.empty(args.dim - 1)
    if "cat" not in cache:
        from .catalog import catalog_load

        try:
            cache["cat"] = catalog_load(args.catalog, deep=False)
        except Exception as e:
            raise UsageError(f"cannot resolve {token!r}: {e}") from None
    try:
        return cache["cat"].find(ALIASES.get(token, token)).rep
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None


def cmd_scan(args) -> int:
    from .search import BudgetExceeded, ScanTask, scan_pair

    cfg = _config(args)
    cache: dict = {}
    A = _resolve(args.left, args, cache)
    B = _resolve(args.right, args, cache)
    if A.n != B.n:
        raise UsageError("left and right caps have different dimensions")
    task = ScanTask(A, B, tallies=tuple(args.tally or ()), mode=args.mode)
    try:
        res = scan_pair(task, checkpoint=args.resume, time_limit=cfg.time_limit, threads=cfg.threads, chunk_limit=cfg.chunk_limit)
    except BudgetExceeded as e:
        p = e.partial
        print(f"budget exceeded: {e}")
        if p is not None:
            print(f"partial max_middle >= {p.max_middle}")
        if args.resume:
            print(f"resume with --resume {args.resume}")
        return 1
    print(f"left {A.size} right {B.size} dim {A.n + 1}")
    print(f"max_middle {res.max_middle}")
    print(f"total {res.total}")
    for k in sorted(res.tallies):
        print(f"tally >= {k}: {res.tallies[k]}")
    print(f"probe >= 7 allowed: weight {res.probe_weight}, not a 9-point cap: {res.probe_violations}")
    print(f"digest {res.digest}")
    if args.witnesses:
        out = Path(args.witnesses)
        out.mkdir(parents=True, exist_ok=True)
        for i, W in enumerate(res.witnesses(limit=args.max_witnesses)):
            capfile.write(out / f"witness{i:03d}.cap", W, [f"scan {args.left} / {args.right}"])
    return 0


# --------------------------------------------------------------------------
# verify and build


def cmd_verify(args) -> int:
    from .catalog import CatalogError, TierRequired, catalog_load
    from .verify import SUITES, verify

    names = list(SUITES) if args.suite == "all" else [args.suite]
    for n in names:
        if n not in SUITES:
            raise UsageError(f"unknown suite {n!r}; known: {', '.join(SUITES)}")
    try:
        cat = catalog_load(args.catalog, deep=True)
    except CatalogError as e:
        print(f"FAIL catalog: {e}")
        return 1
    ok = True
    tsv = []
    for n in names:
        try:
            rep = verify(n, cat)
        except TierRequired as e:
            if args.suite == "all":
                print(f"SKIP {n}: {e}")
                continue
            print(f"FAIL {n}: {e}")
            return 1
        print(rep.log())
        tsv.append(rep.tsv())
        ok &= rep.passed
    if args.tsv:
        Path(args.tsv).write_text("".join(tsv))
    return 0 if ok else 1


def cmd_build(args) -> int:
    from .catalog import catalog_build

    cat = catalog_build(args.catalog, args.tier, _config(args))
    print(f"catalog {cat.root}: tiers {' '.join(sorted(cat.tiers))}, {len(cat.entries)} entries")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="capkit", description="Caps in AG(n, 3): classification, scans, diagrams, checks.")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default $CAPKIT_THREADS or 1)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("classify", help="classify caps of a given dimension")
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--min-size", type=int, default=0)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_classify)

    d = sub.add_parser("diagram", help="point-count diagram, line certificate or exact distributions")
    d.add_argument("--dim", type=int, required=True)
    d.add_argument("--size", type=int, required=True)
    d.add_argument("--forbid", type=_triple_arg, action="append", help="forbidden triple a,b,c (repeatable)")
    d.add_argument("--line", help="alpha,beta,gamma for the line alpha*y = beta*x + gamma")
    d.add_argument("--out", help="directory for the TSV and SVG")
    d.add_argument("--budget", type=int, default=10**6)
    d.add_argument("--show", type=int, default=10, help="distributions to print")
    d.set_defaults(func=cmd_diagram)

    s = sub.add_parser("scan", help="two-layer scan of a class pair")
    s.add_argument("--left", required=True, help="class name, internal id, cap file, or 'empty'")
    s.add_argument("--right", required=True)
    s.add_argument("--tally", type=int, action="append")
    s.add_argument("--resume", help="checkpoint log (created if missing)")
    s.add_argument("--catalog", default="catalog")
    s.add_argument("--dim", type=int, default=5, help="ambient dimension for 'empty'")
    s.add_argument("--mode", choices=("symmetry", "none"), default="symmetry")
    s.add_argument("--chunk-limit", type=int)
    s.add_argument("--time-limit", type=float)
    s.add_argument("--witnesses", help="directory for witness cap files")
    s.add_argument("--max-witnesses", type=int, default=100)
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify", help="run verification suites against a catalog")
    v.add_argument("--suite", default="all")
    v.add_argument("--catalog", default="catalog")
    v.add_argument("--tsv", help="write the claim table here")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("build", help="build the catalog up to a tier")
    b.add_argument("--tier", default="T1", choices=("T0", "T1", "T2", "T3"))
    b.add_argument("--catalog", default="catalog")
    b.set_defaults(func=cmd_build)
    return p


def main(argv=None) -> int:
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"capkit: error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        if isinstance(e, capfile.CapFileError):
            print(f"capkit: error: {e}", file=sys.stderr)
            return 2
        raise


if __name__ == "__main__":
    sys.exit(main())
