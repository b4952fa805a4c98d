"""adicamata command line: ``build``, ``verify`` and ``orbit``.

Exit status: 0 success, 1 a check failed, 2 usage or internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import adic, serialization
from .pipeline import DEFAULT_RANGE, DEFAULT_SEED, SUITES, Pipeline, run_suite
from .transducers import apply

log = logging.getLogger("adicamata")

TARGETS = ("bratteli", "path-automaton", "adic", "zeta", "odometer", "M", "D", "lambda", "nucleus")


class UsageError(Exception):
    pass


def _seed() -> int:
    raw = os.environ.get("ADICAMATA_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"ADICAMATA_SEED must be an integer, got {raw!r}") from None


def _emit(text: str, out: str | None, filename: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / filename).write_text(text, encoding="utf-8")
    log.info("wrote %s", d / filename)


def cmd_build(args) -> int:
    p = Pipeline(mutate=args.mutate, seed=_seed())
    obj = p.target(args.target)
    if args.format == "dot":
        text = serialization.to_dot(obj, name=args.target)
    else:
        text = serialization.dumps(obj)
    _emit(text, args.out, f"{args.target}.{args.format}")
    return 0


def cmd_verify(args) -> int:
    seed = _seed()
    log.info("seed=%d range=%d", seed, args.range)
    p = Pipeline(mutate=args.mutate, seed=seed, oracle_range=args.range)
    p.automaton  # a bad --mutate spec is a usage error, not a failed check
    report = run_suite(p, args.suite)
    text = json.dumps(report, indent=2, ensure_ascii=False, sort_keys=False) + "\n"
    _emit(text, args.out, f"verify-{args.suite}.json")
    for r in report["checks"]:
        status = "pass" if r["pass"] else "FAIL"
        line = f"{status:4}  {r['name']}  [{r['anchor']}]"
        if not r["pass"]:
            line += f"  {r['error'] or r['witness'] or ''}"
        print(line, file=sys.stderr)
    return 0 if report["pass"] else 1


def orbit_rows(base: str, n: int, depth: int = 3, mutate: str | None = None) -> list[dict]:
    """n, start state, first bit and the Ω-window around the origin of μᵏ(z)
    for k = 0..n."""
    p = Pipeline(mutate=mutate)
    A = p.automaton
    z = adic.parse_path(base, A)
    if not z.is_infinite:
        raise ValueError("orbit needs an infinite path, e.g. (0_e0_d)@d")
    rows = []
    labels = z.labels
    for k in range(n + 1):
        if k:
            labels = apply(p.adic, labels)
        w = adic.PathWord(adic.start_state(A, labels), labels)
        window = adic.lambda_decode(w.take(depth), with_collar=True)
        rows.append({"n": k, "start": w.start, "bit": adic.label_bit(labels[0]),
                     "window": str(window), "path": str(w)})
    return rows


def cmd_orbit(args) -> int:
    rows = orbit_rows(args.base, args.range, args.depth, args.mutate)
    if args.format == "json":
        _emit(json.dumps(rows, indent=2, ensure_ascii=False) + "\n", args.out, "orbit.json")
        return 0
    width = max(len(r["window"]) for r in rows)
    lines = [f"{'n':>4}  start  bit  {'window':<{width}}  path"]
    for r in rows:
        lines.append(f"{r['n']:>4}  {r['start']:^5}  {r['bit']:^3}  {r['window']:<{width}}  {r['path']}")
    _emit("\n".join(lines) + "\n", args.out, "orbit.txt")
    return 0


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="log progress to stderr")
    ap = argparse.ArgumentParser(prog="adicamata", description=__doc__.splitlines()[0],
                                 parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="export an automaton or transducer", parents=[common])
    b.add_argument("target", choices=TARGETS)
    b.add_argument("--out", help="directory to write into (default: stdout)")
    b.add_argument("--format", choices=("json", "dot"), default="json")
    b.add_argument("--mutate", metavar="EDGE", help="delete an edge of the path automaton first")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run a check suite", parents=[common])
    v.add_argument("suite_pos", nargs="?", metavar="SUITE", choices=SUITES)
    v.add_argument("--suite", choices=SUITES)
    v.add_argument("--range", type=int, default=DEFAULT_RANGE, help="oracle range |n| ≤ N")
    v.add_argument("--mutate", metavar="EDGE", help="delete an edge, e.g. a,1_c,c")
    v.add_argument("--out", help="directory for the JSON report (default: stdout)")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("orbit", help="tabulate the μ-orbit of a path", parents=[common])
    o.add_argument("base", help="path spec prefix(cycle)@state, e.g. (0_e0_d)@d")
    o.add_argument("--range", type=int, default=8)
    o.add_argument("--depth", type=int, default=3, help="levels used for the Ω-window")
    o.add_argument("--format", choices=("table", "json"), default="table")
    o.add_argument("--mutate", metavar="EDGE")
    o.add_argument("--out")
    o.set_defaults(func=cmd_orbit)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)  # exits 2 on usage errors
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.command == "verify":
        if args.suite and args.suite_pos and args.suite != args.suite_pos:
            ap.error("conflicting suite names")
        args.suite = args.suite or args.suite_pos or "all"
        if args.range < 0:
            ap.error("--range must be nonnegative")
    if args.command == "orbit" and (args.range < 0 or args.depth < 0):
        ap.error("--range and --depth must be nonnegative")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"adicamata: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # bad path specs, bad mutation specs
        print(f"adicamata: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal error
        log.exception("internal error")
        print(f"adicamata: internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
