"""Command-line interface. Every command prints newline-delimited JSON records.

Exit codes: 0 for a completed computation (including negative mathematical
verdicts), 1 for a failed consistency check, 2 for unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .clustermaps import apply_word, laurent_check
from .exactalg import DimensionError
from .quantum import q_orbit_rank2
from .seed import RANK2_TYPES, MutationWord, Seed, SeedError, apply_word_to_seed, exchange_graph, mutate_seed
from .tropical import (
    CanonicalMapError,
    InfiniteTypeError,
    TropPoint,
    a2_canonical_IA,
    canonical_map_IX,
    find_nonneg_seed,
    pairing_Iprime,
    pairing_P,
    trop_apply_word,
)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

QUANTUM_TYPES = {"a1a1": (0, 0), "a2": (1, 1), "b2": (1, 2), "g2": (1, 3)}


class InputError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def emit(rec, out) -> None:
    out.write(json.dumps(_jsonable(rec), sort_keys=True) + "\n")


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"{path}: {e}") from e


def load_seed(path: str) -> Seed:
    obj = _read_json(path)
    if isinstance(obj, dict) and "seed" in obj and "eps" not in obj:
        obj = obj["seed"]
    try:
        return Seed.from_json(obj)
    except (SeedError, DimensionError, TypeError, ValueError, KeyError) as e:
        raise InputError(f"{path}: {e}") from e


def load_point(path: str, s: Seed, space: str | None = None) -> TropPoint:
    obj = _read_json(path)
    if isinstance(obj, dict) and "point" in obj:
        obj = obj["point"]
    if isinstance(obj, list):
        obj = {"coords": obj}
    try:
        if space is not None:
            obj = dict(obj, space=obj.get("space", space))
        return TropPoint.from_json(s, obj)
    except (TypeError, ValueError, KeyError) as e:
        raise InputError(f"{path}: {e}") from e


def parse_word(text: str, n: int) -> MutationWord:
    try:
        return MutationWord.parse(text, n)
    except (SeedError, ValueError) as e:
        raise InputError(f"bad word {text!r}: {e}") from e


def cmd_validate(args, out) -> int:
    obj = _read_json(args.seed)
    try:
        s = Seed.from_json(obj)
    except (SeedError, DimensionError, TypeError, ValueError, KeyError) as e:
        emit({"valid": False, "reason": str(e)}, out)
        return EXIT_OK
    emit({"valid": True, "n": s.n, "D": s.D, "mutable": list(s.mutable), "seed": s.to_json()}, out)
    return EXIT_OK


def cmd_mutate(args, out) -> int:
    s = load_seed(args.seed)
    try:
        emit(mutate_seed(s, args.k).to_json(), out)
    except SeedError as e:
        raise InputError(str(e)) from e
    return EXIT_OK


def cmd_word(args, out) -> int:
    s = load_seed(args.seed)
    w = parse_word(args.w, s.n)
    try:
        emit(apply_word_to_seed(s, w).to_json(), out)
    except SeedError as e:
        raise InputError(str(e)) from e
    return EXIT_OK


def cmd_orbit(args, out) -> int:
    s = load_seed(args.seed)
    w = parse_word(args.word, s.n)
    try:
        cm = apply_word(s, w, args.space)
    except SeedError as e:
        raise InputError(str(e)) from e
    report = laurent_check(s, w, args.space)
    emit({"space": args.space, "word": str(w), "seed": cm.seed_to.to_json(), "images": report}, out)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    s = load_seed(args.seed)
    g = exchange_graph(s, max_seeds=args.max)
    rec = {"finite": g.finite, "seeds": g.n_clusters, "classes": g.n_classes}
    if args.adjacency:
        rec = g.to_json()
    if not g.finite:
        rec["verdict"] = f"no closure within {args.max} clusters"
    emit(rec, out)
    return EXIT_OK


def cmd_tropical(args, out) -> int:
    s = load_seed(args.seed)
    p = load_point(args.point, s)
    w = parse_word(args.word, s.n)
    try:
        q = trop_apply_word(p, w)
    except SeedError as e:
        raise InputError(str(e)) from e
    emit({"seed": q.seed.to_json(), "point": q.to_json()}, out)
    return EXIT_OK


def cmd_pairing(args, out) -> int:
    s = load_seed(args.seed)
    a = load_point(args.a, s, "A")
    x = load_point(args.x, s, "X")
    if a.space != "A" or x.space != "X":
        raise InputError("pairing needs an A-point and an X-point")
    rec = {"P": pairing_P(s, a.coords, x.coords)}
    try:
        rec["Iprime"] = pairing_Iprime(s, a, x)
    except InfiniteTypeError as e:
        rec["Iprime"] = None
        rec["verdict"] = str(e)
    emit(rec, out)
    return EXIT_OK


def cmd_canonical_ix(args, out) -> int:
    s = load_seed(args.seed)
    l = load_point(args.l, s, "X")
    try:
        f = canonical_map_IX(s, l)
    except InfiniteTypeError as e:
        search = find_nonneg_seed(s, l).to_json()
        search.pop("word")
        emit({"verdict": str(e), "search": search}, out)
        return EXIT_OK
    except CanonicalMapError as e:
        emit({"verdict": "inconsistent", "error": str(e)}, out)
        return EXIT_FAIL
    emit({"l": list(l.coords), "IX": f.to_str([f"A{i + 1}" for i in range(s.n)]),
          "positive": f.is_nonnegative()}, out)
    return EXIT_OK


def cmd_quantum_orbit(args, out) -> int:
    b, c = QUANTUM_TYPES[args.type]
    h = RANK2_TYPES[(b, c)]
    xs = q_orbit_rank2(b, c, args.length)
    for m, x in enumerate(xs, start=1):
        emit({"type": args.type, "m": m, "X": x.to_str(["X1", "X2"])}, out)
    if args.length > h + 2:
        emit({"type": args.type, "period": h + 2,
              "periodic": all(xs[m + h + 2] == xs[m] for m in range(args.length - h - 2))}, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    seeds = None
    if args.seed:
        seeds = {args.seed: load_seed(args.seed)}
    passed = failed = 0
    worst = 0.0
    for rec in run_suite(args.suite, seeds, args.rng_seed):
        emit(rec, out)
        if rec["verdict"]:
            passed += 1
        else:
            failed += 1
        if isinstance(rec.get("residual"), float):
            worst = max(worst, rec["residual"])
    emit({"check": "summary", "suite": args.suite, "passed": passed, "failed": failed,
          "verdict": failed == 0, "max_residual": worst}, out)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_ia_a2(args, out) -> int:
    f = a2_canonical_IA(args.a, args.b)
    emit({"a": args.a, "b": args.b, "IA": f.to_str(["X", "Y"])}, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clusterens", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a seed file")
    p.add_argument("seed")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("mutate", help="mutate a seed in one direction")
    p.add_argument("seed")
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(fn=cmd_mutate)

    p = sub.add_parser("word", help="apply a mutation word to a seed")
    p.add_argument("seed")
    p.add_argument("-w", required=True, help='e.g. "0,1,s(0 1),0"')
    p.set_defaults(fn=cmd_word)

    p = sub.add_parser("orbit", help="coordinate images along a word")
    p.add_argument("seed")
    p.add_argument("--space", choices=["A", "X"], default="X")
    p.add_argument("--word", required=True)
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("classify", help="exchange graph size and seed classes")
    p.add_argument("seed")
    p.add_argument("--max", type=int, default=20000)
    p.add_argument("--adjacency", action="store_true", help="include the full graph")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("tropical", help="transport a tropical point along a word")
    p.add_argument("seed")
    p.add_argument("--point", required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(fn=cmd_tropical)

    p = sub.add_parser("pairing", help="tropical pairings of an A-point and an X-point")
    p.add_argument("seed")
    p.add_argument("-a", required=True)
    p.add_argument("-x", required=True)
    p.set_defaults(fn=cmd_pairing)

    p = sub.add_parser("canonical-ix", help="canonical function of a tropical X-point")
    p.add_argument("seed")
    p.add_argument("-l", required=True)
    p.set_defaults(fn=cmd_canonical_ix)

    p = sub.add_parser("quantum-orbit", help="rank-2 quantum orbit")
    p.add_argument("--type", choices=sorted(QUANTUM_TYPES), required=True)
    p.add_argument("--length", type=int, default=8)
    p.set_defaults(fn=cmd_quantum_orbit)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    p.add_argument("--seed", default=None, help="run seed-dependent suites on this seed only")
    p.add_argument("--rng-seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("ia-a2", help="type A2 canonical function I_A(a, b)")
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-b", type=int, required=True)
    p.set_defaults(fn=cmd_ia_a2)
    return ap


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args, out)
    except InputError as e:
        emit({"error": "input", "message": str(e)}, out)
        return EXIT_INPUT


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
