"""Command-line interface: ``metadehn {eval,fill,verify,scan,oracle,table,embed}``.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

from .embeddings import bs_into_gamma, lambda_into_sol, lamplighter_embed
from .filling import (
    STAGES,
    NotNullHomotopic,
    ParameterError,
    fill,
    read_certificate,
    verify_filling,
    write_certificate,
)
from .model import GroupModel, HypothesisError, ModelError, lambda_model, parse_model
from .oracle import (
    bfs_search,
    bs_presentation,
    corridor_area,
    lambda_presentation,
    parse_presentation,
    random_null_word,
    z2_presentation,
)
from .words import WordSyntaxError, format_word, parse_word

CSV_HEADER = ["model", "seed", "n", "area", "area_abelian", "area_transport", "area_swap", "area_combine", "ms"]

OK, VERIFY_FAILED, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def load_model(source: str) -> GroupModel:
    try:
        if os.path.exists(source):
            with open(source) as fh:
                return parse_model(fh.read())
        return parse_model(source)
    except ModelError as exc:
        raise InputError(f"model: {exc}") from exc


def _word_text(args) -> str:
    if args.word is not None:
        return args.word
    if args.word_file is not None:
        try:
            with open(args.word_file) as fh:
                return fh.read()
        except OSError as exc:
            raise InputError(str(exc)) from exc
    raise InputError("give --word or --word-file")


def load_word(args, model: GroupModel):
    text = _word_text(args)
    try:
        return model.parse_word(text)
    except WordSyntaxError as exc:
        raise InputError(f"word: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"word: {exc}") from exc


def parse_lengths(text: str) -> List[int]:
    """``a:b:step`` (arithmetic), ``a:b:*f`` (geometric) or ``a,b,c``."""
    try:
        if ":" in text:
            a, b, step = text.split(":")
            a, b = int(a), int(b)
            out = []
            if step.startswith("*"):
                f = int(step[1:])
                if f < 2:
                    raise ValueError
                x = a
                while x <= b:
                    out.append(x)
                    x *= f
            else:
                st = int(step)
                if st < 1:
                    raise ValueError
                out = list(range(a, b + 1, st))
        else:
            out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad --lengths {text!r}") from None
    if not out or min(out) < 2:
        raise InputError(f"bad --lengths {text!r}")
    return out


def fit_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    lx = [math.log(x) for x in xs]
    ly = [math.log(max(y, 1)) for y in ys]
    mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
    sxx = sum((x - mx) ** 2 for x in lx)
    if sxx == 0:
        return float("nan")
    return sum((x - mx) * (y - my) for x, y in zip(lx, ly)) / sxx


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_eval(args) -> int:
    model = load_model(args.model)
    w = load_word(args, model)
    e = model.evaluate(w)
    print(model.format_element(e))
    print("identity" if e.is_identity() else "efficient form: " + format_word(model.efficient_form(e)))
    return OK


def cmd_fill(args) -> int:
    model = load_model(args.model)
    w = load_word(args, model)
    try:
        f = fill(w, model, args.k, args.base_len)
    except NotNullHomotopic as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (ParameterError, HypothesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    ok = verify_filling(w, f, model)
    print(f"area {f.area}")
    for name, a in f.stage_areas.items():
        print(f"  {name} {a}")
    if args.out:
        with open(args.out, "w") as fh:
            write_certificate(f, fh)
        print(f"certificate written to {args.out}")
    if not ok:
        print("error: certificate failed verification", file=sys.stderr)
        return VERIFY_FAILED
    return OK


def cmd_verify(args) -> int:
    model = load_model(args.model)
    w = load_word(args, model)
    try:
        with open(args.cert) as fh:
            f = read_certificate(fh.read(), model)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    except ValueError as exc:
        raise InputError(f"certificate: {exc}") from exc
    if verify_filling(w, f, model):
        print(f"verified: area {f.area}")
        return OK
    print("verification FAILED")
    return VERIFY_FAILED


def _scan_one(job) -> Tuple:
    model_source, target, seed, k, n0, family = job
    model = load_model(model_source)
    w = random_null_word(model, target, seed, family)
    t0 = time.perf_counter()
    f = fill(w, model, k, n0)
    ms = (time.perf_counter() - t0) * 1000
    ok = verify_filling(w, f, model)
    return (target, seed, len(w), f.area, f.stages, ms, ok)


def cmd_scan(args) -> int:
    model = load_model(args.model)
    lengths = parse_lengths(args.lengths)
    if args.samples < 1:
        raise InputError("--samples must be positive")
    jobs = [(args.model, n, args.seed + s, args.k, args.base_len, args.family)
            for n in lengths for s in range(args.samples)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_scan_one, jobs))
    else:
        results = [_scan_one(j) for j in jobs]
    results.sort(key=lambda r: (r[0], r[1]))
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_HEADER)
    for target, seed, n, area, st, ms, ok in results:
        wr.writerow([model.name, seed, n, area, *st, f"{ms:.1f}"])
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    worst = {}
    for target, seed, n, area, *_ in results:
        worst[target] = max(worst.get(target, 0), area)
    xs = sorted(worst)
    if len(xs) >= 2:
        slope = fit_slope(xs, [worst[x] for x in xs])
        const = max(r[3] / r[2] ** 2 for r in results)
        print(f"slope {slope:.3f}  max area/n^2 {const:.3f}", file=sys.stderr)
    if not all(r[-1] for r in results):
        print("error: a certificate failed verification", file=sys.stderr)
        return VERIFY_FAILED
    return OK


def load_presentation(source: str):
    if os.path.exists(source):
        with open(source) as fh:
            return parse_presentation(fh.read())
    parts = source.split()
    try:
        if parts == ["z2"]:
            return z2_presentation()
        if parts[0] == "bs" and len(parts) == 2:
            return bs_presentation(int(parts[1]))
        if parts[0] == "lambda" and len(parts) == 2:
            return lambda_presentation(int(parts[1]))
        return parse_presentation(source.replace("\\n", "\n"))
    except (ValueError, IndexError) as exc:
        raise InputError(f"presentation: {exc}") from exc


def cmd_oracle(args) -> int:
    p = load_presentation(args.presentation)
    text = _word_text(args)
    try:
        w = parse_word(text)
        p.encode(w)
    except (WordSyntaxError, ValueError) as exc:
        raise InputError(f"word: {exc}") from exc
    wr = csv.writer(sys.stdout, lineterminator="\n")
    wr.writerow(["word", "length", "area", "nodes"])
    if args.method == "corridor":
        if len(p.gens) != 2 or len(p.rels) != 1:
            raise InputError("corridor method needs a BS(1,n) presentation")
        n = sum(1 for x in p.rels[0] if x.name == p.gens[1]) - 1
        area = corridor_area(w, n, p.gens[0], p.gens[1])
        wr.writerow([format_word(w), len(w), "" if area is None else area, 0])
        return OK if area is not None else VERIFY_FAILED
    res = bfs_search(p, w, max_area=args.max_area, max_nodes=args.budget, cyclic=args.method == "cyclic")
    wr.writerow([format_word(w), len(w), "" if res.area is None else res.area, res.nodes])
    if res.area is None:
        print(f"no area found: {res.status}", file=sys.stderr)
        return VERIFY_FAILED
    return OK


def cmd_table(args) -> int:
    model = load_model(args.model)
    print(f"model {model.name}")
    for f in model.factors:
        print(f"  factor {f.describe()}")
    for w, row in model.contraction_table(args.radius):
        print(f"{format_word(w):>12}  contracts {{{', '.join(row['contracts'])}}}  "
              f"neutral {{{', '.join(row['neutral'])}}}  dilates {{{', '.join(row['dilates'])}}}")
    return OK


def cmd_embed(args) -> int:
    text = _word_text(args)
    try:
        w = parse_word(text)
        if args.map == "bs-gamma":
            print(format_word(bs_into_gamma(w, args.n)))
            return OK
        if args.map == "lambda-sol":
            model = lambda_model(args.n)
            print(model.format_element(lambda_into_sol(w, args.n, model)))
            return OK
        if args.map == "lamplighter":
            model = lambda_model(args.n)
            print(model.format_element(lamplighter_embed(w, args.n, model)))
            return OK
    except (WordSyntaxError, ValueError) as exc:
        raise InputError(f"word: {exc}") from exc
    raise InputError(f"unknown map {args.map!r}")


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="metadehn", description="Quadratic fillings in metabelian groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    def word_args(p):
        p.add_argument("--word")
        p.add_argument("--word-file")

    def model_arg(p):
        p.add_argument("--model", required=True, help="shortcut such as 'gamma 2' or a model file")

    p = sub.add_parser("eval", help="evaluate a word")
    model_arg(p)
    word_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("fill", help="fill a null-homotopic word")
    model_arg(p)
    word_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--base-len", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser("verify", help="check a certificate")
    model_arg(p)
    word_args(p)
    p.add_argument("--cert", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="area growth over random null-homotopic words")
    model_arg(p)
    p.add_argument("--lengths", default="32:512:*2")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int)
    p.add_argument("--base-len", type=int)
    p.add_argument("--family", default="chord", choices=["chord", "commutator"])
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("oracle", help="minimal area in a finite presentation")
    p.add_argument("--presentation", required=True, help="'z2', 'bs n', 'lambda p' or a file")
    word_args(p)
    p.add_argument("--budget", type=int, default=2_000_000, help="node budget")
    p.add_argument("--max-area", type=int, default=64)
    p.add_argument("--method", default="bfs", choices=["bfs", "cyclic", "corridor"])
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("table", help="contraction table")
    model_arg(p)
    p.add_argument("--radius", type=int, default=2)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("embed", help="embedding maps")
    p.add_argument("--map", required=True, choices=["bs-gamma", "lambda-sol", "lamplighter"])
    p.add_argument("--n", type=int, default=2, help="n for BS(1,n), or p")
    word_args(p)
    p.set_defaults(func=cmd_embed)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
