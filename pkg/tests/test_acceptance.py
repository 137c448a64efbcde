"""Acceptance criteria.  Each test records one PASS/FAIL line, printed in the
terminal summary; tolerances are the module constants below."""
import itertools
import random
import time

import pytest

from metadehn.cli import fit_slope
from metadehn.filling import fill, fill_abelian, transport, verify_filling
from metadehn.model import CONTRACTS, HypothesisError, bs_ambient, gamma, lambda_model, model_from_shortcut, rank_one
from metadehn.oracle import (bfs_search, bs_presentation, bs_witness_word, corridor_area, lambda_presentation,
                             random_null_word, random_unit_letter, random_word, z2_presentation)
from metadehn.embeddings import lambda_word
from metadehn.words import Gen, Vec, commutator, inverse, inverse_letter, parse_word, power

SOUNDNESS_WORDS = 200
SOUNDNESS_MAX_LEN = 256
SOUNDNESS_BUDGET_S = 300.0
GROWTH_GRID = (32, 64, 128, 256, 512)
GROWTH_SAMPLES = 20
GROWTH_SLOPE = (1.0, 2.3)
GROWTH_BUDGET_S = 600.0
TRANSPORT_LENGTHS = (8, 16, 32, 64, 128, 256)
TRANSPORT_SAMPLES = 10
TRANSPORT_C0 = 1.0
EFFICIENCY_WORDS = 1000
EFFICIENCY_SLOPE = 1.1
Z2_MAX_LEN = 8
BS_AREAS = {1: 2, 2: 6, 3: 14, 4: 30}
BS_BFS_CONFIRMED = (1, 2)
BS_BUDGET_S = 120.0
RANK_ONE_SLOPE = 1.3
HYPOTHESIS_RADIUS = 12

SOUNDNESS_MODELS = ("gamma 2", "gamma 6", "lambda 2", "sol 3 2")


def _schedule(count, lo, hi):
    """Log-uniform target lengths from ``lo`` to ``hi``."""
    return [round(lo * (hi / lo) ** (i / (count - 1))) for i in range(count)]


def _null_word_upto(model, max_len, seed, family):
    """A random null-homotopic word of length at most ``max_len``, as long as
    the generator allows."""
    target = max_len
    while True:
        w = random_null_word(model, target, seed, family)
        if len(w) <= max_len or target <= 2:
            return w
        target = max(2, target * max_len // len(w) - 1)


def test_soundness(report):
    t0 = time.perf_counter()
    failures = []
    longest = 0
    for name in SOUNDNESS_MODELS:
        model = model_from_shortcut(name)
        for i, target in enumerate(_schedule(SOUNDNESS_WORDS, 8, SOUNDNESS_MAX_LEN)):
            family = "commutator" if i % 4 == 3 else "chord"
            w = _null_word_upto(model, target, 1000 + i, family)
            longest = max(longest, len(w))
            f = fill(w, model)
            if not verify_filling(w, f, model):
                failures.append((name, i))
    elapsed = time.perf_counter() - t0
    ok = not failures and longest <= SOUNDNESS_MAX_LEN and elapsed <= SOUNDNESS_BUDGET_S
    report(1, "soundness", ok,
           f"{len(SOUNDNESS_MODELS)}x{SOUNDNESS_WORDS} words, longest {longest}, "
           f"{len(failures)} failures, {elapsed:.0f}s (budget {SOUNDNESS_BUDGET_S:.0f}s)")
    assert not failures
    assert longest <= SOUNDNESS_MAX_LEN
    assert elapsed <= SOUNDNESS_BUDGET_S


def _growth(model, grid, samples, seed0=0):
    worst, const = {}, 0.0
    for n in grid:
        for s in range(samples):
            w = random_null_word(model, n, seed0 + s)
            area = fill(w, model).area
            worst[n] = max(worst.get(n, 0), area)
            const = max(const, area / len(w) ** 2)
    xs = sorted(worst)
    return fit_slope(xs, [worst[x] for x in xs]), const, worst


def test_quadratic_growth(report):
    t0 = time.perf_counter()
    lines, ok = [], True
    for name in ("gamma 2", "lambda 2"):
        slope, A, worst = _growth(model_from_shortcut(name), GROWTH_GRID, GROWTH_SAMPLES)
        ok &= GROWTH_SLOPE[0] <= slope <= GROWTH_SLOPE[1]
        lines.append(f"{name} slope {slope:.3f} A {A:.3f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed <= GROWTH_BUDGET_S
    report(2, "quadratic growth", ok, "; ".join(lines) + f"; {elapsed:.0f}s")
    assert ok


def _transport_sample(model, length, rng):
    """``(s, v)`` with ``v`` and ``s.v`` in the unit ball."""
    while True:
        s = tuple(Gen(rng.choice(model.basis), rng.choice((1, -1))) for _ in range(length))
        w = random_unit_letter(model, rng)
        i = model.factor_index[w.factor]
        v = model.act_word(inverse(s), i, w.value)
        if model.factors[i].in_unit_ball(v):
            return s, Vec(w.factor, v)


def test_transport_bound(report):
    lines, ok = [], True
    for name in SOUNDNESS_MODELS:
        model = model_from_shortcut(name)
        rng = random.Random(7)
        c0 = 0.0
        for L in TRANSPORT_LENGTHS:
            for _ in range(TRANSPORT_SAMPLES):
                s, v = _transport_sample(model, L, rng)
                w, f = transport(s, v, model)
                assert verify_filling(s + (v,) + inverse(s) + (inverse_letter(w),), f, model)
                c0 = max(c0, f.area / L ** 2)
        ok &= c0 <= TRANSPORT_C0
        lines.append(f"{name} c0 {c0:.3f}")
    report(3, "transport area <= c0 |s|^2", ok, "; ".join(lines) + f" (bound {TRANSPORT_C0})")
    assert ok


def test_efficiency(report):
    lines, ok = [], True
    for name in SOUNDNESS_MODELS + ("rank1 2",):
        model = model_from_shortcut(name)
        C = model.efficiency_constant
        rng = random.Random(11)
        xs, ys, worst = [], [], 0.0
        for _ in range(EFFICIENCY_WORDS):
            w = random_word(model, rng.randint(1, 256), rng)
            n = len(model.efficient_form(model.evaluate(w)))
            worst = max(worst, n / len(w))
            xs.append(len(w))
            ys.append(max(n, 1))
        slope = fit_slope(xs, ys)
        ok &= worst <= C and slope <= EFFICIENCY_SLOPE
        lines.append(f"{name} C' {C} worst {worst:.2f} slope {slope:.3f}")
    report(4, "efficiency", ok, "; ".join(lines))
    assert ok


def test_z2_oracle(report):
    model = gamma(2)
    pres = z2_presentation()
    letters = [Gen("a"), Gen("a", -1), Gen("b"), Gen("b", -1)]
    checked, bad = 0, []
    cache = {}
    for L in range(0, Z2_MAX_LEN + 1, 2):
        for w in itertools.product(letters, repeat=L):
            if any(model.a_vector(w)):
                continue
            key = tuple(w)
            if key not in cache:
                cache[key] = bfs_search(pres, w, max_area=20).area
            oracle = cache[key]
            ours = fill_abelian(w, model).area
            checked += 1
            if oracle is None or oracle > ours:
                bad.append(w)
    fixture = parse_word("a^2 b a^-2 b^-1")
    fa = fill_abelian(fixture, model).area
    fo = bfs_search(pres, fixture).area
    ok = not bad and fa == 2 and fo == 2
    report(5, "Z^2 oracle consistency", ok,
           f"{checked} words of length <= {Z2_MAX_LEN}, {len(bad)} violations; a^2 b a^-2 b^-1: fill {fa}, oracle {fo}")
    assert ok


def test_bs_exponential_contrast(report):
    t0 = time.perf_counter()
    areas = {k: corridor_area(bs_witness_word(k)) for k in BS_AREAS}
    pres = bs_presentation(2)
    bfs = {k: bfs_search(pres, bs_witness_word(k), max_area=10, cyclic=True).area for k in BS_BFS_CONFIRMED}
    elapsed = time.perf_counter() - t0
    seq = [areas[k] for k in sorted(areas)]
    ok = (areas == BS_AREAS
          and all(a < b for a, b in zip(seq, seq[1:]))
          and areas[4] >= 2 * areas[3]
          and all(bfs[k] == areas[k] for k in bfs)
          and elapsed <= BS_BUDGET_S)
    report(6, "BS(1,2) exponential contrast", ok,
           f"areas {seq}, breadth-first search agrees for k in {list(bfs)}, {elapsed:.0f}s")
    assert ok


# the claimed classification: word -> factors it should contract
CLAIMED_TABLE = {
    "b a^-1": lambda m: {"Vm"} | {f.id for f in m.factors if f.kind == "padic"},
    "b^-1 a^-1": lambda m: {"Vp"} | {f.id for f in m.factors if f.kind == "padic"},
    "a^-1": lambda m: {"Vp", "Vm"},
}


@pytest.mark.xfail(strict=True, reason="a^-1 dilates every p-adic factor, so the first two rows cannot hold")
def test_contraction_table_claims(report):
    mismatches = []
    for n in (2, 6):
        m = gamma(n)
        for text, want in CLAIMED_TABLE.items():
            z = m.a_vector(parse_word(text))
            got = {f.id for i, f in enumerate(m.factors) if m.classify_vector(z, i) == CONTRACTS}
            if got != want(m):
                mismatches.append(f"gamma {n} {text}: contracts {sorted(got)}")
    report(7, "contraction table", not mismatches, "; ".join(mismatches) or "all rows reproduced")
    assert not mismatches


def test_lambda_relators(report):
    bad = []
    for p in (2, 3, 5):
        m = lambda_model(p)
        for r in lambda_presentation(p).rels:
            if not m.evaluate(lambda_word(r, p, m)).is_identity():
                bad.append((p, r))
        conj = {k: power((Gen("t"),), k) + (Gen("a"),) + power((Gen("t"),), -k) for k in range(-6, 7)}
        for k, l in itertools.combinations(range(-6, 7), 2):
            if not m.evaluate(lambda_word(commutator(conj[k], conj[l]), p, m)).is_identity():
                bad.append((p, k, l))
    report(8, "Lambda_p relators", not bad, f"p in (2, 3, 5): {len(bad)} failures")
    assert not bad


def test_rank_one(report):
    slope, A, _ = _growth(rank_one(2), GROWTH_GRID, GROWTH_SAMPLES)
    ok = slope <= RANK_ONE_SLOPE
    report(9, "rank-one growth", ok, f"slope {slope:.3f} (bound {RANK_ONE_SLOPE}), A {A:.3f}")
    assert ok


def test_hypothesis_failure(report):
    m = bs_ambient(2)
    try:
        m.find_common_contraction(0, 1, radius=HYPOTHESIS_RADIUS)
    except HypothesisError as e:
        msg, ok = str(e), True
    else:
        msg, ok = "a common contraction was found", False
    report(10, "hypothesis failure detected", ok, msg)
    assert ok
