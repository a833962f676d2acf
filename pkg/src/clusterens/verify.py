"""Verification suites over the seed catalog.

Every suite is a generator of report records
``{check, seed, target, verdict, residual}``; ``verdict`` is ``True`` on
success. Randomised suites draw from the ``random.Random`` they are given.
"""

from __future__ import annotations

import random
from math import gcd

from .clustermaps import (
    a_mutation,
    apply_word,
    casimir_check,
    h_a_action_check,
    laurent_check,
    omega_invariance,
    p_commutes,
    poisson_invariance,
    random_word,
    x_mutation,
)
from .motivic import (
    PoleAlongOrbit,
    _coxeter,
    bloch_wigner,
    dilog_sum,
    dlog_shadow_check,
    h_a_invariance,
    mutation_defect_check,
    rank2_orbit,
    tame_symbol,
    vanishing_certificate,
    w_element,
    w_element_from_p,
)
from .exactalg import RatFunc
from .quantum import psi_checks, q_casimir_check, q_frobenius_check, q_mutation_square_check, q_orbit_rank2
from .seed import RANK2_TYPES, MutationWord, Seed, a_n_zigzag, kernel_lattices, markov_torus, mutate_seed, rank2
from .tropical import TropPoint, trop_a_mutate, trop_apply_word, trop_x_mutate

__all__ = ["catalog", "SUITES", "run_suite", "period_word", "DILOG_PAIRS"]

DILOG_PAIRS = [(0, 0), (1, 1), (1, 2), (2, 1), (1, 3), (3, 1)]


def catalog() -> dict:
    """The shipped seeds: rank-2 finite types, polygon seeds A_1..A_4 and the Markov seed."""
    out = {
        "A1xA1": rank2(0, 0),
        "A2": rank2(1, 1),
        "B2": rank2(1, 2),
        "G2": rank2(1, 3),
    }
    for n in range(1, 5):
        out[f"A{n}_polygon"] = a_n_zigzag(n)
    out["markov"] = markov_torus()
    return out


def period_word(h: int) -> MutationWord:
    return MutationWord.parse("0,s(0 1)", 2) * (h + 2)


def _rec(check, seed, target, ok, residual=None):
    return {"check": check, "seed": seed, "target": target, "verdict": bool(ok), "residual": residual}


def suite_involutions(seeds: dict, rng: random.Random):
    for name, s in seeds.items():
        for k in s.mutable:
            s2 = mutate_seed(s, k)
            yield _rec("seed_involution", name, k, mutate_seed(s2, k) == s)
            yield _rec("x_involution", name, k, x_mutation(s, k).then(x_mutation(s2, k)).is_identity())
            yield _rec("a_involution", name, k, a_mutation(s, k).then(a_mutation(s2, k)).is_identity())
            yield _rec("q_involution", name, k, q_mutation_square_check(s, k))
            ok = True
            for _ in range(10):
                x = TropPoint(s, tuple(rng.randint(-9, 9) for _ in range(s.n)))
                a = TropPoint(s, tuple(rng.randint(-9, 9) for _ in range(s.n)), "A")
                ok &= trop_x_mutate(trop_x_mutate(x, k), k).coords == x.coords
                ok &= trop_a_mutate(trop_a_mutate(a, k), k).coords == a.coords
            yield _rec("trop_involution", name, k, ok)


def suite_periods(seeds: dict, rng: random.Random):
    for (b, c), h in RANK2_TYPES.items():
        s = rank2(b, c)
        name = f"rank2({b},{c})"
        w = period_word(h)
        for space in ("A", "X"):
            yield _rec(f"period_{space}", name, str(w), apply_word(s, w, space).is_identity())
        step = MutationWord.parse("0,s(0 1)", 2)
        shorter = any(apply_word(s, step * p, "X").is_identity() for p in range(1, h + 2))
        yield _rec("period_X_minimal", name, h + 2, not shorter)
        ok = True
        for _ in range(20):
            x = TropPoint(s, (rng.randint(-20, 20), rng.randint(-20, 20)))
            a = TropPoint(s, (rng.randint(-20, 20), rng.randint(-20, 20)), "A")
            ok &= trop_apply_word(x, w).coords == x.coords
            ok &= trop_apply_word(a, w).coords == a.coords
        yield _rec("period_tropical", name, str(w), ok)
        xs = q_orbit_rank2(b, c, 2 * (h + 2) + 2)
        yield _rec("period_quantum", name, h + 2,
                   all(xs[m + h + 2] == xs[m] for m in range(h + 2)))


def suite_laurent(seeds: dict, rng: random.Random, count: int = 100, max_length: int = 8):
    names = list(seeds)
    for i in range(count):
        name = names[i % len(names)]
        s = seeds[name]
        if not s.mutable:
            continue
        w = random_word(s, rng.randint(1, max_length), rng)
        rep = laurent_check(s, w, "A")
        rec = _rec("laurent_A", name, str(w), all(r["laurent"] for r in rep))
        rec["positive"] = all(r["positive"] for r in rep)
        yield rec


def suite_poisson(seeds: dict, rng: random.Random):
    for name, s in seeds.items():
        for k in s.mutable:
            yield _rec("p_commutes", name, k, p_commutes(s, k))
            yield _rec("poisson_invariance", name, k, poisson_invariance(s, k))


def suite_omega(seeds: dict, rng: random.Random):
    for name, s in seeds.items():
        for k in s.mutable:
            yield _rec("omega_invariance", name, k, omega_invariance(s, k))
        yield _rec("dlog_shadow", name, None, dlog_shadow_check(s))


def suite_casimirs(seeds: dict, rng: random.Random):
    for name, s in seeds.items():
        kl, kr = kernel_lattices(s)
        for k in s.mutable:
            for a in kl:
                yield _rec("casimir", name, [k, list(a)], casimir_check(s, a, k))
                yield _rec("q_casimir", name, [k, list(a)], q_casimir_check(s, a, k))
            for b in kr:
                yield _rec("h_a_action", name, [k, list(b)], h_a_action_check(s, b, k))
        for b in kr:
            yield _rec("w_h_a_invariance", name, list(b), h_a_invariance(s, b))


def suite_frobenius(seeds: dict, rng: random.Random):
    for a in range(1, 5):
        for N in range(1, 26):
            if gcd(2 * a, N) == 1:
                yield _rec("q_frobenius", None, [a, N], q_frobenius_check(a, N))


def suite_psi(seeds: dict, rng: random.Random):
    for key, ok in psi_checks(12).items():
        yield _rec("psi", None, key, ok)


def _p_x(s: Seed, k: int) -> RatFunc:
    return RatFunc.monomial([int(e) for e in s.eps[k]])


def suite_wedge(seeds: dict, rng: random.Random):
    for name, s in seeds.items():
        W = w_element(s)
        yield _rec("w_presentations", name, None, W == w_element_from_p(s))
        for k in s.mutable:
            yield _rec("mutation_defect", name, k, mutation_defect_check(s, k))
            yield _rec("vanishing_certificate", name, k, vanishing_certificate(s, k))
            # the residue of W is the square of (p^*X_k)^{d_k}
            yield _rec("tame_symbol", name, k, tame_symbol(W, k) == _p_x(s, k) ** (2 * s.d[k]))


def _random_start(rng: random.Random) -> tuple:
    return tuple(complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(2))


def suite_dilog(seeds: dict, rng: random.Random, count: int = 200, tol: float = 1e-9):
    for b, c in DILOG_PAIRS:
        h = _coxeter(b, c)
        worst = 0.0
        done = 0
        while done < count:
            st = _random_start(rng)
            try:
                xs = rank2_orbit(b, c, st, h + 4)
            except PoleAlongOrbit:
                continue
            if abs(xs[h + 2] - xs[0]) > 1e-6 * max(1.0, abs(xs[0])):
                continue
            worst = max(worst, abs(dilog_sum(b, c, st)))
            done += 1
        yield _rec("dilog_period", f"rank2({b},{c})", count, worst < tol, worst)
    worst = 0.0
    for _ in range(count):
        worst = max(worst, abs(bloch_wigner(rng.uniform(-50, 50))))
    yield _rec("bloch_wigner_real", None, count, worst < 1e-12, worst)
    worst = 0.0
    for _ in range(count):
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        # L_2(z) = -L_2(1/z) = -L_2(1 - z)
        r = max(abs(bloch_wigner(z) + bloch_wigner(1 / z)), abs(bloch_wigner(z) + bloch_wigner(1 - z)))
        worst = max(worst, r)
    yield _rec("bloch_wigner_symmetries", None, count, worst < 1e-12, worst)


SUITES = {
    "involutions": suite_involutions,
    "periods": suite_periods,
    "laurent": suite_laurent,
    "poisson": suite_poisson,
    "omega": suite_omega,
    "casimirs": suite_casimirs,
    "frobenius": suite_frobenius,
    "psi": suite_psi,
    "wedge": suite_wedge,
    "dilog": suite_dilog,
}


def run_suite(name: str, seeds: dict | None = None, rng_seed: int = 0):
    """Yield the records of suite ``name`` (or of every suite for ``"all"``)."""
    if seeds is None:
        seeds = catalog()
    names = list(SUITES) if name == "all" else [name]
    for nm in names:
        if nm not in SUITES:
            raise KeyError(f"unknown suite {nm!r}")
        rng = random.Random(rng_seed)
        for rec in SUITES[nm](seeds, rng):
            rec["suite"] = nm
            yield rec
