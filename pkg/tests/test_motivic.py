import cmath
import random

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from clusterens.exactalg import RatFunc
from clusterens.motivic import (
    BasisError,
    NotFixedError,
    PoleAlongOrbit,
    WedgeElement,
    basis_express,
    beta_conjugation_check,
    beta_invariant,
    bloch_wigner,
    dilog_period_check,
    dilog_sum,
    dlog_shadow_check,
    find_fixed_point,
    h_a_invariance,
    li2,
    mutation_defect,
    mutation_defect_check,
    rank2_orbit,
    tame_symbol,
    valuation,
    vanishing_certificate,
    w_element,
    w_element_from_p,
)
from clusterens.seed import MutationWord, Seed, SeedError, kernel_lattices, markov_torus, rank2
from clusterens.verify import catalog

A1 = RatFunc.var(2, 0)
A2 = RatFunc.var(2, 1)
STEP = MutationWord.parse("0,s(0 1)", 2)


def test_basis_express_examples():
    assert basis_express(A1 ** 2 / A2, [A1, A2]) == ((2, -1), 1)
    assert basis_express(1 + A1, [A1, A2]) is None
    e, u = basis_express(3 * (1 + A1) ** 2 / (A2 * A1), [A1, A2, 1 + A1])
    assert e == (-1, -1, 2) and u == 3
    with pytest.raises(BasisError):
        basis_express(A1, [A1 * A2])


def test_basis_express_round_trip():
    rng = random.Random(2)
    b = [A1, A2, 1 + A1 + A2, A1 + A2 * A2]
    for _ in range(20):
        e = [rng.randint(-3, 3) for _ in b]
        f = RatFunc.from_int(2, 5)
        for x, k in zip(b, e):
            f = f * x ** k
        assert basis_express(f, b) == (tuple(e), 5)


def test_w_element_examples():
    names = ["A1", "A2", "A3"]
    assert w_element(rank2(1, 1)).to_str(names) == "2*A1^A2"
    assert w_element(Seed([[0, 0], [0, 0]])).is_zero()
    assert w_element(markov_torus()).to_str(names) == "4*A1^A2 + -4*A1^A3 + 4*A2^A3"


@pytest.mark.parametrize("name", list(catalog()))
def test_w_presentations_and_defect(name):
    s = catalog()[name]
    assert w_element(s) == w_element_from_p(s)
    assert dlog_shadow_check(s)
    for k in s.mutable:
        assert mutation_defect_check(s, k)
        assert mutation_defect(s, k).is_zero()
        assert vanishing_certificate(s, k)


def test_wedge_antisymmetry_enforced():
    with pytest.raises(ValueError):
        WedgeElement([A1, A2], [[0, 1], [1, 0]])
    with pytest.raises(BasisError):
        WedgeElement([RatFunc.from_int(2, 3), A2])
    w = WedgeElement([A1, A2])
    w.add_functions(A1 * A2, A2)
    assert w.to_str(["A1", "A2"]) == "1*A1^A2"


def test_valuation():
    f = (A1 ** 2 * (1 + A2)) / (A1 + A1 * A2 * A2)
    v, lead = valuation(f, 0)
    assert v == 1
    assert lead == (1 + A2) / (1 + A2 * A2)


def test_tame_symbol_examples():
    w = WedgeElement([A1, A2])
    w.add_wedge((1, 0), (0, 1))
    assert tame_symbol(w, 0) == A2
    # on W the residue is (p^*X_k)^{2 d_k}: for A2 the p-images are A2 and A1^-1
    W = w_element(rank2(1, 1))
    assert tame_symbol(W, 0) == A2 ** 2
    assert tame_symbol(W, 1) == A1 ** -2


def test_h_a_invariance():
    s = markov_torus()
    for b in kernel_lattices(s)[1]:
        assert h_a_invariance(s, b)
    assert not h_a_invariance(s, (1, 0, 0))


def test_li2_against_mpmath():
    rng = random.Random(7)
    pts = [2, -3, 0.7, 1.5, 0.5 + 0.5j, cmath.exp(1j), -1, 0.999, 1, 0]
    pts += [complex(rng.uniform(-4, 4), rng.uniform(-4, 4)) for _ in range(300)]
    for z in pts:
        assert abs(li2(z) - complex(mpmath.polylog(2, z))) < 1e-12


def test_bloch_wigner_values():
    assert abs(bloch_wigner(cmath.exp(1j * cmath.pi / 3)) - 1.0149416064096536) < 1e-12
    for x in (-7.5, -1, 0, 0.25, 1, 3.0):
        assert abs(bloch_wigner(x)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.complex_numbers(max_magnitude=20, allow_nan=False, allow_infinity=False))
def test_bloch_wigner_symmetries(z):
    if abs(z) < 1e-3 or abs(1 - z) < 1e-3:
        return
    assert abs(bloch_wigner(z) + bloch_wigner(1 / z)) < 1e-10
    assert abs(bloch_wigner(z) + bloch_wigner(1 - z)) < 1e-10
    assert abs(bloch_wigner(z.conjugate()) + bloch_wigner(z)) < 1e-10


def test_five_term():
    assert dilog_period_check(1, 1, (1j, 1 + 1j))
    assert abs(dilog_sum(1, 1, (1j, 1 + 1j))) < 1e-9


def test_real_start_orbit():
    xs = rank2_orbit(1, 1, (1, 1), 5)
    assert [round(abs(x)) for x in xs] == [1, 1, 2, 3, 2]
    assert dilog_sum(1, 1, (1, 1)) == 0


def test_g2_random_starts():
    rng = random.Random(11)
    for _ in range(20):
        st_ = (complex(rng.uniform(-2, 2), rng.uniform(-2, 2)), complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))
        assert dilog_period_check(1, 3, st_)
        assert dilog_period_check(3, 1, st_)


def test_weights_matter():
    # swapping the (b, c) weights breaks the B2 identity at a generic point
    st_ = (0.3 + 0.8j, -0.4 + 1.1j)
    assert dilog_period_check(1, 2, st_)
    xs = rank2_orbit(1, 2, st_, 6)
    swapped = sum((2 if i % 2 == 0 else 1) * bloch_wigner(-x) for i, x in enumerate(xs, start=1))
    assert abs(swapped) > 1e-6


def test_pole_along_orbit():
    with pytest.raises(PoleAlongOrbit):
        rank2_orbit(1, 1, (-1, 1), 7)


def test_beta_trivial_loops():
    s = rank2(1, 1)
    p = [0.3 + 0.7j, 1.1 - 0.2j]
    assert beta_invariant(s, MutationWord(()), p) == 0
    assert abs(beta_invariant(s, STEP * 5, p)) < 1e-12


def test_beta_real_fixed_point():
    s = rank2(1, 1)
    p = find_fixed_point(s, STEP, [1.5, 0.5])
    assert all(abs(x.imag) < 1e-12 for x in p)
    assert abs(beta_invariant(s, STEP, p)) < 1e-12


def test_beta_not_fixed_or_not_loop():
    s = rank2(1, 1)
    with pytest.raises(NotFixedError):
        beta_invariant(s, STEP, [0.3 + 0.7j, 1.1 - 0.2j])
    with pytest.raises(SeedError):
        beta_invariant(s, MutationWord.parse("0", 2), [1, 1])


def test_beta_conjugation_stable():
    s = rank2(1, 1)
    p = [0.3 + 0.7j, 1.1 - 0.2j]
    ok, b0, b1 = beta_conjugation_check(s, STEP * 5, p, MutationWord.parse("1", 2))
    assert ok
    mk = markov_torus()
    loop = MutationWord.parse("0,s(0 1),1,s(1 2)", 3)
    q = find_fixed_point(mk, loop, [0.3 + 0.7j, 1.1 - 0.2j, 0.5 + 0.1j])
    ok, b0, b1 = beta_conjugation_check(mk, loop, q, MutationWord.parse("2", 3))
    assert ok and abs(b0 - b1) < 1e-8
