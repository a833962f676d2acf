import random

import pytest

from clusterens.clustermaps import (
    KernelError,
    a_mutation,
    apply_word,
    casimir_check,
    h_a_action_check,
    laurent_check,
    omega_form,
    omega_invariance,
    p_commutes,
    p_map,
    poisson_bracket,
    poisson_invariance,
    random_word,
    transport_casimir,
    x_mutation,
)
from clusterens.exactalg import LaurentPoly, RatFunc
from clusterens.seed import (
    FrozenDirectionError,
    MutationWord,
    RANK2_TYPES,
    Seed,
    a_n_zigzag,
    kernel_lattices,
    markov_torus,
    mutate_seed,
    rank2,
)
from clusterens.verify import catalog

X = RatFunc.var(2, 0)
Y = RatFunc.var(2, 1)
STEP = MutationWord.parse("0,s(0 1)", 2)


def test_a2_x_map_with_swap():
    # rank2(1,1): X'_1 = X_2 (1 + X_1) after the swap
    m = apply_word(rank2(1, 1), STEP, "X")
    assert m.images == [Y * (1 + X), X ** -1]
    # the chiral seed carries the other displayed form
    m = apply_word(Seed([[0, -1], [1, 0]]), STEP, "X")
    assert m.images == [Y * (1 + X ** -1) ** -1, X ** -1]


def test_a2_x_mutation_images():
    m = x_mutation(rank2(1, 1), 0)
    assert m.images[1] == Y * (1 + X)
    assert m.images[0] == X ** -1


def test_a2_a_mutation():
    m = a_mutation(rank2(1, 1), 0)
    assert m.images[0] == (Y + 1) / X
    assert m.images[1] == Y


def test_zero_row_gives_constant_two():
    s = rank2(0, 0)
    assert a_mutation(s, 0).images[0] == 2 / X
    assert x_mutation(s, 0).images[0] == X ** -1


@pytest.mark.parametrize("name", list(catalog()))
def test_mutation_involutive(name):
    s = catalog()[name]
    for k in s.mutable:
        t = mutate_seed(s, k)
        for space, fn in (("X", x_mutation), ("A", a_mutation)):
            assert fn(s, k).then(fn(t, k)).is_identity()


def test_frozen_direction_rejected():
    s = Seed([[0, 1], [-1, 0]], frozen=[1])
    with pytest.raises(FrozenDirectionError):
        x_mutation(s, 1)


@pytest.mark.parametrize("bc,h", sorted(RANK2_TYPES.items()))
def test_rank2_periods(bc, h):
    s = rank2(*bc)
    for space in "AX":
        assert apply_word(s, STEP * (h + 2), space).is_identity()
        assert not apply_word(s, STEP * (h + 1), space).is_identity()


def test_a2_recursion_values():
    # x_{m-1} x_{m+1} = 1 + x_m starting from A1 = A2 = 1 evaluated numerically
    s = rank2(1, 1)
    vals = []
    for p in range(1, 6):
        m = apply_word(s, STEP * p, "A")
        vals.append(m.images[1].evaluate((1, 1)))
    assert vals == [2, 3, 2, 1, 1]


def test_p_map_examples():
    a2 = p_map(rank2(1, 1)).images
    assert a2 == [Y, X ** -1]
    mk = p_map(markov_torus()).images
    assert mk[0] == RatFunc.monomial((0, 2, -2))


@pytest.mark.parametrize("name", list(catalog()))
def test_p_commutes_and_poisson(name):
    s = catalog()[name]
    for k in s.mutable:
        assert p_commutes(s, k)
        assert poisson_invariance(s, k)
        assert omega_invariance(s, k)


def test_poisson_bracket_basic():
    s = rank2(1, 2)
    eh = s.eps_hat()
    assert poisson_bracket(s, X, Y) == X * Y * eh[0][1]
    f = (1 + X) / Y
    assert poisson_bracket(s, f, f).is_zero()


def test_omega_a2():
    om = omega_form(rank2(1, 1))
    assert om[0][1] == 2 / (X * Y)
    assert om[1][0] == -2 / (X * Y)


def test_casimirs_markov():
    s = markov_torus()
    for k in range(3):
        assert casimir_check(s, (1, 1, 1), k)
        assert h_a_action_check(s, (1, 1, 1), k)
        assert h_a_action_check(s, (0, 0, 0), k)
    assert not casimir_check(s, (1, 0, 0), 0, strict=False)
    with pytest.raises(KernelError):
        casimir_check(s, (1, 0, 0), 0)
    assert casimir_check(rank2(1, 1), (0, 0), 0)


def test_casimir_transport_rule():
    s = Seed([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    kl, _ = kernel_lattices(s)
    for a in kl:
        a2 = transport_casimir(s, a, 1)
        t = mutate_seed(s, 1)
        assert all(sum(a2[i] * t.eps[i][j] for i in range(3)) == 0 for j in range(3))
        assert casimir_check(s, a, 1)


def test_laurent_reports():
    rep = laurent_check(rank2(1, 1), MutationWord.parse("0,1,0", 2), "A")
    assert all(r["laurent"] and r["positive"] for r in rep)
    rep = laurent_check(rank2(1, 1), MutationWord.parse("0,1", 2), "X")
    assert not all(r["laurent"] for r in rep)


def test_markov_laurent_short_words():
    s = markov_torus()
    rng = random.Random(3)
    for _ in range(10):
        w = random_word(s, rng.randint(1, 6), rng)
        assert all(r["laurent"] for r in laurent_check(s, w, "A"))


def test_a_trivial_words_are_x_trivial():
    # det eps != 0: the period relation is A-trivial, hence X-trivial
    for bc, h in RANK2_TYPES.items():
        if bc == (0, 0):
            continue
        s = rank2(*bc)
        w = STEP * (h + 2)
        assert apply_word(s, w, "A").is_identity() and apply_word(s, w, "X").is_identity()


def test_random_word_no_repeats():
    rng = random.Random(0)
    w = random_word(a_n_zigzag(3), 30, rng)
    ks = [k for _, k in w]
    assert all(a != b for a, b in zip(ks, ks[1:]))
