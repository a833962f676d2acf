import json
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from clusterens.seed import (
    FrozenDirectionError,
    MutationWord,
    RANK2_TYPES,
    Seed,
    SeedCapacityError,
    SeedError,
    TriangulationError,
    a_n_zigzag,
    apply_word_to_seed,
    canonical_form,
    dual_seed,
    exchange_graph,
    flip,
    kernel_lattices,
    markov_torus,
    mutate_seed,
    permute_seed,
    polygon,
    rank2,
    seed_catalog,
    zigzag_triangulation,
)

MARKOV = [[0, 2, -2], [-2, 0, 2], [2, -2, 0]]


@st.composite
def seeds(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    d = draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))
    g = 0
    for v in d:
        g = gcd(g, v)
    d = [v // g for v in d]
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(st.integers(-2, 2))
            b[i][j], b[j][i] = v, -v
    # eps_hat = b, so eps_ij = b_ij d_j
    return Seed([[b[i][j] * d[j] for j in range(n)] for i in range(n)], d)


def test_markov_mutation_negates():
    s = markov_torus()
    for k in range(3):
        assert mutate_seed(s, k).eps == tuple(tuple(Fraction(-e) for e in row) for row in s.eps)


def test_a2_mutation():
    assert mutate_seed(rank2(1, 1), 0) == Seed([[0, -1], [1, 0]])


def test_b2_involution():
    s = Seed([[0, 1], [-2, 0]], [2, 1])
    assert mutate_seed(mutate_seed(s, 0), 0) == s


def test_validation_errors():
    with pytest.raises(SeedError):
        Seed([[0, 1], [1, 0]])
    with pytest.raises(SeedError):
        Seed([[0, 1], [-1, 0]], [2, 2])
    with pytest.raises(SeedError):
        Seed([[0, Fraction(1, 2)], [Fraction(-1, 2), 0]])
    # non-integral entries are allowed between frozen vertices
    s = Seed([[0, Fraction(1, 2)], [Fraction(-1, 2), 0]], frozen=[0, 1])
    assert s.mutable == ()
    with pytest.raises(FrozenDirectionError):
        mutate_seed(Seed([[0, 1], [-1, 0]], frozen=[1]), 1)


def test_dual_examples():
    s = Seed([[0, 1], [-2, 0]], [2, 1])
    L = dual_seed(s, "langlands")
    assert L == Seed([[0, 2], [-1, 0]], [1, 2])
    assert dual_seed(L, "langlands") == s
    assert dual_seed(dual_seed(s, "transpose"), "chiral") == L
    assert dual_seed(s, "chiral") == Seed([[0, -1], [2, 0]], [2, 1])


def test_catalog():
    assert markov_torus() == Seed(MARKOV)
    assert rank2(1, 1) == Seed([[0, 1], [-1, 0]], [1, 1])
    assert rank2(1, 2).d == (2, 1)
    assert seed_catalog("markov") == markov_torus()
    assert seed_catalog("rank2", 1, 3) == rank2(1, 3)
    with pytest.raises(KeyError):
        seed_catalog("nonsense")


def test_polygon_seed_shape():
    s = a_n_zigzag(3)
    assert s.n == 3
    assert all(abs(e) <= 2 for row in s.eps for e in row)
    with pytest.raises(TriangulationError):
        polygon([(0, 2), (1, 3)], 5)
    with pytest.raises(TriangulationError):
        polygon([(0, 1)], 4)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_polygon_flip_is_mutation(n):
    tri = zigzag_triangulation(n)
    s = polygon(tri)
    for k in range(n):
        assert mutate_seed(s, k) == polygon(flip(tri, k))


def test_json_round_trip():
    s = Seed([[0, 1, 0], [-1, 0, Fraction(1, 2)], [0, Fraction(-1, 2), 0]], frozen=[1, 2])
    with pytest.raises(SeedError):
        Seed.from_json({"n": 2, "eps": [[0]]})
    t = Seed.from_json(json.dumps(s.to_json()))
    assert t == s
    assert s.to_json()["eps"][1][2] == "1/2"


def test_word_parse_and_apply():
    w = MutationWord.parse("0,1,s(0 1),0", 2)
    assert str(w) == "0,1,s(0 1),0"
    assert len(w) == 4
    s = rank2(1, 1)
    assert apply_word_to_seed(s, MutationWord.parse("0,s(0 1)", 2)) == s
    with pytest.raises(ValueError):
        MutationWord.parse("0,x", 2)


def test_permutation_convention():
    s = Seed([[0, 1, 0], [-1, 0, 2], [0, -2, 0]], [1, 1, 1])
    t = permute_seed(s, (2, 0, 1))
    sigma = (2, 0, 1)
    for i in range(3):
        for j in range(3):
            assert t.eps[sigma[i]][sigma[j]] == s.eps[i][j]


def test_canonical_form_examples():
    a, sa = canonical_form(Seed([[0, 1], [-1, 0]]))
    b, _ = canonical_form(Seed([[0, -1], [1, 0]]))
    assert a == b
    m, _ = canonical_form(markov_torus())
    assert canonical_form(m)[0] == m
    s = rank2(1, 2)
    assert canonical_form(mutate_seed(mutate_seed(s, 0), 0))[0] == canonical_form(s)[0]
    assert permute_seed(Seed([[0, 1], [-1, 0]]), sa) == a
    with pytest.raises(SeedCapacityError):
        canonical_form(a_n_zigzag(4), bound=3)


@pytest.mark.parametrize("bc,h", sorted(RANK2_TYPES.items()))
def test_rank2_exchange_graph_sizes(bc, h):
    g = exchange_graph(rank2(*bc))
    assert g.finite
    assert g.n_clusters == h + 2


def test_exchange_graph_classes():
    assert exchange_graph(rank2(1, 1)).n_classes == 1
    assert exchange_graph(rank2(0, 0)).n_classes == 1
    assert exchange_graph(rank2(1, 2)).n_classes == 2
    assert exchange_graph(a_n_zigzag(3)).n_clusters == 14
    g = exchange_graph(markov_torus(), max_seeds=300)
    assert not g.finite
    # -eps is the relabelling of eps by a transposition, so one class
    assert g.n_classes == 1
    assert permute_seed(markov_torus(), (1, 0, 2)) == mutate_seed(markov_torus(), 0)


def test_exchange_graph_json_and_paths():
    g = exchange_graph(rank2(1, 1))
    js = g.to_json()
    assert js["finite"] and js["seeds"] == 5
    for v in range(g.n_clusters):
        assert apply_word_to_seed(g.root, g.path_to(v)) == g.seeds[v]


def test_kernels():
    kl, kr = kernel_lattices(markov_torus())
    assert kl == [(1, 1, 1)]
    assert kernel_lattices(rank2(1, 1)) == ([], [])
    s = Seed([[0, 1, -1, 0], [-1, 0, 1, 0], [1, -1, 0, 0], [0, 0, 0, 0]])
    kl, kr = kernel_lattices(s)
    assert len(kl) == 2 and len(kr) == 2


@settings(max_examples=50, deadline=None)
@given(seeds())
def test_mutation_properties(s):
    for k in s.mutable:
        t = mutate_seed(s, k)
        t.validate()
        assert mutate_seed(t, k) == s
        for kind in ("langlands", "chiral", "transpose"):
            assert dual_seed(t, kind) == mutate_seed(dual_seed(s, kind), k)
    for kind in ("langlands", "chiral", "transpose"):
        assert dual_seed(dual_seed(s, kind), kind) == s


@settings(max_examples=50, deadline=None)
@given(seeds())
def test_kernel_vectors_are_in_kernel(s):
    kl, kr = kernel_lattices(s)
    n = s.n
    for a in kl:
        assert all(sum(a[i] * s.eps[i][j] for i in range(n)) == 0 for j in range(n))
    for b in kr:
        assert all(sum(s.eps[i][j] * b[j] for j in range(n)) == 0 for i in range(n))
    # ker_left of eps equals ker_right of its transpose
    tr = Seed([[s.eps[j][i] for j in range(n)] for i in range(n)], check=False)
    assert kernel_lattices(tr)[1] == kl
