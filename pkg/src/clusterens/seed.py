"""Seeds, mutation, dualities, the built-in catalog and exchange graphs."""

from __future__ import annotations

import itertools
import json
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "SeedError",
    "FrozenDirectionError",
    "TriangulationError",
    "SeedCapacityError",
    "Seed",
    "MutationWord",
    "mutate_seed",
    "permute_seed",
    "apply_word_to_seed",
    "dual_seed",
    "seed_catalog",
    "rank2",
    "markov_torus",
    "polygon",
    "a_n_zigzag",
    "zigzag_triangulation",
    "flip",
    "framed",
    "canonical_form",
    "exchange_graph",
    "ExchangeGraph",
    "kernel_lattices",
    "integer_kernel",
    "RANK2_TYPES",
]

CANONICAL_BOUND = 9
DEFAULT_MAX_SEEDS = 20000

# (b, c) -> Coxeter number h
RANK2_TYPES = {(0, 0): 2, (1, 1): 3, (1, 2): 4, (1, 3): 6}


class SeedError(ValueError):
    """A seed violates one of its structural invariants."""


class FrozenDirectionError(SeedError):
    """Mutation was requested in a frozen direction."""


class TriangulationError(SeedError):
    """A polygon triangulation is not valid."""


class SeedCapacityError(RuntimeError):
    """The exhaustive canonical-form search was asked for too large a seed."""


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@dataclass(frozen=True)
class Seed:
    """A seed ``(I, I0, eps, d)`` on the index set ``{0, ..., n-1}``.

    ``eps[i][j]`` are Fractions; they must be integers unless both ``i``
    and ``j`` are frozen. ``eps[i][j] / d[j]`` must be skew-symmetric.
    """

    n: int
    frozen: frozenset
    eps: tuple
    d: tuple

    def __init__(self, eps, d=None, frozen=(), check: bool = True):
        rows = tuple(tuple(_frac(x) for x in row) for row in eps)
        n = len(rows)
        if d is None:
            d = (1,) * n
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "frozen", frozenset(int(i) for i in frozen))
        object.__setattr__(self, "eps", rows)
        object.__setattr__(self, "d", tuple(int(x) for x in d))
        if check:
            self.validate()

    def validate(self) -> None:
        n = self.n
        if any(len(r) != n for r in self.eps):
            raise SeedError("exchange matrix must be square")
        if len(self.d) != n:
            raise SeedError(f"multiplier vector has length {len(self.d)}, expected {n}")
        if any(x <= 0 for x in self.d):
            raise SeedError("multipliers must be positive integers")
        if n and gcd(*self.d) != 1:
            raise SeedError("multipliers must have gcd 1")
        if any(not 0 <= i < n for i in self.frozen):
            raise SeedError("frozen index out of range")
        for i in range(n):
            for j in range(n):
                e = self.eps[i][j]
                if e.denominator != 1 and not (i in self.frozen and j in self.frozen):
                    raise SeedError(f"eps[{i}][{j}] = {e} must be an integer")
                if e / self.d[j] != -self.eps[j][i] / self.d[i]:
                    raise SeedError(f"eps/d is not skew-symmetric at ({i}, {j})")

    # -- derived data -------------------------------------------------
    @property
    def mutable(self) -> tuple:
        return tuple(i for i in range(self.n) if i not in self.frozen)

    @property
    def D(self) -> int:
        return _lcm(self.d)

    def eps_hat(self) -> list:
        return [[self.eps[i][j] / self.d[j] for j in range(self.n)] for i in range(self.n)]

    def eps_tilde(self) -> list:
        return [[self.d[i] * self.eps[i][j] for j in range(self.n)] for i in range(self.n)]

    def int_eps(self) -> list:
        """Exchange matrix with integral entries as ints (others stay Fractions)."""
        return [[int(e) if e.denominator == 1 else e for e in row] for row in self.eps]

    def key(self) -> tuple:
        return (self.n, tuple(sorted(self.frozen)), self.eps, self.d)

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        return {
            "n": self.n,
            "frozen": sorted(self.frozen),
            "eps": [[str(e) for e in row] for row in self.eps],
            "d": list(self.d),
        }

    @classmethod
    def from_json(cls, obj) -> "Seed":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "eps" not in obj:
            raise SeedError("seed JSON must be an object with an 'eps' field")
        eps = obj["eps"]
        n = obj.get("n", len(eps))
        if n != len(eps):
            raise SeedError(f"'n' is {n} but eps has {len(eps)} rows")
        return cls(eps, obj.get("d"), obj.get("frozen", ()))

    def __repr__(self):
        rows = "[" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.eps) + "]"
        fz = f", frozen={sorted(self.frozen)}" if self.frozen else ""
        return f"Seed({rows}, d={list(self.d)}{fz})"


# -- mutation words -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:s\(\s*(\d+)\s+(\d+)\s*\)|p\(([\d\s]+)\)|(\d+))\s*")


@dataclass(frozen=True)
class MutationWord:
    """Sequence of steps ``("mu", k)`` or ``("perm", sigma)``.

    A permutation step relabels vertex ``i`` as ``sigma[i]``.
    """

    steps: tuple = field(default_factory=tuple)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "MutationWord":
        """Parse ``"0,1,s(0 1),0"``; ``s(i j)`` is a transposition, ``p(..)`` a full permutation."""
        steps = []
        text = text.strip()
        if not text:
            return cls(())
        for tok in text.split(","):
            m = _TOKEN.fullmatch(tok)
            if not m:
                raise ValueError(f"bad word token {tok!r}")
            if m.group(4) is not None:
                steps.append(("mu", int(m.group(4))))
            elif m.group(1) is not None:
                i, j = int(m.group(1)), int(m.group(2))
                if n is None:
                    size = max(i, j) + 1
                else:
                    size = n
                sigma = list(range(size))
                sigma[i], sigma[j] = j, i
                steps.append(("perm", tuple(sigma)))
            else:
                steps.append(("perm", tuple(int(x) for x in m.group(3).split())))
        return cls(tuple(steps))

    @classmethod
    def mutations(cls, ks: Iterable[int]) -> "MutationWord":
        return cls(tuple(("mu", int(k)) for k in ks))

    def __add__(self, other: "MutationWord") -> "MutationWord":
        return MutationWord(self.steps + other.steps)

    def __mul__(self, k: int) -> "MutationWord":
        return MutationWord(self.steps * k)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __str__(self):
        out = []
        for kind, arg in self.steps:
            if kind == "mu":
                out.append(str(arg))
            else:
                moved = [i for i in range(len(arg)) if arg[i] != i]
                if len(moved) == 2 and arg[moved[0]] == moved[1]:
                    out.append(f"s({moved[0]} {moved[1]})")
                else:
                    out.append("p(" + " ".join(map(str, arg)) + ")")
        return ",".join(out)


def _pad_perm(sigma: Sequence[int], n: int) -> tuple:
    sigma = tuple(sigma)
    if len(sigma) < n:
        sigma = sigma + tuple(range(len(sigma), n))
    if sorted(sigma) != list(range(n)):
        raise SeedError(f"{sigma} is not a permutation of 0..{n - 1}")
    return sigma


# -- mutation and permutation ---------------------------------------------

def _mutate_matrix(eps, k: int):
    n = len(eps)
    row_k = eps[k]
    out = []
    for i in range(n):
        e_ik = eps[i][k]
        row = list(eps[i])
        if i == k:
            out.append([-x for x in row])
            continue
        for j in range(n):
            if j == k:
                row[j] = -row[j]
            elif e_ik * row_k[j] > 0:
                row[j] = row[j] + abs(e_ik) * row_k[j]
        out.append(row)
    return out


def mutate_seed(s: Seed, k: int) -> Seed:
    if not 0 <= k < s.n:
        raise SeedError(f"direction {k} out of range")
    if k in s.frozen:
        raise FrozenDirectionError(f"direction {k} is frozen")
    return Seed(_mutate_matrix(s.eps, k), s.d, s.frozen, check=False)


def permute_seed(s: Seed, sigma: Sequence[int]) -> Seed:
    """Relabel vertex ``i`` as ``sigma[i]``: ``eps'[sigma i][sigma j] = eps[i][j]``."""
    sigma = _pad_perm(sigma, s.n)
    if {sigma[i] for i in s.frozen} != set(s.frozen):
        raise SeedError("permutation must preserve the frozen subset")
    n = s.n
    eps = [[None] * n for _ in range(n)]
    d = [None] * n
    for i in range(n):
        d[sigma[i]] = s.d[i]
        for j in range(n):
            eps[sigma[i]][sigma[j]] = s.eps[i][j]
    return Seed(eps, d, s.frozen, check=False)


def apply_word_to_seed(s: Seed, w: MutationWord) -> Seed:
    for kind, arg in w:
        s = mutate_seed(s, arg) if kind == "mu" else permute_seed(s, arg)
    return s


def dual_seed(s: Seed, kind: str) -> Seed:
    n, D = s.n, s.D
    if kind == "chiral":
        return Seed([[-e for e in row] for row in s.eps], s.d, s.frozen, check=False)
    if kind == "transpose":
        eps = [[s.eps[j][i] for j in range(n)] for i in range(n)]
    elif kind == "langlands":
        eps = [[-s.eps[j][i] for j in range(n)] for i in range(n)]
    else:
        raise ValueError(f"unknown duality {kind!r}")
    return Seed(eps, [D // x for x in s.d], s.frozen, check=False)


# -- catalog --------------------------------------------------------------

def rank2(b: int, c: int) -> Seed:
    """Seed with ``eps = [[0, b], [-c, 0]]``; ``(0,0), (1,1), (1,2), (1,3)`` are A1xA1, A2, B2, G2."""
    if b < 0 or c < 0:
        raise SeedError("rank-2 parameters must be nonnegative")
    if (b == 0) != (c == 0):
        raise SeedError("b and c must vanish together")
    if b == 0:
        d = (1, 1)
    else:
        g = gcd(b, c)
        d = (c // g, b // g)
    return Seed([[0, b], [-c, 0]], d)


def markov_torus() -> Seed:
    return Seed([[0, 2, -2], [-2, 0, 2], [2, -2, 0]])


def _norm_edge(a: int, b: int) -> tuple:
    return (a, b) if a < b else (b, a)


def polygon(triangulation: Sequence[Sequence[int]], N: int | None = None) -> Seed:
    """Seed of a triangulated convex ``N``-gon; diagonals are indexed in the given order.

    ``eps[E][F] = +1`` when ``E`` and ``F`` are sides of a common triangle
    meeting at ``v`` and ``F`` follows ``E`` counterclockwise around ``v``.
    """
    diags = [_norm_edge(int(a), int(b)) for a, b in triangulation]
    n = len(diags)
    if N is None:
        N = n + 3
    if N < 3 or n != N - 3:
        raise TriangulationError(f"a triangulation of a {N}-gon has {N - 3} diagonals, got {n}")
    if len(set(diags)) != n:
        raise TriangulationError("repeated diagonal")
    for a, b in diags:
        if not (0 <= a < N and 0 <= b < N) or a == b:
            raise TriangulationError(f"({a}, {b}) is not a pair of distinct vertices")
        if (b - a) % N in (1, N - 1):
            raise TriangulationError(f"({a}, {b}) is a side, not a diagonal")
    for (a, b), (c, e) in itertools.combinations(diags, 2):
        if len({a, b, c, e}) == 4 and (a < c < b) != (a < e < b):
            raise TriangulationError(f"diagonals ({a}, {b}) and ({c}, {e}) cross")
    index = {e: i for i, e in enumerate(diags)}
    edges = set(diags) | {_norm_edge(v, (v + 1) % N) for v in range(N)}
    eps = [[0] * n for _ in range(n)]
    for a, b, c in itertools.combinations(range(N), 3):
        sides = [(a, b), (b, c), (a, c)]
        if not all(s in edges for s in sides):
            continue
        for v in (a, b, c):
            x, y = [u for u in (a, b, c) if u != v]
            E, F = _norm_edge(v, x), _norm_edge(v, y)
            if E in index and F in index:
                if (x - v) % N > (y - v) % N:
                    E, F = F, E
                # F comes after E counterclockwise around v
                eps[index[E]][index[F]] += 1
                eps[index[F]][index[E]] -= 1
    return Seed(eps)


def zigzag_triangulation(n: int) -> list:
    """Diagonals of the zig-zag triangulation of the ``(n+3)``-gon."""
    N = n + 3
    path = [0, 1]
    lo, hi = 2, N - 1
    take_hi = True
    while len(path) < n + 2:
        if take_hi:
            path.append(hi)
            hi -= 1
        else:
            path.append(lo)
            lo += 1
        take_hi = not take_hi
    return [_norm_edge(path[i], path[i + 1]) for i in range(1, n + 1)]


def a_n_zigzag(n: int) -> Seed:
    if n < 1:
        raise SeedError("A_n needs n >= 1")
    return polygon(zigzag_triangulation(n))


def flip(triangulation: Sequence[Sequence[int]], idx: int, N: int | None = None) -> list:
    """Replace diagonal ``idx`` by the other diagonal of its quadrilateral."""
    diags = [_norm_edge(*e) for e in triangulation]
    if N is None:
        N = len(diags) + 3
    edges = set(diags) | {_norm_edge(v, (v + 1) % N) for v in range(N)}
    a, b = diags[idx]
    apex = [v for v in range(N) if v not in (a, b)
            and _norm_edge(a, v) in edges and _norm_edge(b, v) in edges]
    if len(apex) != 2:
        raise TriangulationError("diagonal does not bound exactly two triangles")
    out = list(diags)
    out[idx] = _norm_edge(*apex)
    return out


def seed_catalog(name: str, *args) -> Seed:
    table = {
        "a_n_zigzag": a_n_zigzag,
        "rank2": rank2,
        "markov_torus": markov_torus,
        "markov": markov_torus,
        "polygon": polygon,
    }
    if name not in table:
        raise KeyError(f"unknown catalog seed {name!r}")
    return table[name](*args)


# -- canonical form -------------------------------------------------------

def _refine(s: Seed) -> list:
    """Isomorphism-invariant vertex colours as small ints, ordered by invariant."""
    n = s.n
    sig = [(1 if i in s.frozen else 0, s.d[i]) for i in range(n)]
    colours = _rank(sig)
    while True:
        sig = [
            (colours[i], tuple(sorted((colours[j], s.eps[i][j], s.eps[j][i]) for j in range(n) if j != i)))
            for i in range(n)
        ]
        new = _rank(sig)
        if len(set(new)) == len(set(colours)):
            return new
        colours = new


def _rank(values: list) -> list:
    order = {v: r for r, v in enumerate(sorted(set(values)))}
    return [order[v] for v in values]


def canonical_form(s: Seed, bound: int = CANONICAL_BOUND) -> tuple:
    """Return ``(canonical seed, sigma)`` with ``permute_seed(s, sigma)`` canonical.

    The search ranges over relabelings that respect the invariant colour
    classes; vertices are placed class by class, so the answer depends only
    on the isomorphism class of ``s``.
    """
    if s.n > bound:
        raise SeedCapacityError(f"canonical form search is limited to n <= {bound}")
    n = s.n
    colours = _refine(s)
    classes = [[i for i in range(n) if colours[i] == c] for c in range(max(colours, default=-1) + 1)]
    slots = []
    for cl in classes:
        start = len(slots)
        slots.extend(range(start, start + len(cl)))
    best = None
    best_sigma = None
    for choice in itertools.product(*(itertools.permutations(cl) for cl in classes)):
        order = [v for part in choice for v in part]  # order[p] = old vertex placed at p
        key = (
            tuple(tuple(s.eps[order[p]][order[q]] for q in range(n)) for p in range(n)),
            tuple(s.d[order[p]] for p in range(n)),
            tuple(1 if order[p] in s.frozen else 0 for p in range(n)),
        )
        if best is None or key < best:
            best = key
            sigma = [0] * n
            for p, v in enumerate(order):
                sigma[v] = p
            best_sigma = tuple(sigma)
    eps, d, fz = best
    return Seed(eps, d, [p for p in range(n) if fz[p]], check=False), best_sigma


# -- exchange graph -------------------------------------------------------

def framed(s: Seed) -> Seed:
    """Attach a frozen copy ``i'`` to each mutable ``i`` with ``eps[i][i'] = 1``."""
    n = s.n
    mut = s.mutable
    m = n + len(mut)
    eps = [[Fraction(0)] * m for _ in range(m)]
    for i in range(n):
        for j in range(n):
            eps[i][j] = s.eps[i][j]
    d = list(s.d)
    for t, i in enumerate(mut):
        eps[i][n + t] = Fraction(1)
        eps[n + t][i] = Fraction(-1)
        d.append(s.d[i])
    return Seed(eps, d, set(s.frozen) | set(range(n, m)), check=False)


@dataclass
class ExchangeGraph:
    """Clusters reachable from a seed, identified by their sets of c-vectors.

    ``seeds[v]`` is the seed at cluster ``v``; ``parent[v] = (u, k)``
    records the BFS tree; ``edges`` lists ``(u, k, v)``. ``classes`` maps
    canonical forms to the clusters carrying them.
    """

    root: Seed
    finite: bool
    seeds: list
    cvectors: list
    parent: list
    edges: list
    classes: dict

    @property
    def n_clusters(self) -> int:
        return len(self.seeds)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def path_to(self, v: int) -> MutationWord:
        ks = []
        while self.parent[v] is not None:
            u, k = self.parent[v]
            ks.append(k)
            v = u
        return MutationWord.mutations(reversed(ks))

    def to_json(self) -> dict:
        keys = {}
        for ckey, members in self.classes.items():
            for v in members:
                keys[v] = ckey
        class_ids = {ck: i for i, ck in enumerate(sorted(self.classes))}
        return {
            "finite": self.finite,
            "seeds": self.n_clusters,
            "classes": self.n_classes,
            "adjacency": {
                str(v): sorted({(k, w) for u, k, w in self.edges if u == v}) for v in range(self.n_clusters)
            },
            "class_of": [class_ids[keys[v]] for v in range(self.n_clusters)],
        }


def _canon_key(s: Seed):
    try:
        c, _ = canonical_form(s)
        return (c.eps, c.d, tuple(sorted(c.frozen)))
    except SeedCapacityError:
        # invariant partition only; flagged by the caller via n
        cols = _refine(s)
        return ("non-canonical", tuple(sorted(cols)), tuple(sorted(s.d)))


def exchange_graph(s: Seed, max_seeds: int = DEFAULT_MAX_SEEDS, with_classes: bool = True) -> ExchangeGraph:
    """Breadth-first enumeration of clusters; ``finite`` is False when ``max_seeds`` is exceeded."""
    n = s.n
    mut = s.mutable
    fr = framed(s)
    start = [list(r) for r in fr.int_eps()]

    def cvec_key(mat):
        return frozenset(tuple(mat[i][n:]) for i in mut)

    keys = {cvec_key(start): 0}
    mats = [start]
    parent = [None]
    edges = []
    queue = deque([0])
    finite = True
    while queue:
        u = queue.popleft()
        for k in mut:
            mat = _mutate_matrix(mats[u], k)
            key = cvec_key(mat)
            v = keys.get(key)
            if v is None:
                if len(mats) >= max_seeds:
                    finite = False
                    queue.clear()
                    break
                v = len(mats)
                keys[key] = v
                mats.append(mat)
                parent.append((u, k))
                queue.append(v)
            edges.append((u, k, v))
    seeds = [Seed([row[:n] for row in m[:n]], s.d, s.frozen, check=False) for m in mats]
    cvecs = [[tuple(m[i][n:]) for i in range(n)] for m in mats]
    classes: dict = {}
    if with_classes:
        for v, sd in enumerate(seeds):
            classes.setdefault(_canon_key(sd), []).append(v)
    return ExchangeGraph(s, finite, seeds, cvecs, parent, edges, classes)


# -- kernels --------------------------------------------------------------

def integer_kernel(M: Sequence[Sequence]) -> list:
    """Basis of the saturated lattice ``{v in Z^n : M v = 0}``.

    Rational entries are cleared row by row. Column operations with a
    unimodular companion ``U`` bring ``M`` to echelon form ``M U = H``; the
    columns of ``U`` under zero columns of ``H`` span the kernel.
    """
    rows = [list(map(Fraction, r)) for r in M]
    if not rows:
        return []
    ncols = len(rows[0])
    A = []
    for r in rows:
        den = _lcm(x.denominator for x in r) if r else 1
        A.append([int(x * den) for x in r])
    U = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(i, j, a, b, c, e):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + e col_j)
        for mat in (A, U):
            for r in mat:
                x, y = r[i], r[j]
                r[i], r[j] = a * x + b * y, c * x + e * y

    pivot_col = 0
    for r in range(len(A)):
        if pivot_col >= ncols:
            break
        for j in range(pivot_col + 1, ncols):
            x, y = A[r][pivot_col], A[r][j]
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            colop(pivot_col, j, s, t, -y // g, x // g)
        if A[r][pivot_col] != 0:
            pivot_col += 1
    basis = [[U[i][j] for i in range(ncols)] for j in range(pivot_col, ncols)]
    out = []
    for v in basis:
        first = next((x for x in v if x), 0)
        out.append(tuple(-x for x in v) if first < 0 else tuple(v))
    return sorted(out, reverse=True)


def _xgcd(a: int, b: int) -> tuple:
    """``(g, s, t)`` with ``s a + t b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def kernel_lattices(s: Seed) -> tuple:
    """``(ker_left, ker_right)``: integer bases of ``alpha . eps = 0`` and ``eps . beta = 0``."""
    n = s.n
    transpose = [[s.eps[j][i] for j in range(n)] for i in range(n)]
    return integer_kernel(transpose), integer_kernel(s.eps)
