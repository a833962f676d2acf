"""Tropical points, piecewise-linear mutation dynamics and finite-type canonical maps."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .clustermaps import apply_word
from .exactalg import FactoredFrac, LaurentPoly, RatFunc
from .seed import (
    FrozenDirectionError,
    MutationWord,
    Seed,
    SeedError,
    _pad_perm,
    dual_seed,
    exchange_graph,
    mutate_seed,
    permute_seed,
)

__all__ = [
    "TropPoint",
    "InfiniteTypeError",
    "trop_x_mutate",
    "trop_a_mutate",
    "trop_apply_word",
    "sharp_prime_x_mutate",
    "delta_map",
    "pairing_P",
    "p_defect",
    "p_defect_closed_form",
    "NonnegSearch",
    "find_nonneg_seed",
    "Cone",
    "cone_decomposition",
    "pairing_Iprime",
    "canonical_map_IX",
    "ix_all_choices",
    "a2_canonical_IA",
    "a2_ia_cases",
    "a2_ia_maxplus",
    "trop_laurent_fn",
    "trop_laurent",
    "CanonicalMapError",
]

_CARRIERS = {"int": int, "rat": Fraction, "rational": Fraction, "float": float}


class InfiniteTypeError(ValueError):
    """An operation that needs a finite exchange graph met an infinite one."""


@dataclass(frozen=True)
class TropPoint:
    """Coordinates of a point of the tropical A- or X-space in the chart of ``seed``."""

    seed: Seed
    coords: tuple
    space: str = "X"
    carrier: str = "int"

    def __post_init__(self):
        if self.space not in ("A", "X"):
            raise ValueError(f"space must be 'A' or 'X', not {self.space!r}")
        if self.carrier not in _CARRIERS:
            raise ValueError(f"unknown carrier {self.carrier!r}")
        if len(self.coords) != self.seed.n:
            raise ValueError(f"point has {len(self.coords)} coordinates, seed has {self.seed.n}")
        conv = _CARRIERS[self.carrier]
        vals = []
        for c in self.coords:
            v = conv(c) if not isinstance(c, str) else conv(Fraction(c)) if conv is not float else float(Fraction(c))
            if conv is int and v != Fraction(c):
                raise ValueError(f"{c} is not an integer")
            vals.append(v)
        object.__setattr__(self, "coords", tuple(vals))

    def with_coords(self, seed: Seed, coords) -> "TropPoint":
        return TropPoint(seed, tuple(coords), self.space, self.carrier)

    def to_json(self) -> dict:
        return {"space": self.space, "carrier": self.carrier, "coords": [str(c) if isinstance(c, Fraction) else c for c in self.coords]}

    @classmethod
    def from_json(cls, seed: Seed, obj: dict) -> "TropPoint":
        carrier = obj.get("carrier", "int")
        coords = obj["coords"]
        return cls(seed, tuple(coords), obj.get("space", "X"), carrier)


def _check_dir(s: Seed, k: int) -> None:
    if not 0 <= k < s.n:
        raise SeedError(f"direction {k} out of range")
    if k in s.frozen:
        raise FrozenDirectionError(f"direction {k} is frozen")


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _x_coords(s: Seed, x: Sequence, k: int) -> list:
    out = list(x)
    xk = x[k]
    for i in range(s.n):
        if i == k:
            out[i] = -xk
            continue
        e = s.eps[i][k]
        if e:
            e = int(e) if e.denominator == 1 else e
            out[i] = x[i] - e * max(0, -_sgn(e) * xk)
    return out


def _a_coords(s: Seed, a: Sequence, k: int) -> list:
    plus = 0
    minus = 0
    for j in range(s.n):
        e = s.eps[k][j]
        if e > 0:
            plus += int(e) * a[j]
        elif e < 0:
            minus += int(-e) * a[j]
    out = list(a)
    out[k] = max(plus, minus) - a[k]
    return out


def trop_x_mutate(p: TropPoint, k: int) -> TropPoint:
    """``x'_k = -x_k`` and ``x'_i = x_i - eps_ik max(0, -sgn(eps_ik) x_k)``."""
    if p.space != "X":
        raise ValueError("trop_x_mutate needs an X-point")
    _check_dir(p.seed, k)
    return p.with_coords(mutate_seed(p.seed, k), _x_coords(p.seed, p.coords, k))


def trop_a_mutate(p: TropPoint, k: int) -> TropPoint:
    """``a'_k = max(sum_{eps_kj>0} eps_kj a_j, sum_{eps_kj<0} -eps_kj a_j) - a_k``."""
    if p.space != "A":
        raise ValueError("trop_a_mutate needs an A-point")
    _check_dir(p.seed, k)
    return p.with_coords(mutate_seed(p.seed, k), _a_coords(p.seed, p.coords, k))


def trop_apply_word(p: TropPoint, w: MutationWord) -> TropPoint:
    for kind, arg in w:
        if kind == "mu":
            p = trop_x_mutate(p, arg) if p.space == "X" else trop_a_mutate(p, arg)
        else:
            sigma = _pad_perm(arg, p.seed.n)
            c = [None] * p.seed.n
            for i, j in enumerate(sigma):
                c[j] = p.coords[i]
            p = p.with_coords(permute_seed(p.seed, sigma), c)
    return p


def sharp_prime_x_mutate(s: Seed, x: Sequence, k: int) -> list:
    """Two-stage form ``x -> x^sharp -> x'`` with
    ``x^sharp_i = x_i - [eps_ik]_+ max(0, x_k)`` and ``x'_i = x^sharp_i + [eps_ik]_+ x^sharp_k``.

    Kept for comparison only: it agrees with :func:`trop_x_mutate` on
    rows with ``eps_ik >= 0`` and differs where ``eps_ik < 0`` and ``x_k > 0``.
    """
    sharp = [x[i] - max(s.eps[i][k], 0) * max(0, x[k]) for i in range(s.n)]
    out = []
    for i in range(s.n):
        if i == k:
            out.append(-sharp[k])
        else:
            out.append(sharp[i] + max(s.eps[i][k], 0) * sharp[k])
    return out


def delta_map(p: TropPoint) -> TropPoint:
    """``x_i -> d_i x_i``, landing in the Langlands dual tropical X-space."""
    if p.space != "X":
        raise ValueError("delta_map acts on X-points")
    if p.carrier != "int":
        raise ValueError("delta_map expects integer points")
    s = p.seed
    return TropPoint(dual_seed(s, "langlands"), tuple(d * x for d, x in zip(s.d, p.coords)), "X", "int")


def pairing_P(s: Seed, a: Sequence, x: Sequence):
    """``P = sum_i d_i a_i x_i``."""
    return sum(d * ai * xi for d, ai, xi in zip(s.d, a, x))


def p_defect(s: Seed, a: TropPoint, x: TropPoint, k: int):
    """``P`` after mutating both points at ``k`` minus ``P`` before, by recomputation."""
    if a.seed != s or x.seed != s:
        raise ValueError("points must live on the given seed")
    a2 = trop_a_mutate(a, k)
    x2 = trop_x_mutate(x, k)
    return pairing_P(a2.seed, a2.coords, x2.coords) - pairing_P(s, a.coords, x.coords)


def p_defect_closed_form(s: Seed, a: Sequence, x: Sequence, k: int):
    """``d_k |x_k| phi_k(a)`` if ``x_k phi_k(a) < 0`` else 0, with ``phi_k(a) = sum_j eps_kj a_j``."""
    phi = sum(s.eps[k][j] * a[j] for j in range(s.n))
    phi = int(phi) if isinstance(phi, Fraction) and phi.denominator == 1 else phi
    if x[k] * phi < 0:
        return s.d[k] * abs(x[k]) * phi
    return 0


@dataclass
class NonnegSearch:
    found: bool
    word: MutationWord
    seed: Seed
    point: TropPoint
    steps: int

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "word": str(self.word),
            "steps": self.steps,
            "coords": list(self.point.to_json()["coords"]),
            "seed": self.seed.to_json(),
        }


def find_nonneg_seed(s: Seed, x: TropPoint, max_steps: int | None = None) -> NonnegSearch:
    """Greedy mutation at the smallest index with a negative mutable coordinate.

    Without ``max_steps`` the bound is the number of clusters of a finite
    exchange graph (or 1000 if the graph is not finite within the default
    enumeration bound).
    """
    if max_steps is None:
        g = exchange_graph(s, max_seeds=5000, with_classes=False)
        max_steps = g.n_clusters if g.finite else 1000
    p = x if x.seed == s else x.with_coords(s, x.coords)
    ks = []
    while True:
        neg = [i for i in s.mutable if p.coords[i] < 0]
        if not neg:
            return NonnegSearch(True, MutationWord.mutations(ks), p.seed, p, len(ks))
        if len(ks) >= max_steps:
            return NonnegSearch(False, MutationWord.mutations(ks), p.seed, p, len(ks))
        k = neg[0]
        p = trop_x_mutate(p, k)
        ks.append(k)


def _finite_graph(s: Seed, max_seeds: int = 20000):
    g = exchange_graph(s, max_seeds=max_seeds, with_classes=False)
    if not g.finite:
        raise InfiniteTypeError("exchange graph exceeded its bound; seed is not of finite type")
    return g


def _transport_all(g, p: TropPoint) -> list:
    """Coordinates of ``p`` at every cluster of ``g`` (BFS tree order)."""
    out = [None] * g.n_clusters
    out[0] = p
    for v in range(1, g.n_clusters):
        u, k = g.parent[v]
        q = out[u]
        out[v] = trop_x_mutate(q, k) if q.space == "X" else trop_a_mutate(q, k)
    return out


@dataclass
class Cone:
    cluster: int
    word: MutationWord
    seed: Seed
    rays: tuple
    zero_signature: tuple = ()

    def to_json(self) -> dict:
        return {"cluster": self.cluster, "word": str(self.word), "rays": [list(r) for r in self.rays]}


def _inverse_x(s_end: Seed, path: MutationWord, coords: Sequence) -> list:
    """Pull coordinates at the end of ``path`` back to its start (mutations are involutions)."""
    ks = [k for _, k in path]
    cur = s_end
    c = list(coords)
    for k in reversed(ks):
        # cur is the seed after mutation k; mutating again at k returns
        c = _x_coords(cur, c, k)
        cur = mutate_seed(cur, k)
    return c


def cone_decomposition(s: Seed) -> list:
    """Cones ``{x : x >= 0 in the chart of cluster v}``, one per cluster, as rays in the initial chart.

    Ray ``i`` of cluster ``v`` is the initial-chart preimage of the ``i``-th
    unit vector of that chart; frozen directions are dropped.
    """
    g = _finite_graph(s)
    cones = []
    mut = s.mutable
    for v in range(g.n_clusters):
        w = g.path_to(v)
        rays = []
        for i in mut:
            e = [0] * s.n
            e[i] = 1
            rays.append(tuple(_inverse_x(g.seeds[v], w, e)))
        cones.append(Cone(v, w, g.seeds[v], tuple(rays)))
    return cones


def pairing_Iprime(s: Seed, a: TropPoint, x: TropPoint):
    """``max`` over all clusters of ``sum_i d_i a_i x_i``."""
    g = _finite_graph(s)
    a0 = a if a.seed == s else a.with_coords(s, a.coords)
    x0 = x if x.seed == s else x.with_coords(s, x.coords)
    As = _transport_all(g, a0)
    Xs = _transport_all(g, x0)
    return max(pairing_P(g.seeds[v], As[v].coords, Xs[v].coords) for v in range(g.n_clusters))


def _ix_from(s_dual: Seed, w: MutationWord, coords: Sequence) -> RatFunc:
    cm = apply_word(s_dual, w, "A")
    f = FactoredFrac.one(s_dual.n)
    for img, e in zip(cm._ff, coords):
        if e:
            f = f * img ** int(e)
    return f.to_ratfunc()


class CanonicalMapError(RuntimeError):
    """A computed canonical function failed its Laurent consistency check."""


def canonical_map_IX(s: Seed, l: TropPoint) -> LaurentPoly:
    """``prod A_i^{x_i}`` over a nonnegative cluster for ``l``, in the initial dual A-chart.

    The monomial lives on the Langlands dual seed; it is pulled back to the
    initial chart along the same mutation word and must come out Laurent.
    """
    g = _finite_graph(s)
    res = find_nonneg_seed(s, l, max_steps=g.n_clusters)
    if not res.found:
        raise CanonicalMapError("no nonnegative seed found within the exchange graph size")
    f = _ix_from(dual_seed(s, "langlands"), res.word, res.point.coords)
    lp = f.as_laurent()
    if lp is None:
        raise CanonicalMapError(f"canonical function {f} is not Laurent")
    return lp


def ix_all_choices(s: Seed, l: TropPoint) -> list:
    """``(cluster, Laurent polynomial)`` for every cluster at which ``l`` is nonnegative."""
    g = _finite_graph(s)
    sd = dual_seed(s, "langlands")
    l0 = l if l.seed == s else l.with_coords(s, l.coords)
    pts = _transport_all(g, l0)
    out = []
    for v, p in enumerate(pts):
        if all(p.coords[i] >= 0 for i in s.mutable):
            f = _ix_from(sd, g.path_to(v), p.coords)
            lp = f.as_laurent()
            if lp is None:
                raise CanonicalMapError(f"canonical function {f} at cluster {v} is not Laurent")
            out.append((v, lp))
    return out


# -- the explicit A2 table ------------------------------------------------

def _v(e0: int, e1: int) -> LaurentPoly:
    return LaurentPoly.monomial((e0, e1))


def a2_ia_cases(a: int, b: int) -> list:
    """``(name, RatFunc)`` for every case of the A2 table whose domain contains ``(a, b)``."""
    one = LaurentPoly.one(2)
    X, Y = _v(1, 0), _v(0, 1)
    f_xy = RatFunc(one + X, X * Y)           # (1+X)/(XY)
    f_3 = RatFunc(one + X + X * Y, Y)        # (1+X+XY)/Y
    f_y = RatFunc((one + Y) * X)             # (1+Y)X
    out = []
    if a <= 0 and b >= 0:
        out.append(("a<=0,b>=0", RatFunc(_v(a, b))))
    if a <= 0 and b <= 0:
        out.append(("a<=0,b<=0", f_xy ** (-b) * RatFunc(_v(a, 0))))
    if a >= 0 and b <= 0:
        out.append(("a>=0,b<=0", f_3 ** a * f_xy ** (-b)))
    if a >= b >= 0:
        out.append(("a>=b>=0", f_y ** b * f_3 ** (a - b)))
    if b >= a >= 0:
        out.append(("b>=a>=0", RatFunc(_v(0, b - a)) * f_y ** a))
    return out


def a2_canonical_IA(a: int, b: int) -> RatFunc:
    """The type A2 canonical function of the tropical A-point ``(a, b)``, a function of ``(X, Y)``."""
    return a2_ia_cases(int(a), int(b))[0][1]


def a2_ia_maxplus(a: int, b: int, u, v) -> list:
    """Max-plus evaluation of every applicable case formula at ``(X, Y) = (u, v)``."""
    t_xy = max(0, u) - u - v
    t_3 = max(0, u, u + v) - v
    t_y = max(0, v) + u
    out = []
    if a <= 0 and b >= 0:
        out.append(a * u + b * v)
    if a <= 0 and b <= 0:
        out.append(-b * t_xy + a * u)
    if a >= 0 and b <= 0:
        out.append(a * t_3 - b * t_xy)
    if a >= b >= 0:
        out.append(b * t_y + (a - b) * t_3)
    if b >= a >= 0:
        out.append((b - a) * v + a * t_y)
    return out


def _extreme_exponents(p: LaurentPoly) -> list:
    # for fixed leading coordinates the max is attained at an extreme last coordinate
    lo: dict = {}
    hi: dict = {}
    for e in p.terms:
        head, last = e[:-1], e[-1]
        if head not in lo or last < lo[head]:
            lo[head] = last
        if head not in hi or last > hi[head]:
            hi[head] = last
    return sorted({h + (lo[h],) for h in lo} | {h + (hi[h],) for h in hi})


def trop_laurent(p: LaurentPoly, point: Sequence):
    """Tropicalisation of a positive Laurent polynomial: ``max_e <e, point>``."""
    return max(sum(e_i * x_i for e_i, x_i in zip(e, point)) for e in _extreme_exponents(p))


def trop_laurent_fn(p: LaurentPoly):
    """:func:`trop_laurent` with the exponent pruning done once, for repeated evaluation."""
    exps = _extreme_exponents(p)
    return lambda point: max(sum(e_i * x_i for e_i, x_i in zip(e, point)) for e in exps)
