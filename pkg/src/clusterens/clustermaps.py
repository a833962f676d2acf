"""Classical cluster A- and X-transformations and their invariance checks.

A :class:`CoordMap` from seed ``s`` to seed ``s'`` stores, for every
coordinate of ``s'``, its pullback as a rational function of the
coordinates of ``s``. Compositions are carried in factored form and only
expanded when a :class:`RatFunc` is asked for.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .exactalg import FactoredFrac, LaurentPoly, RatFunc
from .seed import (
    FrozenDirectionError,
    MutationWord,
    Seed,
    SeedError,
    kernel_lattices,
    mutate_seed,
    permute_seed,
    _pad_perm,
)

__all__ = [
    "CoordMap",
    "x_mutation",
    "a_mutation",
    "apply_word",
    "p_map",
    "p_commutes",
    "casimir_check",
    "transport_casimir",
    "h_a_action_check",
    "transport_h_a",
    "poisson_bracket",
    "poisson_invariance",
    "omega_form",
    "omega_invariance",
    "laurent_check",
    "random_word",
    "KernelError",
]


class KernelError(ValueError):
    """A vector that should lie in a kernel lattice does not."""


def _check_direction(s: Seed, k: int) -> None:
    if not 0 <= k < s.n:
        raise SeedError(f"direction {k} out of range")
    if k in s.frozen:
        raise FrozenDirectionError(f"direction {k} is frozen")


def _int(e: Fraction) -> int:
    if e.denominator != 1:
        raise SeedError(f"non-integral exponent {e}")
    return int(e)


class CoordMap:
    """Pullbacks of the coordinates of ``seed_to`` along a cluster transformation."""

    def __init__(self, seed_from: Seed, seed_to: Seed, space: str, factored: Sequence[FactoredFrac]):
        self.seed_from = seed_from
        self.seed_to = seed_to
        self.space = space
        self._ff = list(factored)
        self._images = None

    @classmethod
    def identity(cls, s: Seed, space: str) -> "CoordMap":
        return cls(s, s, space, [FactoredFrac.var(s.n, i) for i in range(s.n)])

    @property
    def images(self) -> list:
        if self._images is None:
            self._images = [f.to_ratfunc() for f in self._ff]
        return self._images

    def then(self, other: "CoordMap") -> "CoordMap":
        """The composite: first ``self``, then ``other``."""
        if other.seed_from != self.seed_to:
            raise SeedError("maps do not compose: seeds differ")
        return CoordMap(self.seed_from, other.seed_to, self.space,
                        [_substitute(f, self._ff) for f in other._ff])

    def is_identity(self) -> bool:
        n = self.seed_from.n
        return self.seed_to == self.seed_from and all(
            img == RatFunc.var(n, i) for i, img in enumerate(self.images)
        )

    def __repr__(self):
        return f"CoordMap({self.space}: " + ", ".join(str(f) for f in self.images) + ")"


def _substitute(f: FactoredFrac, args: Sequence[FactoredFrac]) -> FactoredFrac:
    out = FactoredFrac(args[0].nvars, f.coeff, (0,) * args[0].nvars)
    for a, k in zip(args, f.mono):
        if k:
            out = out * (a ** k)
    for p, e in f.factors.items():
        out = out * (FactoredFrac.eval_poly(p, args) ** e)
    return out


# -- single steps on factored images --------------------------------------

def _x_step(s: Seed, k: int, X: Sequence[FactoredFrac]) -> list:
    """Images of the mutated X-coordinates in terms of ``X``."""
    n = s.n
    one = FactoredFrac.one(X[0].nvars)
    out = []
    for i in range(n):
        if i == k:
            out.append(X[k].inverse())
            continue
        e = _int(s.eps[i][k])
        if e == 0:
            out.append(X[i])
        elif e > 0:
            out.append(X[i] * (one + X[k].inverse()) ** (-e))
        else:
            out.append(X[i] * (one + X[k]) ** (-e))
    return out


def _a_step(s: Seed, k: int, A: Sequence[FactoredFrac]) -> list:
    m = A[0].nvars
    plus = FactoredFrac.one(m)
    minus = FactoredFrac.one(m)
    for j in range(s.n):
        e = _int(s.eps[k][j])
        if e > 0:
            plus = plus * A[j] ** e
        elif e < 0:
            minus = minus * A[j] ** (-e)
    out = list(A)
    out[k] = (plus + minus) / A[k]
    return out


def _perm_step(sigma: Sequence[int], Y: Sequence[FactoredFrac]) -> list:
    out = [None] * len(Y)
    for i, j in enumerate(sigma):
        out[j] = Y[i]
    return out


def x_mutation(s: Seed, k: int) -> CoordMap:
    _check_direction(s, k)
    X = [FactoredFrac.var(s.n, i) for i in range(s.n)]
    return CoordMap(s, mutate_seed(s, k), "X", _x_step(s, k, X))


def a_mutation(s: Seed, k: int) -> CoordMap:
    """``A_k' = (prod_{eps_kj>0} A_j^eps_kj + prod_{eps_kj<0} A_j^-eps_kj) / A_k``; an all-zero row gives ``2/A_k``."""
    _check_direction(s, k)
    A = [FactoredFrac.var(s.n, i) for i in range(s.n)]
    return CoordMap(s, mutate_seed(s, k), "A", _a_step(s, k, A))


def apply_word(s: Seed, w: MutationWord, space: str) -> CoordMap:
    """Compose the coordinate transformations along ``w``.

    A permutation step ``sigma`` satisfies ``sigma^* Y'_{sigma(i)} = Y_i``.
    """
    if space not in ("A", "X"):
        raise ValueError(f"space must be 'A' or 'X', not {space!r}")
    cur = s
    Y = [FactoredFrac.var(s.n, i) for i in range(s.n)]
    step = _a_step if space == "A" else _x_step
    for pos, (kind, arg) in enumerate(w):
        if kind == "mu":
            try:
                _check_direction(cur, arg)
            except SeedError as exc:
                raise SeedError(f"step {pos}: {exc}") from None
            Y = step(cur, arg, Y)
            cur = mutate_seed(cur, arg)
        else:
            sigma = _pad_perm(arg, s.n)
            Y = _perm_step(sigma, Y)
            cur = permute_seed(cur, sigma)
    return CoordMap(s, cur, space, Y)


# -- p-map ----------------------------------------------------------------

def _p_images(s: Seed, A: Sequence[FactoredFrac] | None = None) -> list:
    if A is None:
        A = [FactoredFrac.var(s.n, i) for i in range(s.n)]
    out = []
    for i in range(s.n):
        f = FactoredFrac.one(A[0].nvars)
        for j in range(s.n):
            e = s.eps[i][j]
            if e:
                f = f * A[j] ** _int(e)
        out.append(f)
    return out


def p_map(s: Seed) -> CoordMap:
    """Monomial map ``p^* X_i = prod_j A_j^{eps_ij}`` from the A-torus to the X-torus."""
    return CoordMap(s, s, "p", _p_images(s))


def p_commutes(s: Seed, k: int) -> bool:
    """``mu_a^* p'^* X'_i == p^* mu_x^* X'_i`` for every ``i``."""
    _check_direction(s, k)
    A = [FactoredFrac.var(s.n, i) for i in range(s.n)]
    s2 = mutate_seed(s, k)
    lhs = _p_images(s2, _a_step(s, k, A))
    rhs = _x_step(s, k, _p_images(s, A))
    return all(a.to_ratfunc() == b.to_ratfunc() for a, b in zip(lhs, rhs))


# -- Casimirs and the H_A action ------------------------------------------

def _in_left_kernel(s: Seed, alpha) -> bool:
    return all(sum(alpha[i] * s.eps[i][j] for i in range(s.n)) == 0 for j in range(s.n))


def _in_right_kernel(s: Seed, beta) -> bool:
    return all(sum(s.eps[i][j] * beta[j] for j in range(s.n)) == 0 for i in range(s.n))


def transport_casimir(s: Seed, alpha: Sequence[int], k: int) -> tuple:
    """Left-kernel vector of the mutated seed carrying the same Casimir.

    ``alpha'_k = -alpha_k + sum_i [eps_ik]_+ alpha_i``, other entries unchanged.
    """
    out = list(alpha)
    out[k] = -alpha[k] + sum(max(s.eps[i][k], 0) * alpha[i] for i in range(s.n))
    return tuple(int(x) for x in out)


def transport_h_a(s: Seed, beta: Sequence[int], k: int) -> tuple:
    """``beta'_k = -beta_k + sum_j [eps_kj]_+ beta_j``, other entries unchanged."""
    out = list(beta)
    out[k] = -beta[k] + sum(max(s.eps[k][j], 0) * beta[j] for j in range(s.n))
    return tuple(int(x) for x in out)


def _monomial(n: int, exps: Sequence[int]) -> FactoredFrac:
    return FactoredFrac(n, 1, list(exps))


def casimir_check(s: Seed, alpha: Sequence[int], k: int, strict: bool = True) -> bool:
    """Pullback of ``prod X'_i^{alpha'_i}`` under ``x_mutation(s, k)`` equals ``prod X_i^{alpha_i}``.

    ``alpha'`` is :func:`transport_casimir`; it must itself lie in the left
    kernel of the mutated matrix. A vector outside the left kernel raises
    :class:`KernelError`, or returns False when ``strict`` is off.
    """
    _check_direction(s, k)
    if not _in_left_kernel(s, alpha):
        if strict:
            raise KernelError(f"{tuple(alpha)} is not in the left kernel")
        alpha2 = tuple(alpha)
    else:
        alpha2 = transport_casimir(s, alpha, k)
        if not _in_left_kernel(mutate_seed(s, k), alpha2):
            return False
    X = [FactoredFrac.var(s.n, i) for i in range(s.n)]
    img = _x_step(s, k, X)
    pulled = FactoredFrac.one(s.n)
    for f, a in zip(img, alpha2):
        if a:
            pulled = pulled * f ** a
    return pulled.to_ratfunc() == _monomial(s.n, alpha).to_ratfunc()


def h_a_action_check(s: Seed, beta: Sequence[int], k: int, strict: bool = True) -> bool:
    """Rescaling ``A_i -> t^{beta_i} A_i`` intertwines ``a_mutation(s, k)``.

    The mutated coordinate ``A'_k`` must pick up exactly ``t^{beta'_k}`` with
    ``beta'`` from :func:`transport_h_a`, and ``beta'`` must be in the right
    kernel of the mutated matrix.
    """
    _check_direction(s, k)
    n = s.n
    if not _in_right_kernel(s, beta):
        if strict:
            raise KernelError(f"{tuple(beta)} is not in the right kernel")
        return False
    beta2 = transport_h_a(s, beta, k)
    if not _in_right_kernel(mutate_seed(s, k), beta2):
        return False
    m = n + 1  # last variable is t
    A = [FactoredFrac.var(m, i) for i in range(n)]
    t = FactoredFrac.var(m, n)
    scaled = [a * t ** b for a, b in zip(A, beta)]
    lhs = _a_step(s, k, scaled)
    rhs = [f * t ** b for f, b in zip(_a_step(s, k, A), beta2)]
    return all(a.to_ratfunc() == b.to_ratfunc() for a, b in zip(lhs, rhs))


# -- Poisson bracket and 2-form -------------------------------------------

def poisson_bracket(s: Seed, f: RatFunc, g: RatFunc) -> RatFunc:
    """``{f, g} = sum_ij eps_hat_ij X_i X_j df/dX_i dg/dX_j``."""
    n = s.n
    eh = s.eps_hat()
    df = [f.derivative(i) for i in range(n)]
    dg = [g.derivative(j) for j in range(n)]
    total = RatFunc.from_int(n, 0)
    for i in range(n):
        if df[i].is_zero():
            continue
        for j in range(n):
            c = eh[i][j]
            if c and not dg[j].is_zero():
                total = total + df[i] * dg[j] * RatFunc.monomial(_unit(n, i, j), c)
    return total


def _unit(n: int, i: int, j: int) -> list:
    e = [0] * n
    e[i] += 1
    e[j] += 1
    return e


def poisson_invariance(s: Seed, k: int) -> bool:
    """``{mu^*X'_i, mu^*X'_j} == eps_hat'_ij mu^*X'_i mu^*X'_j`` for all pairs."""
    imgs = x_mutation(s, k).images
    eh2 = mutate_seed(s, k).eps_hat()
    n = s.n
    for i in range(n):
        for j in range(i + 1, n):
            lhs = poisson_bracket(s, imgs[i], imgs[j])
            rhs = imgs[i] * imgs[j] * eh2[i][j]
            if lhs != rhs:
                return False
    return True


def omega_form(s: Seed) -> list:
    """Antisymmetric matrix ``M`` with ``Omega = sum_{i<j} M_ij dA_i ^ dA_j``.

    ``M_ij = 2 eps_tilde_ij / (A_i A_j)``.
    """
    n = s.n
    et = s.eps_tilde()
    return [[RatFunc.monomial(_neg_unit(n, i, j), 2 * et[i][j]) if i != j else RatFunc.from_int(n, 0)
             for j in range(n)] for i in range(n)]


def _neg_unit(n: int, i: int, j: int) -> list:
    return [-x for x in _unit(n, i, j)]


def _pull_omega(M2: list, images: list, n: int) -> list:
    J = [[images[a].derivative(b) for b in range(n)] for a in range(n)]
    Mp = [[M2[a][b].substitute(images) for b in range(n)] for a in range(n)]
    zero = RatFunc.from_int(n, 0)
    out = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = zero
            for a in range(n):
                if J[a][i].is_zero():
                    continue
                for b in range(n):
                    if a != b and not J[b][j].is_zero():
                        acc = acc + J[a][i] * Mp[a][b] * J[b][j]
            out[i][j] = acc
    return out


def omega_invariance(s: Seed, k: int) -> bool:
    """Pull the form of ``mu_k(s)`` back through ``a_mutation`` and compare with ``omega_form(s)``."""
    n = s.n
    imgs = a_mutation(s, k).images
    pulled = _pull_omega(omega_form(mutate_seed(s, k)), imgs, n)
    M = omega_form(s)
    return all(pulled[i][j] == M[i][j] for i in range(n) for j in range(n))


# -- Laurent phenomenon ---------------------------------------------------

def laurent_check(s: Seed, w: MutationWord, space: str = "A", names=None) -> list:
    """Per-coordinate report ``{image, laurent, positive, term_count}``."""
    cm = apply_word(s, w, space)
    out = []
    for img in cm.images:
        lp = img.as_laurent()
        if lp is not None:
            out.append({
                "image": lp.to_str(names),
                "laurent": True,
                "positive": lp.is_nonnegative(),
                "term_count": len(lp),
            })
        else:
            out.append({
                "image": img.to_str(names),
                "laurent": False,
                "positive": img.num.is_nonnegative() and img.den.is_nonnegative(),
                "term_count": len(img.num),
            })
    return out


def random_word(s: Seed, length: int, rng: random.Random) -> MutationWord:
    """Random mutation word with no immediate repetition."""
    mut = list(s.mutable)
    ks = []
    for _ in range(length):
        choices = [k for k in mut if not ks or k != ks[-1]] or mut
        ks.append(rng.choice(choices))
    return MutationWord.mutations(ks)
