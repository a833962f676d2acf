"""The W-element in the second exterior power of the multiplicative group,
its mutation defect, tame symbols, and numerical dilogarithm identities.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .clustermaps import a_mutation, omega_form
from .exactalg import LaurentPoly, RatFunc, divides
from .seed import FrozenDirectionError, MutationWord, Seed, SeedError, RANK2_TYPES, mutate_seed, permute_seed, _pad_perm

__all__ = [
    "WedgeElement",
    "BasisError",
    "basis_express",
    "w_element",
    "w_element_from_p",
    "mutation_defect",
    "mutation_defect_check",
    "valuation",
    "tame_symbol",
    "vanishing_certificate",
    "h_a_invariance",
    "dlog_shadow_check",
    "li2",
    "bloch_wigner",
    "rank2_orbit",
    "dilog_sum",
    "dilog_period_check",
    "beta_invariant",
    "beta_conjugation_check",
    "inverse_word",
    "NotFixedError",
    "find_fixed_point",
    "PoleAlongOrbit",
]


class BasisError(ValueError):
    """A function is not a product of powers of the given basis."""


class NotFixedError(ValueError):
    """The base point is not fixed by the loop."""


class PoleAlongOrbit(ZeroDivisionError):
    """A numerical orbit hit a pole of the recursion."""


def _as_ratfunc(f) -> RatFunc:
    return f if isinstance(f, RatFunc) else RatFunc(f)


def _strip(p: LaurentPoly):
    """``(monomial exponent, primitive non-monomial part or None, constant)``."""
    c, m, q = p.primitive_split()
    return m, (None if q.is_constant() else q), Fraction(c) * (q.constant_value() if q.is_constant() else 1)


def basis_express(f, basis: Sequence) -> tuple | None:
    """Integers ``e`` and a constant ``u`` with ``f = u * prod basis_i^{e_i}``, or ``None``.

    Basis elements are Laurent monomials in single variables or non-monomial
    polynomials; non-monomial factors are removed by repeated exact
    division of numerator and denominator, the rest is matched against the
    variable basis elements.
    """
    f = _as_ratfunc(f)
    n = f.nvars
    exps = [0] * len(basis)
    var_slot: dict = {}
    polys = []
    for idx, b in enumerate(basis):
        b = _as_ratfunc(b)
        if not b.den.is_monomial():
            raise BasisError("basis elements must be Laurent polynomials")
        lp = b.as_laurent()
        if lp.is_monomial():
            (e, c), = lp.terms.items()
            nz = [i for i, x in enumerate(e) if x]
            if len(nz) != 1 or abs(e[nz[0]]) != 1 or abs(c) != 1:
                raise BasisError("monomial basis elements must be single variables")
            var_slot[nz[0]] = (idx, e[nz[0]])
        else:
            _, q, _ = _strip(lp)
            polys.append((idx, q, lp))
    num, den = f.num, f.den
    for idx, q, _ in polys:
        for sign, attr in ((1, "num"), (-1, "den")):
            while True:
                cur = num if attr == "num" else den
                r = divides(q, cur)
                if r is None:
                    break
                exps[idx] += sign
                if attr == "num":
                    num = r
                else:
                    den = r
    if not (num.is_monomial() and den.is_monomial()):
        return None
    (en, cn), = num.terms.items()
    (ed, cd), = den.terms.items()
    mono = [a - b for a, b in zip(en, ed)]
    unit = Fraction(cn, cd)
    # monomial parts of polynomial basis elements
    for idx, q, lp in polys:
        m, _, c = _strip(lp)
        e = exps[idx]
        if e:
            mono = [x - e * y for x, y in zip(mono, m)]
            unit /= c ** e
    for var in range(n):
        if mono[var]:
            if var not in var_slot:
                return None
            idx, sgn = var_slot[var]
            exps[idx] += sgn * mono[var]
    return tuple(exps), unit


@dataclass
class WedgeElement:
    """``sum_{i<j} M_ij b_i ^ b_j`` over a multiplicative basis ``b``."""

    basis: list
    M: list = field(default=None)

    def __post_init__(self):
        m = len(self.basis)
        if self.M is None:
            self.M = [[Fraction(0)] * m for _ in range(m)]
        for b in self.basis:
            rb = _as_ratfunc(b)
            if rb.num.is_constant() and rb.den.is_constant():
                raise BasisError("basis elements must be non-constant")
        for i in range(m):
            for j in range(m):
                if self.M[i][j] != -self.M[j][i]:
                    raise ValueError("coefficient matrix must be antisymmetric")

    @property
    def size(self) -> int:
        return len(self.basis)

    def add_wedge(self, u: Sequence, v: Sequence, coeff=1) -> None:
        """Add ``coeff * (prod b^u) ^ (prod b^v)``."""
        m = self.size
        for i in range(m):
            if not u[i] and not v[i]:
                continue
            for j in range(m):
                x = u[i] * v[j] - u[j] * v[i]
                if x:
                    self.M[i][j] += coeff * x

    def add_functions(self, f, g, coeff=1) -> None:
        eu = basis_express(f, self.basis)
        ev = basis_express(g, self.basis)
        if eu is None or ev is None:
            raise BasisError(f"{f if eu is None else g} is not in the span of the basis")
        self.add_wedge(eu[0], ev[0], coeff)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.M for x in row)

    def __sub__(self, other: "WedgeElement") -> "WedgeElement":
        if len(self.basis) != len(other.basis):
            raise ValueError("different bases")
        m = self.size
        return WedgeElement(self.basis, [[self.M[i][j] - other.M[i][j] for j in range(m)] for i in range(m)])

    def __eq__(self, other):
        if not isinstance(other, WedgeElement):
            return NotImplemented
        return (self - other).is_zero()

    def terms(self) -> list:
        m = self.size
        return [(i, j, self.M[i][j]) for i in range(m) for j in range(i + 1, m) if self.M[i][j]]

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"b{i}" for i in range(self.size)]
        ts = self.terms()
        if not ts:
            return "0"
        return " + ".join(f"{c}*{names[i]}^{names[j]}" for i, j, c in ts)

    def __str__(self):
        return self.to_str()


def _a_basis(n: int) -> list:
    return [LaurentPoly.var(n, i) for i in range(n)]


def w_element(s: Seed) -> WedgeElement:
    """``W = sum_ij eps_tilde_ij A_i ^ A_j``, stored as ``M_ij = 2 eps_tilde_ij``."""
    n = s.n
    et = s.eps_tilde()
    return WedgeElement(_a_basis(n), [[2 * et[i][j] for j in range(n)] for i in range(n)])


def _p_images(s: Seed) -> list:
    n = s.n
    out = []
    for i in range(n):
        if any(e.denominator != 1 for e in s.eps[i]):
            raise SeedError("p-map needs integral rows")
        out.append(RatFunc.monomial([int(e) for e in s.eps[i]]))
    return out


def w_element_from_p(s: Seed) -> WedgeElement:
    """``W = sum_i d_i A_i ^ p^*X_i`` computed through basis expression."""
    n = s.n
    w = WedgeElement(_a_basis(n))
    for i, px in enumerate(_p_images(s)):
        w.add_functions(RatFunc.var(n, i), px, s.d[i])
    return w


def _exchange_parts(s: Seed, k: int) -> tuple:
    n = s.n
    plus = [0] * n
    minus = [0] * n
    for j in range(n):
        e = int(s.eps[k][j])
        if e > 0:
            plus[j] = e
        elif e < 0:
            minus[j] = -e
    return LaurentPoly.monomial(plus), LaurentPoly.monomial(minus)


def mutation_defect(s: Seed, k: int) -> WedgeElement:
    """``mu^*W' - W + 2 d_k (1 + p^*X_k) ^ p^*X_k`` over ``(A_0..A_{n-1}, B_k)``.

    ``B_k = A_k^+ + A_k^-`` is the exchange binomial; it is left out of the
    basis when it is a constant (all-zero row).
    """
    if not 0 <= k < s.n:
        raise SeedError(f"direction {k} out of range")
    if k in s.frozen:
        raise FrozenDirectionError(f"direction {k} is frozen")
    n = s.n
    ap, am = _exchange_parts(s, k)
    B = ap + am
    basis = _a_basis(n) + ([] if B.is_constant() else [B])
    out = WedgeElement(basis)
    s2 = mutate_seed(s, k)
    imgs = a_mutation(s, k).images
    et2 = s2.eps_tilde()
    exps = []
    for f in imgs:
        e = basis_express(f, basis)
        if e is None:
            raise BasisError(f"mutated coordinate {f} is not in the span of the basis")
        exps.append(e[0])
    for i in range(n):
        for j in range(n):
            if et2[i][j]:
                out.add_wedge(exps[i], exps[j], et2[i][j])
    et = s.eps_tilde()
    for i in range(n):
        for j in range(n):
            if et[i][j]:
                ei = [0] * len(basis)
                ej = [0] * len(basis)
                ei[i] = 1
                ej[j] = 1
                out.add_wedge(ei, ej, -et[i][j])
    px = _p_images(s)[k]
    out.add_functions(px + 1, px, 2 * s.d[k])
    return out


def mutation_defect_check(s: Seed, k: int) -> bool:
    return mutation_defect(s, k).is_zero()


def valuation(f, k: int) -> tuple:
    """``(v_{A_k}(f), leading coefficient)`` for the monomial valuation along ``A_k``."""
    f = _as_ratfunc(f)
    vn, un = f.num.lowest_part(k)
    vd, ud = f.den.lowest_part(k)
    return vn - vd, RatFunc(un, ud)


def tame_symbol(w: WedgeElement, k: int) -> RatFunc:
    """``prod_{i<j} (g^{v(f)} / f^{v(g)})^{M_ij}`` restricted to ``A_k = 0``, with ``f = b_i``, ``g = b_j``."""
    vals = [valuation(b, k) for b in w.basis]
    n = _as_ratfunc(w.basis[0]).nvars
    out = RatFunc.from_int(n, 1)
    for i, j, c in w.terms():
        c = Fraction(c)
        if c.denominator != 1:
            raise ValueError("tame symbol needs integral coefficients")
        vi, ui = vals[i]
        vj, uj = vals[j]
        out = out * ((uj ** vi) * (ui ** (-vj))) ** int(c)
    return out


def vanishing_certificate(s: Seed, k: int) -> bool:
    """``(1 + p^*X_k) A_k^- == A_k mu^*A'_k``: so ``1 + p^*X_k`` vanishes where ``A_k`` does."""
    ap, am = _exchange_parts(s, k)
    px = _p_images(s)[k]
    lhs = (px + 1) * RatFunc(am)
    rhs = RatFunc.var(s.n, k) * a_mutation(s, k).images[k]
    return lhs == rhs


def h_a_invariance(s: Seed, beta: Sequence[int]) -> bool:
    """Rescaling ``A_i -> t^{beta_i} A_i`` leaves ``W`` unchanged: all ``t``-coefficients vanish."""
    n = s.n
    basis = _a_basis(n + 1)
    w = WedgeElement(basis)
    et = s.eps_tilde()
    for i in range(n):
        for j in range(n):
            if et[i][j]:
                ei = [0] * (n + 1)
                ej = [0] * (n + 1)
                ei[i], ei[n] = 1, beta[i]
                ej[j], ej[n] = 1, beta[j]
                w.add_wedge(ei, ej, et[i][j])
    ref = w_element(s)
    return all(w.M[i][n] == 0 for i in range(n + 1)) and all(
        w.M[i][j] == ref.M[i][j] for i in range(n) for j in range(n)
    )


def dlog_shadow_check(s: Seed) -> bool:
    """Coefficient map ``M_ij -> M_ij / (A_i A_j)`` sends ``W`` to the matrix of the 2-form."""
    n = s.n
    W = w_element(s)
    om = omega_form(s)
    for i in range(n):
        for j in range(n):
            e = [0] * n
            e[i] -= 1
            e[j] -= 1
            img = RatFunc.monomial(e, W.M[i][j]) if i != j else RatFunc.from_int(n, 0)
            if img != om[i][j]:
                return False
    return True


# -- numerics -------------------------------------------------------------

def _bernoulli(N: int) -> list:
    B = [Fraction(0)] * (N + 1)
    B[0] = Fraction(1)
    for m in range(1, N + 1):
        B[m] = -sum(math.comb(m + 1, j) * B[j] for j in range(m)) / (m + 1)
    return B


_B = _bernoulli(40)
_BCOEF = [float(_B[n]) / math.factorial(n + 1) for n in range(41)]
_PI2_6 = math.pi ** 2 / 6


def _li2_series(z: complex) -> complex:
    tot, p, n = 0j, z, 1
    while True:
        t = p / (n * n)
        tot += t
        if abs(t) < 1e-18 * max(1.0, abs(tot)):
            return tot
        n += 1
        p *= z


def _li2_bernoulli(z: complex) -> complex:
    u = -cmath.log(1 - z)
    tot = 0j
    up = u
    for n in range(41):
        if _BCOEF[n]:
            tot += _BCOEF[n] * up
        up *= u
    return tot


def li2(z: complex) -> complex:
    """Principal branch of the dilogarithm."""
    z = complex(z)
    if z == 0:
        return 0j
    if z == 1:
        return complex(_PI2_6)
    if abs(z) <= 0.5:
        return _li2_series(z)
    if abs(z) > 1:
        # inversion; the cut of log(-z) agrees with Li2's cut on (1, inf) from above
        w = 1 / z
        lg = cmath.log(-z)
        if z.imag == 0 and z.real > 1:
            lg = complex(math.log(z.real), math.pi)
        return -_PI2_6 - 0.5 * lg * lg - li2(w)
    if z.real > 0.5:
        return _PI2_6 - cmath.log(z) * cmath.log(1 - z) - li2(1 - z)
    return _li2_bernoulli(z)


def bloch_wigner(z: complex) -> float:
    """``L_2(z) = Im(Li_2(z)) + arg(1 - z) log|z|``; zero on the real line."""
    z = complex(z)
    if z == 0 or z == 1:
        return 0.0
    return li2(z).imag + cmath.phase(1 - z) * math.log(abs(z))


def rank2_orbit(b: int, c: int, start: tuple, length: int) -> list:
    """``x_1, x_2, ...`` with ``x_{m-1} x_{m+1} = (1 + x_m)^b`` (m even) or ``^c`` (m odd)."""
    xs = [complex(start[0]), complex(start[1])]
    while len(xs) < length:
        m = len(xs)
        e = b if m % 2 == 0 else c
        if xs[-2] == 0:
            raise PoleAlongOrbit(f"x_{m - 1} vanishes")
        xs.append((1 + xs[-1]) ** e / xs[-2])
    return xs


def _coxeter(b: int, c: int) -> int:
    key = (min(b, c), max(b, c))
    if key not in RANK2_TYPES:
        raise ValueError(f"({b}, {c}) is not a finite-type pair")
    return RANK2_TYPES[key]


def dilog_sum(b: int, c: int, start: tuple) -> float:
    """``sum_{i=1}^{h+2} d_i L_2(-x_i)`` with ``d_i = b`` for even and ``c`` for odd ``i``.

    For ``b = c = 0`` the weights are taken as 1.
    """
    h = _coxeter(b, c)
    xs = rank2_orbit(b, c, start, h + 2)
    wb, wc = (b, c) if (b, c) != (0, 0) else (1, 1)
    tot = 0.0
    for i, x in enumerate(xs, start=1):
        tot += (wb if i % 2 == 0 else wc) * bloch_wigner(-x)
    return tot


def dilog_period_check(b: int, c: int, start: tuple, tol: float = 1e-9) -> bool:
    h = _coxeter(b, c)
    xs = rank2_orbit(b, c, start, h + 4)
    if abs(xs[h + 2] - xs[0]) > 1e-6 * max(1, abs(xs[0])):
        raise PoleAlongOrbit("orbit did not close numerically")
    return abs(dilog_sum(b, c, start)) < tol


def _x_step_numeric(s: Seed, k: int, X: list) -> list:
    out = list(X)
    xk = X[k]
    for i in range(s.n):
        if i == k:
            out[i] = 1 / xk
            continue
        e = int(s.eps[i][k])
        if e > 0:
            out[i] = X[i] * (1 + 1 / xk) ** (-e)
        elif e < 0:
            out[i] = X[i] * (1 + xk) ** (-e)
    return out


def _run_loop(s: Seed, loop: MutationWord, p: Sequence) -> tuple:
    cur = s
    X = [complex(x) for x in p]
    steps = []
    for kind, arg in loop:
        if kind == "mu":
            steps.append((cur.d[arg], X[arg]))
            X = _x_step_numeric(cur, arg, X)
            cur = mutate_seed(cur, arg)
        else:
            sigma = _pad_perm(arg, s.n)
            Y = [None] * s.n
            for i, j in enumerate(sigma):
                Y[j] = X[i]
            X = Y
            cur = permute_seed(cur, sigma)
    return cur, X, steps


def beta_invariant(s: Seed, loop: MutationWord, p: Sequence, tol: float = 1e-9) -> float:
    """``sum 2 d_k L_2(-X_k)`` over the mutation steps of ``loop`` started at ``p``.

    The symbol ``{X}_2`` is evaluated as ``L_2(-X)``, the sign under which
    the rank-2 period identities hold, so trivial loops give 0.
    """
    end, X, steps = _run_loop(s, loop, p)
    if end != s:
        raise SeedError("the word is not a loop at this seed")
    if max(abs(a - b) for a, b in zip(X, p)) > tol * max(1.0, max(abs(complex(x)) for x in p)):
        raise NotFixedError("the point is not fixed by the loop")
    return sum(2 * d * bloch_wigner(-x) for d, x in steps)


def inverse_word(w: MutationWord, n: int) -> MutationWord:
    out = []
    for kind, arg in reversed(w.steps):
        if kind == "mu":
            out.append((kind, arg))
        else:
            sigma = _pad_perm(arg, n)
            inv = [0] * n
            for i, j in enumerate(sigma):
                inv[j] = i
            out.append((kind, tuple(inv)))
    return MutationWord(tuple(out))


def beta_conjugation_check(s: Seed, loop: MutationWord, p: Sequence, path: MutationWord,
                           tol: float = 1e-8) -> tuple:
    """``beta`` of ``loop`` at ``p`` against ``path^-1 . loop . path`` at the transported point.

    Returns ``(agree, beta, beta_conjugated)``.
    """
    end, q, _ = _run_loop(s, path, p)
    conj = inverse_word(path, s.n) + loop + path
    b0 = beta_invariant(s, loop, p)
    b1 = beta_invariant(end, conj, q)
    return abs(b0 - b1) < tol, b0, b1


def find_fixed_point(s: Seed, loop: MutationWord, guess: Sequence, iters: int = 100, tol: float = 1e-13) -> list:
    """Newton iteration for ``F(p) = p`` with a finite-difference Jacobian."""
    n = s.n
    p = [complex(x) for x in guess]
    for _ in range(iters):
        _, F, _ = _run_loop(s, loop, p)
        r = [F[i] - p[i] for i in range(n)]
        if max(abs(x) for x in r) < tol:
            return p
        h = 1e-7
        J = []
        for j in range(n):
            q = list(p)
            q[j] += h
            _, Fq, _ = _run_loop(s, loop, q)
            J.append([((Fq[i] - q[i]) - r[i]) / h for i in range(n)])
        # J[j][i] = d r_i / d p_j; solve sum_j J[j][i] dx_j = -r_i
        A = [[J[j][i] for j in range(n)] + [-r[i]] for i in range(n)]
        for col in range(n):
            piv = max(range(col, n), key=lambda r_: abs(A[r_][col]))
            A[col], A[piv] = A[piv], A[col]
            if abs(A[col][col]) < 1e-300:
                raise ZeroDivisionError("singular Jacobian")
            for r_ in range(n):
                if r_ != col:
                    f = A[r_][col] / A[col][col]
                    A[r_] = [a - f * b for a, b in zip(A[r_], A[col])]
        dx = [A[i][n] / A[i][i] for i in range(n)]
        p = [a + b for a, b in zip(p, dx)]
    raise ArithmeticError("fixed-point iteration did not converge")
