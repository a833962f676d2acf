"""Quantum torus algebras, quantum mutation, q-series and the Frobenius identity.

q-exponents are stored as integers in units of ``1/U`` where ``U`` is
fixed per context (``2 * lcm(d)`` for a seed). Within a context the
normalised monomials ``X_v`` form a basis and multiply by
``X_v X_w = q^{(v, w)} X_{v+w}`` with ``(e_i, e_j) = eps_hat_ij``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Mapping, Sequence

from .exactalg import LaurentPoly, NotDivisible, RatFunc, exact_divide
from .seed import FrozenDirectionError, Seed, SeedError, mutate_seed

__all__ = [
    "QContext",
    "QLaurent",
    "OrePair",
    "ContextError",
    "q_mul",
    "q_left_divide",
    "q_mutation",
    "q_mutation_monomial",
    "q_involution_check",
    "q_mutation_square_check",
    "q_specialize",
    "q_casimir_check",
    "g_factor",
    "rank2_context",
    "q_orbit_rank2",
    "QSeries",
    "psi_series",
    "psi_inverse_series",
    "psi_checks",
    "cyclotomic",
    "q_frobenius_check",
]

DIVIDE_STEP_LIMIT = 10**5


class ContextError(ValueError):
    """Operands belong to different quantum tori."""


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@dataclass(frozen=True)
class QContext:
    """Skew form ``eps_hat`` and the q-exponent unit ``U``."""

    eps_hat: tuple
    U: int

    def __post_init__(self):
        n = len(self.eps_hat)
        for i in range(n):
            for j in range(n):
                e = Fraction(self.eps_hat[i][j])
                if e != -Fraction(self.eps_hat[j][i]):
                    raise ValueError("eps_hat must be skew-symmetric")
                if (e * self.U).denominator != 1:
                    raise ValueError(f"U = {self.U} does not clear eps_hat[{i}][{j}] = {e}")

    @classmethod
    def from_seed(cls, s: Seed) -> "QContext":
        return cls(tuple(tuple(row) for row in s.eps_hat()), 2 * s.D)

    @property
    def n(self) -> int:
        return len(self.eps_hat)

    def form(self, v: Sequence[int], w: Sequence[int]) -> int:
        """``U * (v, w)`` as an integer."""
        tot = Fraction(0)
        for i, vi in enumerate(v):
            if vi:
                row = self.eps_hat[i]
                for j, wj in enumerate(w):
                    if wj:
                        tot += vi * row[j] * wj
        return int(tot * self.U)


def _add_into(target: dict, v: tuple, qs: Mapping[int, int], scale: int = 1, shift: int = 0) -> None:
    slot = target.get(v)
    if slot is None:
        slot = target[v] = {}
    for s, c in qs.items():
        k = s + shift
        val = slot.get(k, 0) + scale * c
        if val:
            slot[k] = val
        else:
            slot.pop(k, None)
    if not slot:
        del target[v]


class QLaurent:
    """Element ``sum c * q^{s/U} X_v`` of a quantum torus, in the normalised monomial basis."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx: QContext, data: Mapping | None = None):
        self.ctx = ctx
        clean: dict = {}
        for v, qs in (data or {}).items():
            qs = {int(s): int(c) for s, c in qs.items() if c}
            if qs:
                clean[tuple(int(x) for x in v)] = qs
        self.data = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, ctx, data) -> "QLaurent":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.data = data
        return obj

    @classmethod
    def from_terms(cls, ctx: QContext, terms: Mapping[tuple, int]) -> "QLaurent":
        """From the flat map ``(exponent vector, q-exponent) -> coefficient``."""
        data: dict = {}
        for (v, s), c in terms.items():
            if c:
                _add_into(data, tuple(v), {s: c})
        return cls._raw(ctx, data)

    @classmethod
    def monomial(cls, ctx: QContext, v: Sequence[int], qexp: int = 0, coeff: int = 1) -> "QLaurent":
        """``coeff * q^{qexp/U} * X_v``."""
        return cls._raw(ctx, {tuple(v): {qexp: coeff}} if coeff else {})

    @classmethod
    def gen(cls, ctx: QContext, i: int) -> "QLaurent":
        v = [0] * ctx.n
        v[i] = 1
        return cls.monomial(ctx, v)

    @classmethod
    def scalar(cls, ctx: QContext, c: int = 1, qexp: int = 0) -> "QLaurent":
        return cls.monomial(ctx, (0,) * ctx.n, qexp, c)

    @classmethod
    def ordered_product(cls, ctx: QContext, exps: Sequence[int], order: Sequence[int] | None = None) -> "QLaurent":
        """``prod X_i^{a_i}`` multiplied out in the given variable order."""
        order = range(ctx.n) if order is None else order
        out = cls.scalar(ctx)
        for i in order:
            a = exps[i]
            g = cls.gen(ctx, i) if a >= 0 else cls.gen(ctx, i).inverse_monomial()
            for _ in range(abs(a)):
                out = out * g
        return out

    # -- structure ----------------------------------------------------
    @property
    def terms(self) -> dict:
        return {(v, s): c for v, qs in self.data.items() for s, c in qs.items()}

    def is_zero(self) -> bool:
        return not self.data

    def _check(self, other: "QLaurent") -> None:
        if self.ctx != other.ctx:
            raise ContextError("elements of different quantum tori")

    def _coerce(self, other):
        if isinstance(other, QLaurent):
            self._check(other)
            return other
        if isinstance(other, int):
            return QLaurent.scalar(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        data = {v: dict(qs) for v, qs in self.data.items()}
        for v, qs in o.data.items():
            _add_into(data, v, qs)
        return QLaurent._raw(self.ctx, data)

    __radd__ = __add__

    def __neg__(self):
        return QLaurent._raw(self.ctx, {v: {s: -c for s, c in qs.items()} for v, qs in self.data.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        ctx = self.ctx
        data: dict = {}
        for v, qa in self.data.items():
            for w, qb in o.data.items():
                shift = ctx.form(v, w)
                u = tuple(x + y for x, y in zip(v, w))
                prod: dict = {}
                for s1, c1 in qa.items():
                    for s2, c2 in qb.items():
                        k = s1 + s2
                        prod[k] = prod.get(k, 0) + c1 * c2
                _add_into(data, u, prod, 1, shift)
        return QLaurent._raw(ctx, data)

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            return self.inverse_monomial() ** (-k)
        out = QLaurent.scalar(self.ctx)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def qshift(self, t: int) -> "QLaurent":
        """Multiply by ``q^{t/U}``."""
        return QLaurent._raw(self.ctx, {v: {s + t: c for s, c in qs.items()} for v, qs in self.data.items()})

    def inverse_monomial(self) -> "QLaurent":
        if len(self.data) != 1:
            raise NotDivisible("only monomials are invertible in the quantum torus")
        (v, qs), = self.data.items()
        if len(qs) != 1:
            raise NotDivisible("coefficient is not a unit")
        (s, c), = qs.items()
        if abs(c) != 1:
            raise NotDivisible("coefficient is not a unit")
        return QLaurent.monomial(self.ctx, tuple(-x for x in v), -s, c)

    def star(self) -> "QLaurent":
        """The involutive antiautomorphism ``X_v -> X_v``, ``q -> q^{-1}``."""
        return QLaurent._raw(self.ctx, {v: {-s: c for s, c in qs.items()} for v, qs in self.data.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = QLaurent.scalar(self.ctx, other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self.ctx == other.ctx and self.data == other.data

    __hash__ = None

    def leading(self) -> tuple:
        v = max(self.data)
        return v, self.data[v]

    def specialize(self) -> LaurentPoly:
        """Set ``q = 1``."""
        out: dict = {}
        for v, qs in self.data.items():
            c = sum(qs.values())
            if c:
                out[v] = out.get(v, 0) + c
        return LaurentPoly(self.ctx.n, out)

    # -- printing -----------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.data:
            return "0"
        U = self.ctx.U
        parts = []
        for v in sorted(self.data, reverse=True):
            qs = self.data[v]
            mono = "X(" + ",".join(map(str, v)) + ")" if any(v) else ""
            for s in sorted(qs, reverse=True):
                c = qs[s]
                fr = Fraction(s, U)
                qpart = "" if s == 0 else f"q^{fr}" if fr.denominator == 1 else f"q^({fr})"
                body = "*".join(x for x in (qpart, mono) if x)
                mag = abs(c)
                if not body:
                    txt = str(mag)
                elif mag == 1:
                    txt = body
                else:
                    txt = f"{mag}*{body}"
                parts.append(("-" if c < 0 else "+", txt))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, txt in parts[1:]:
            out += f" {sign} {txt}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"QLaurent({self.to_str()!r})"


def q_mul(a: QLaurent, b: QLaurent) -> QLaurent:
    a._check(b)
    return a * b


def q_specialize(x: QLaurent, q_value: str = "one") -> LaurentPoly:
    if q_value not in ("one", 1):
        raise ValueError("only the specialisation q = 1 is supported")
    return x.specialize()


# -- univariate q-coefficients --------------------------------------------

def _qpoly(qs: Mapping[int, int]) -> LaurentPoly:
    return LaurentPoly(1, {(s,): c for s, c in qs.items()})


def _qdict(p: LaurentPoly) -> dict:
    return {e[0]: c for e, c in p.terms.items()}


def q_left_divide(p: QLaurent, r: QLaurent, step_limit: int = DIVIDE_STEP_LIMIT):
    """Solve ``p * z = r``; return ``z`` or ``None`` when no Laurent quotient exists.

    Greedy elimination of lex-leading terms. Since the lex-least term of a
    product is the product of lex-least terms, any quotient term below
    ``min(r) - min(p)`` proves non-divisibility.
    """
    p._check(r)
    if p.is_zero():
        raise ZeroDivisionError("division by zero in the quantum torus")
    ctx = p.ctx
    if r.is_zero():
        return QLaurent._raw(ctx, {})
    vp, cp = p.leading()
    cp_poly = _qpoly(cp)
    floor = tuple(a - b for a, b in zip(min(r.data), min(p.data)))
    rem = r
    quot: dict = {}
    steps = 0
    while not rem.is_zero():
        steps += 1
        if steps > step_limit:
            return None
        vr, cr = rem.leading()
        w = tuple(a - b for a, b in zip(vr, vp))
        if w < floor:
            return None
        shift = ctx.form(vp, w)
        try:
            g = exact_divide(_qpoly(cr), cp_poly.shift((shift,)))
        except NotDivisible:
            return None
        term = QLaurent._raw(ctx, {w: _qdict(g)})
        _add_into(quot, w, _qdict(g))
        rem = rem - p * term
    return QLaurent._raw(ctx, quot)


# -- quantum mutation -----------------------------------------------------

def g_factor(ctx: QContext, a: int, k: int, unit: int, invert_q: bool = False) -> QLaurent:
    """``G_a(q_k; X_k) = prod_{i=1..a} (1 + q_k^{2i-1} X_k)`` with ``q_k = q^{unit/U}``.

    ``invert_q`` replaces ``q_k`` by its inverse.
    """
    sign = -1 if invert_q else 1
    out = QLaurent.scalar(ctx)
    xk = QLaurent.gen(ctx, k)
    for i in range(1, a + 1):
        out = out * (1 + xk.qshift(sign * (2 * i - 1) * unit))
    return out


@dataclass
class OrePair:
    """The fraction ``numer * denom^{-1}``; ``denom`` is a polynomial in one generator."""

    numer: QLaurent
    denom: QLaurent

    def is_laurent(self) -> bool:
        return self.denom == 1

    def specialize(self) -> RatFunc:
        return RatFunc(self.numer.specialize(), self.denom.specialize())

    def __str__(self):
        if self.denom == 1:
            return str(self.numer)
        return f"({self.numer}) * ({self.denom})^-1"


def _mutation_data(s: Seed, k: int, v: Sequence[int]) -> tuple:
    """``(w, a)`` with ``mu^q(X'_v) = X_w R_a(X_k)``.

    ``w = sum v_i e'_i`` where ``e'_k = -e_k`` and ``e'_i = e_i + [eps_ik]_+ e_k``;
    ``a = -sum_i w_i eps_ik``. ``R_a = G_a(q_k; .)`` for ``a >= 0`` and
    ``G_{-a}(q_k^{-1}; .)^{-1}`` otherwise.
    """
    n = s.n
    w = list(v)
    w[k] = -v[k] + sum(max(int(s.eps[i][k]), 0) * v[i] for i in range(n) if i != k)
    a = -sum(w[i] * int(s.eps[i][k]) for i in range(n))
    return tuple(w), a


def _check_dir(s: Seed, k: int) -> None:
    if not 0 <= k < s.n:
        raise SeedError(f"direction {k} out of range")
    if k in s.frozen:
        raise FrozenDirectionError(f"direction {k} is frozen")


def q_mutation_monomial(s: Seed, k: int, v: Sequence[int]) -> OrePair:
    """Image of the normalised monomial ``X'_v`` of ``mu_k(s)`` in the quantum torus of ``s``."""
    _check_dir(s, k)
    ctx = QContext.from_seed(s)
    unit = ctx.U // s.d[k]
    w, a = _mutation_data(s, k, v)
    xw = QLaurent.monomial(ctx, w)
    if a >= 0:
        return OrePair(xw * g_factor(ctx, a, k, unit), QLaurent.scalar(ctx))
    return OrePair(xw, g_factor(ctx, -a, k, unit, invert_q=True))


def q_mutation(s: Seed, k: int, i: int) -> OrePair:
    """Image of the generator ``X'_i`` under the quantum mutation in direction ``k``."""
    v = [0] * s.n
    v[i] = 1
    return q_mutation_monomial(s, k, v)


def q_involution_check(s: Seed, k: int) -> bool:
    """The image of every generator is fixed by ``*`` (as a right fraction ``N D^{-1}``)."""
    for i in range(s.n):
        op = q_mutation(s, k, i)
        # N D^{-1} = (D*)^{-1} N*  iff  D* N = N* D
        if op.denom.star() * op.numer != op.numer.star() * op.denom:
            return False
    return True


def _univariate_R(a: int, unit: int, U: int, inverse_x: bool) -> RatFunc:
    """``R_a(x)`` (or ``R_a(x^{-1})``) in variables ``(x, q^{1/U})``."""
    one = LaurentPoly.one(2)
    sx = -1 if inverse_x else 1
    sign = 1 if a >= 0 else -1
    f = one
    for i in range(1, abs(a) + 1):
        f = f * (one + LaurentPoly.monomial((sx, sign * (2 * i - 1) * unit)))
    return RatFunc(f) if a >= 0 else RatFunc(one, f)


def q_mutation_square_check(s: Seed, k: int) -> bool:
    """``mu^q_k`` composed with itself fixes every generator.

    ``X''_i -> X'_{w'} R_{a'}(X'_k) -> X_w R_a(X_k) R_{a'}(X_k^{-1})``; the
    product of the two commuting rational functions of ``X_k`` must be a
    monomial ``q^t X_k^m`` that restores ``X_i`` exactly.
    """
    _check_dir(s, k)
    s1 = mutate_seed(s, k)
    ctx = QContext.from_seed(s)
    unit = ctx.U // s.d[k]
    for i in range(s.n):
        v = [0] * s.n
        v[i] = 1
        w1, a1 = _mutation_data(s1, k, v)
        w, a = _mutation_data(s, k, w1)
        R = _univariate_R(a, unit, ctx.U, False) * _univariate_R(a1, unit, ctx.U, True)
        lp = R.as_laurent()
        if lp is None or not lp.is_monomial():
            return False
        (m, t), c = next(iter(lp.terms.items()))
        ek = [0] * s.n
        ek[k] = m
        res = QLaurent.monomial(ctx, w) * QLaurent.monomial(ctx, ek, t, c)
        if res != QLaurent.monomial(ctx, v):
            return False
    return True


def q_casimir_check(s: Seed, alpha: Sequence[int], k: int, strict: bool = True) -> bool:
    """``X_alpha`` is central and ``mu^q_k`` maps ``X'_{alpha'}`` to ``X_alpha``.

    ``alpha'`` is the transported left-kernel vector (see
    :func:`clusterens.clustermaps.transport_casimir`). For a vector outside
    the left kernel only centrality is tested, which then fails.
    """
    from .clustermaps import KernelError, _in_left_kernel, transport_casimir

    _check_dir(s, k)
    ctx = QContext.from_seed(s)
    xa = QLaurent.monomial(ctx, alpha)
    central = all(xa * QLaurent.gen(ctx, j) == QLaurent.gen(ctx, j) * xa for j in range(s.n))
    if not _in_left_kernel(s, alpha):
        if strict:
            raise KernelError(f"{tuple(alpha)} is not in the left kernel")
        return central
    if not central:
        return False
    alpha2 = transport_casimir(s, alpha, k)
    img = q_mutation_monomial(s, k, alpha2)
    return img.is_laurent() and img.numer == xa


# -- rank-two quantum orbits ----------------------------------------------

def rank2_context(c: int) -> QContext:
    """Quantum torus on ``X_1, X_2`` with ``X_1 X_2 = q^{2c} X_2 X_1``."""
    return QContext(((Fraction(0), Fraction(c)), (Fraction(-c), Fraction(0))), 2)


def q_orbit_rank2(b: int, c: int, length: int, start: tuple | None = None) -> list:
    """``[X_1, ..., X_length]`` with ``X_{m-1} X_{m+1} = RHS(X_m)``.

    ``RHS = (1 + q^c X_m)^b`` for even ``m`` and ``G_c(q; X_m)`` for odd
    ``m``. Each step is an exact left division; a failure raises
    :class:`NotDivisible` carrying the offending index.
    """
    ctx = rank2_context(c) if start is None else start[0].ctx
    U = ctx.U
    if start is None:
        start = (QLaurent.gen(ctx, 0), QLaurent.gen(ctx, 1))
    xs = [start[0], start[1]]
    while len(xs) < length:
        m = len(xs)  # 1-based index of the last element
        xm = xs[-1]
        if m % 2 == 0:
            rhs = (1 + xm.qshift(c * U)) ** b
        else:
            rhs = QLaurent.scalar(ctx)
            for i in range(1, c + 1):
                rhs = rhs * (1 + xm.qshift((2 * i - 1) * U))
        nxt = q_left_divide(xs[-2], rhs)
        if nxt is None:
            raise NotDivisible(f"X_{m - 1} does not left-divide the relation for X_{m + 1}")
        xs.append(nxt)
    return xs[:length]


# -- q-series -------------------------------------------------------------

def _upoly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Primitive gcd of univariate integer polynomials (Euclid over the rationals)."""
    def to_list(p):
        if p.is_zero():
            return []
        lo, hi = p.degree_in(0)
        return [Fraction(p.terms.get((e,), 0)) for e in range(lo, hi + 1)]

    x, y = to_list(a), to_list(b)
    while y:
        while x and len(x) >= len(y):
            f = x[-1] / y[-1]
            off = len(x) - len(y)
            for i, c in enumerate(y):
                x[off + i] -= f * c
            while x and x[-1] == 0:
                x.pop()
        x, y = y, x
    if not x:
        return LaurentPoly.one(1)
    den = _lcm(c.denominator for c in x)
    ints = [int(c * den) for c in x]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return LaurentPoly(1, {(i,): c // g for i, c in enumerate(ints) if c})


def _reduce(f: RatFunc) -> RatFunc:
    g = _upoly_gcd(f.num.shift((-f.num.min_exponents()[0],)) if not f.num.is_zero() else f.num,
                   f.den.shift((-f.den.min_exponents()[0],)))
    if g.is_constant():
        return f
    return RatFunc(exact_divide(f.num, g), exact_divide(f.den, g))


@dataclass
class QSeries:
    """Truncated power series ``sum_{n<=N} c_n(q) x^n`` with reduced rational coefficients in ``q``."""

    order: int
    coeffs: list

    def __post_init__(self):
        self.coeffs = [_reduce(c) for c in self.coeffs[: self.order + 1]]
        while len(self.coeffs) < self.order + 1:
            self.coeffs.append(RatFunc.from_int(1, 0))

    @classmethod
    def from_poly(cls, order: int, poly: Mapping[int, RatFunc]) -> "QSeries":
        zero = RatFunc.from_int(1, 0)
        return cls(order, [poly.get(n, zero) for n in range(order + 1)])

    def __mul__(self, other: "QSeries") -> "QSeries":
        N = min(self.order, other.order)
        out = []
        for n in range(N + 1):
            acc = RatFunc.from_int(1, 0)
            for i in range(n + 1):
                if not self.coeffs[i].is_zero() and not other.coeffs[n - i].is_zero():
                    acc = acc + self.coeffs[i] * other.coeffs[n - i]
            out.append(_reduce(acc))
        return QSeries(N, out)

    def inverse(self) -> "QSeries":
        c0 = self.coeffs[0]
        if c0.is_zero():
            raise ZeroDivisionError("series with zero constant term")
        inv0 = c0.inverse()
        out = [inv0]
        for n in range(1, self.order + 1):
            acc = RatFunc.from_int(1, 0)
            for i in range(1, n + 1):
                if not self.coeffs[i].is_zero():
                    acc = acc + self.coeffs[i] * out[n - i]
            out.append(_reduce(-acc * inv0))
        return QSeries(self.order, out)

    def scale_x(self, qexp: int) -> "QSeries":
        """Substitute ``x -> q^{qexp} x``."""
        return QSeries(self.order, [c * RatFunc.monomial((qexp * n,)) for n, c in enumerate(self.coeffs)])

    def invert_q(self) -> "QSeries":
        """Substitute ``q -> q^{-1}``."""
        def flip(p: LaurentPoly) -> LaurentPoly:
            return p.map_exponents(lambda e: (-e[0],))
        return QSeries(self.order, [RatFunc(flip(c.num), flip(c.den)) for c in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        N = min(self.order, other.order)
        return all(self.coeffs[n] == other.coeffs[n] for n in range(N + 1))

    __hash__ = None

    def __str__(self):
        return " + ".join(f"({c})*x^{n}" for n, c in enumerate(self.coeffs) if not c.is_zero())


def _q(e: int) -> LaurentPoly:
    return LaurentPoly.monomial((e,))


def psi_series(order: int) -> QSeries:
    """``Psi_q(x)`` with ``c_n = q^{-n(n-1)/2} / prod_{j=1..n} (q^j - q^{-j})``."""
    if order < 1:
        raise ValueError("order must be at least 1")
    coeffs = []
    for n in range(order + 1):
        den = LaurentPoly.one(1)
        for j in range(1, n + 1):
            den = den * (_q(j) - _q(-j))
        coeffs.append(RatFunc(_q(-n * (n - 1) // 2), den))
    return QSeries(order, coeffs)


def psi_inverse_series(order: int) -> QSeries:
    """``c_n = q^{n^2} / prod_{j=1..n} (1 - q^{2j})``."""
    coeffs = []
    one = LaurentPoly.one(1)
    for n in range(order + 1):
        den = one
        for j in range(1, n + 1):
            den = den * (one - _q(2 * j))
        coeffs.append(RatFunc(_q(n * n), den))
    return QSeries(order, coeffs)


def _g_series(a: int, order: int) -> QSeries:
    one = LaurentPoly.one(1)
    poly = {0: RatFunc(one)}
    for i in range(1, a + 1):
        new: dict = {}
        for n, c in poly.items():
            new[n] = new.get(n, RatFunc.from_int(1, 0)) + c
            new[n + 1] = new.get(n + 1, RatFunc.from_int(1, 0)) + c * RatFunc(_q(2 * i - 1))
        poly = new
    return QSeries.from_poly(order, poly)


def psi_checks(order: int = 12, max_a: int = 3) -> dict:
    """Verify the defining identities of ``Psi_q`` up to ``x^order``."""
    psi = psi_series(order)
    inv = psi.inverse()
    one = LaurentPoly.one(1)
    lin = QSeries.from_poly(order, {0: RatFunc(one), 1: RatFunc(_q(1))})
    report = {
        "difference_equation": psi.scale_x(2) == lin * psi,
        "inversion": psi.invert_q() == inv,
        "inverse_series": psi_inverse_series(order) == inv,
        "product_is_one": (psi * inv) == QSeries.from_poly(order, {0: RatFunc(one)}),
    }
    for a in range(1, max_a + 1):
        report[f"G_{a}"] = psi.scale_x(2 * a) * inv == _g_series(a, order)
    return report


# -- quantum Frobenius ----------------------------------------------------

def _mobius(n: int) -> int:
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


def cyclotomic(N: int) -> LaurentPoly:
    """``Phi_N(q) = prod_{d | N} (q^d - 1)^{mu(N/d)}``."""
    num = LaurentPoly.one(1)
    den = LaurentPoly.one(1)
    one = LaurentPoly.one(1)
    for d in range(1, N + 1):
        if N % d:
            continue
        mu = _mobius(N // d)
        if mu == 1:
            num = num * (_q(d) - one)
        elif mu == -1:
            den = den * (_q(d) - one)
    return exact_divide(num, den)


def _reduce_mod(vec: list, phi: list) -> list:
    """Remainder of ``sum vec[i] q^i`` modulo the monic ``phi``."""
    vec = list(vec)
    deg = len(phi) - 1
    for top in range(len(vec) - 1, deg - 1, -1):
        c = vec[top]
        if c:
            for i, pc in enumerate(phi):
                vec[top - deg + i] -= c * pc
    return vec[:deg]


def q_frobenius_check(a: int, N: int) -> bool:
    """``prod_{b=0}^{N-1} G_a(q; q^{2ba} X) == (1 + X^N)^a`` modulo ``Phi_N(q)``."""
    if a < 1 or N < 1:
        raise ValueError("a and N must be positive")
    if gcd(2 * a, N) != 1:
        raise ValueError(f"gcd(2a, N) = {gcd(2 * a, N)} must be 1")
    phi_p = cyclotomic(N)
    phi = [phi_p.terms.get((i,), 0) for i in range(phi_p.degree_in(0)[1] + 1)]
    # polynomial in X with coefficients in Z[q]/(q^N - 1), stored as length-N lists
    poly = [[1] + [0] * (N - 1)]
    for b in range(N):
        for i in range(1, a + 1):
            e = (2 * b * a + 2 * i - 1) % N
            new = [row[:] for row in poly] + [[0] * N]
            for deg, row in enumerate(poly):
                tgt = new[deg + 1]
                for t, c in enumerate(row):
                    if c:
                        tgt[(t + e) % N] += c
            poly = new
    expected = {N * j: comb(a, j) for j in range(a + 1)}
    for deg, row in enumerate(poly):
        red = _reduce_mod(row, phi)
        want = expected.get(deg, 0)
        if red[0] != want or any(red[1:]):
            return False
    return True

