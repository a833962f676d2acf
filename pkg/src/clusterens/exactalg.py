"""Exact sparse Laurent polynomials and fractions of them.

Polynomials carry arbitrary-precision integer coefficients keyed by integer
exponent vectors. The global term order is lexicographic on exponent
vectors; it decides leading terms, division and printing.

There is deliberately no multivariate GCD. :class:`RatFunc` is normalised
by monomial content and sign only and compares by cross-multiplication.
:class:`FactoredFrac` keeps numerator and denominator as products of
primitive factors so that repeated substitution (cluster transformations)
stays small; cancellation happens by trial division against known factors.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Number
from typing import Iterable, Mapping, Sequence

__all__ = [
    "DimensionError",
    "NotDivisible",
    "PoleError",
    "CapacityError",
    "LaurentPoly",
    "RatFunc",
    "FactoredFrac",
    "exact_divide",
    "poly_arith",
    "partial_derivative",
    "evaluate",
]

DEFAULT_TERM_LIMIT = 10**6
DIVISION_STEP_LIMIT = 10**6


class DimensionError(ValueError):
    """Operands live in polynomial rings with different variable counts."""


class NotDivisible(ArithmeticError):
    """Exact division was requested but the divisor does not divide."""


class PoleError(ZeroDivisionError):
    """A denominator vanishes at the evaluation point."""


class CapacityError(RuntimeError):
    """An expansion exceeded the configured size guard."""


def _var_name(i: int, names: Sequence[str] | None) -> str:
    return names[i] if names is not None else f"x{i}"


class LaurentPoly:
    """Sparse Laurent polynomial with integer coefficients.

    ``terms`` maps exponent tuples of length ``nvars`` to nonzero ints.
    Instances are treated as immutable; all operations return new objects.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, int] | None = None):
        self.nvars = int(nvars)
        clean: dict[tuple, int] = {}
        if terms:
            for exps, c in terms.items():
                if c == 0:
                    continue
                exps = tuple(int(e) for e in exps)
                if len(exps) != self.nvars:
                    raise DimensionError(
                        f"exponent vector {exps} has length {len(exps)}, expected {self.nvars}"
                    )
                clean[exps] = clean.get(exps, 0) + int(c)
            clean = {e: c for e, c in clean.items() if c != 0}
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "LaurentPoly":
        # trusted constructor: terms already pruned and well formed
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c: int) -> "LaurentPoly":
        return cls._raw(nvars, {(0,) * nvars: int(c)} if c else {})

    @classmethod
    def one(cls, nvars: int) -> "LaurentPoly":
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars: int, i: int) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        exps = tuple(int(e) for e in exps)
        return cls._raw(len(exps), {exps: int(coeff)} if coeff else {})

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, 0)

    def __len__(self) -> int:
        return len(self.terms)

    def leading_term(self) -> tuple[tuple, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def min_exponents(self) -> tuple:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self.terms.values())

    def degree_in(self, i: int) -> tuple[int, int]:
        """(min, max) exponent of variable ``i``."""
        es = [e[i] for e in self.terms]
        return min(es), max(es)

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "LaurentPoly") -> None:
        if self.nvars != other.nvars:
            raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out: dict[tuple, int] = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return LaurentPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c: int) -> "LaurentPoly":
        if c == 0:
            return LaurentPoly.zero(self.nvars)
        return LaurentPoly._raw(self.nvars, {e: c * v for e, v in self.terms.items()})

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with exponent vector ``exps``."""
        return LaurentPoly._raw(
            self.nvars,
            {tuple(x + y for x, y in zip(e, exps)): c for e, c in self.terms.items()},
        )

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            if not self.is_monomial():
                raise NotDivisible("negative power of a non-monomial Laurent polynomial")
            (e, c), = self.terms.items()
            if abs(c) != 1:
                raise NotDivisible("negative power of a monomial with non-unit coefficient")
            return LaurentPoly.monomial(tuple(x * k for x in e), c ** (-k))
        result = LaurentPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and evaluation -------------------------------------
    def derivative(self, i: int) -> "LaurentPoly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return LaurentPoly._raw(self.nvars, out)

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise DimensionError(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    if k < 0 and x == 0:
                        raise PoleError("negative power of a vanishing coordinate")
                    if k < 0 and isinstance(x, (int, Fraction)):
                        x = Fraction(x)
                    term = term * x ** k
            total = total + term
        return total

    def subs_zero(self, i: int) -> "LaurentPoly":
        """Restriction to ``x_i = 0`` of a polynomial with no negative power of x_i."""
        lo, _ = self.degree_in(i) if self.terms else (0, 0)
        if lo < 0:
            raise PoleError(f"x{i} appears with a negative exponent")
        return LaurentPoly._raw(self.nvars, {e: c for e, c in self.terms.items() if e[i] == 0})

    def lowest_part(self, i: int) -> tuple[int, "LaurentPoly"]:
        """Valuation along ``x_i`` and the lowest-order coefficient (with x_i removed)."""
        if not self.terms:
            raise ValueError("zero polynomial has infinite valuation")
        lo = min(e[i] for e in self.terms)
        out = {}
        for e, c in self.terms.items():
            if e[i] == lo:
                ne = list(e)
                ne[i] = 0
                out[tuple(ne)] = c
        return lo, LaurentPoly._raw(self.nvars, out)

    def map_exponents(self, fn, nvars: int | None = None) -> "LaurentPoly":
        out: dict[tuple, int] = {}
        for e, c in self.terms.items():
            ne = tuple(fn(e))
            out[ne] = out.get(ne, 0) + c
        n = self.nvars if nvars is None else nvars
        return LaurentPoly._raw(n, {e: c for e, c in out.items() if c})

    # -- normal forms -------------------------------------------------
    def primitive_split(self) -> tuple[int, tuple, "LaurentPoly"]:
        """Return ``(c, m, p)`` with ``self == c * x^m * p``.

        ``p`` has minimal exponent 0 in every variable, content 1 and a
        positive leading coefficient.
        """
        if not self.terms:
            raise ValueError("zero polynomial")
        m = self.min_exponents()
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        p = {tuple(x - y for x, y in zip(e, m)): v // c for e, v in self.terms.items()}
        return c, m, LaurentPoly._raw(self.nvars, p)

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        return sorted(self.terms.items(), reverse=True)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = []
            for i, k in enumerate(e):
                if k == 1:
                    mono.append(_var_name(i, names))
                elif k:
                    mono.append(f"{_var_name(i, names)}^{k}")
            body = "*".join(mono)
            mag = abs(c)
            if not body:
                s = str(mag)
            elif mag == 1:
                s = body
            else:
                s = f"{mag}*{body}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {self.to_str()!r})"


def poly_arith(p: LaurentPoly, q: LaurentPoly, op: str) -> LaurentPoly:
    p._check(q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def exact_divide(p: LaurentPoly, q: LaurentPoly, step_limit: int = DIVISION_STEP_LIMIT) -> LaurentPoly:
    """Return ``r`` with ``q * r == p`` or raise :class:`NotDivisible`."""
    p._check(q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return LaurentPoly.zero(p.nvars)
    if q.is_monomial():
        (e, c), = q.terms.items()
        out = {}
        for pe, pc in p.terms.items():
            if pc % c:
                raise NotDivisible("coefficient not divisible by monomial coefficient")
            out[tuple(x - y for x, y in zip(pe, e))] = pc // c
        return LaurentPoly._raw(p.nvars, out)
    # shift both to genuine polynomials not divisible by any variable
    pm = p.min_exponents()
    qm = q.min_exponents()
    rem = dict(p.shift([-x for x in pm]).terms)
    q0 = q.shift([-x for x in qm])
    lq, lc = q0.leading_term()
    qterms = list(q0.terms.items())
    quot: dict[tuple, int] = {}
    steps = 0
    while rem:
        steps += 1
        if steps > step_limit:
            raise CapacityError("exact division exceeded its step bound")
        le = max(rem)
        c = rem[le]
        d = tuple(x - y for x, y in zip(le, lq))
        if min(d) < 0 or c % lc:
            raise NotDivisible(f"{p} is not divisible by {q}")
        k = c // lc
        quot[d] = k
        for qe, qc in qterms:
            e = tuple(x + y for x, y in zip(qe, d))
            v = rem.get(e, 0) - k * qc
            if v:
                rem[e] = v
            else:
                rem.pop(e, None)
    shift = [a - b for a, b in zip(pm, qm)]
    return LaurentPoly._raw(p.nvars, quot).shift(shift)


def divides(q: LaurentPoly, p: LaurentPoly) -> LaurentPoly | None:
    try:
        return exact_divide(p, q)
    except NotDivisible:
        return None


class RatFunc:
    """Fraction ``num / den`` of Laurent polynomials.

    Normalised by moving the monomial content into the numerator, cancelling
    integer content and making the denominator's leading coefficient
    positive. Equality is decided by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            den = LaurentPoly.one(num.nvars)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, LaurentPoly.one(num.nvars)
            return
        cn, mn, pn = num.primitive_split()
        cd, md, pd = den.primitive_split()
        g = gcd(cn, cd)
        if cd < 0:
            g = -g
        cn //= g
        cd //= g
        shift = [a - b for a, b in zip(mn, md)]
        self.num = pn.shift(shift).scale(cn)
        self.den = pd.scale(cd)

    # -- constructors -------------------------------------------------
    @classmethod
    def from_int(cls, nvars: int, c) -> "RatFunc":
        c = Fraction(c)
        return cls(LaurentPoly.const(nvars, c.numerator), LaurentPoly.const(nvars, c.denominator))

    @classmethod
    def var(cls, nvars: int, i: int) -> "RatFunc":
        return cls(LaurentPoly.var(nvars, i))

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "RatFunc":
        coeff = Fraction(coeff)
        n = len(exps)
        return cls(LaurentPoly.monomial(exps, coeff.numerator), LaurentPoly.const(n, coeff.denominator))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.nvars != self.nvars:
                raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, LaurentPoly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.from_int(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

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
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    # -- structure ----------------------------------------------------
    def reduced(self) -> "RatFunc":
        """Cancel the denominator when it divides the numerator exactly."""
        if self.den.is_monomial():
            return self
        q = divides(self.den, self.num)
        if q is not None:
            return RatFunc(q)
        return self

    def as_laurent(self) -> LaurentPoly | None:
        """The Laurent polynomial equal to this fraction, or ``None``."""
        if self.den.is_monomial():
            return exact_divide(self.num, self.den) if self._unit_den() else divides(self.den, self.num)
        return divides(self.den, self.num)

    def _unit_den(self) -> bool:
        (e, c), = self.den.terms.items()
        return abs(c) == 1

    def is_laurent(self) -> bool:
        return self.as_laurent() is not None

    def derivative(self, i: int) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative(i) * d - n * d.derivative(i), d * d)

    def evaluate(self, point: Sequence):
        dv = self.den.evaluate(point)
        if dv == 0:
            raise PoleError("denominator vanishes at the evaluation point")
        nv = self.num.evaluate(point)
        if isinstance(nv, int) and isinstance(dv, int):
            return Fraction(nv, dv)
        return nv / dv

    def substitute(self, args: Sequence["RatFunc"]) -> "RatFunc":
        """Compose: replace variable ``i`` by ``args[i]``."""
        ff = [FactoredFrac.from_ratfunc(a) for a in args]
        num = FactoredFrac.eval_poly(self.num, ff)
        den = FactoredFrac.eval_poly(self.den, ff)
        return (num / den).to_ratfunc()

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if self.den == LaurentPoly.one(self.nvars):
            return self.num.to_str(names)
        return f"({self.num.to_str(names)})/({self.den.to_str(names)})"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"RatFunc({self.to_str()!r})"


def partial_derivative(f: RatFunc, var: int) -> RatFunc:
    return f.derivative(var)


def evaluate(f, point: Sequence):
    return f.evaluate(point)


class FactoredFrac:
    """``coeff * x^mono * prod(P ** e for P, e in factors)``.

    Each factor ``P`` is primitive (see :meth:`LaurentPoly.primitive_split`)
    and not a monomial; exponents are nonzero integers, negative ones
    forming the denominator. Only the factorisation we happened to build is
    known; equal factors are merged and new sums are trial-divided by the
    denominator factors.
    """

    __slots__ = ("nvars", "coeff", "mono", "factors")

    term_limit = DEFAULT_TERM_LIMIT

    def __init__(self, nvars: int, coeff, mono: Sequence[int], factors: Mapping[LaurentPoly, int] | None = None):
        self.nvars = nvars
        self.coeff = Fraction(coeff)
        self.mono = tuple(mono)
        self.factors = {p: e for p, e in (factors or {}).items() if e}

    @classmethod
    def one(cls, nvars: int) -> "FactoredFrac":
        return cls(nvars, 1, (0,) * nvars)

    @classmethod
    def var(cls, nvars: int, i: int) -> "FactoredFrac":
        m = [0] * nvars
        m[i] = 1
        return cls(nvars, 1, m)

    @classmethod
    def from_poly(cls, p: LaurentPoly, exponent: int = 1) -> "FactoredFrac":
        if p.is_zero():
            if exponent < 0:
                raise ZeroDivisionError("inverse of zero")
            return cls(p.nvars, 0, (0,) * p.nvars)
        c, m, q = p.primitive_split()
        facs = {} if q.is_constant() else {q: exponent}
        return cls(p.nvars, Fraction(c) ** exponent, [x * exponent for x in m], facs)

    @classmethod
    def from_ratfunc(cls, f: RatFunc) -> "FactoredFrac":
        return cls.from_poly(f.num) * cls.from_poly(f.den, -1)

    def is_zero(self) -> bool:
        return self.coeff == 0

    def _new(self, coeff, mono, factors) -> "FactoredFrac":
        return FactoredFrac(self.nvars, coeff, mono, factors)

    def __mul__(self, other: "FactoredFrac") -> "FactoredFrac":
        if self.coeff == 0 or other.coeff == 0:
            return FactoredFrac(self.nvars, 0, (0,) * self.nvars)
        facs = dict(self.factors)
        for p, e in other.factors.items():
            facs[p] = facs.get(p, 0) + e
        return self._new(self.coeff * other.coeff, [a + b for a, b in zip(self.mono, other.mono)], facs)

    def inverse(self) -> "FactoredFrac":
        if self.coeff == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._new(1 / self.coeff, [-a for a in self.mono], {p: -e for p, e in self.factors.items()})

    def __truediv__(self, other: "FactoredFrac") -> "FactoredFrac":
        return self * other.inverse()

    def __pow__(self, k: int) -> "FactoredFrac":
        k = int(k)
        if k == 0:
            return FactoredFrac.one(self.nvars)
        if self.coeff == 0:
            if k < 0:
                raise ZeroDivisionError("inverse of zero")
            return self
        return self._new(self.coeff ** k, [a * k for a in self.mono], {p: e * k for p, e in self.factors.items()})

    def __neg__(self) -> "FactoredFrac":
        return self._new(-self.coeff, self.mono, self.factors)

    def _expand(self, factors: Mapping[LaurentPoly, int]) -> LaurentPoly:
        out = LaurentPoly.one(self.nvars)
        for p, e in sorted(factors.items(), key=lambda t: len(t[0])):
            out = out * (p ** e)
            if len(out) > self.term_limit:
                raise CapacityError(f"expansion exceeded {self.term_limit} terms")
        return out

    def __add__(self, other: "FactoredFrac") -> "FactoredFrac":
        if self.coeff == 0:
            return other
        if other.coeff == 0:
            return self
        n = self.nvars
        keys = set(self.factors) | set(other.factors)
        common: dict[LaurentPoly, int] = {}
        rest_a: dict[LaurentPoly, int] = {}
        rest_b: dict[LaurentPoly, int] = {}
        for p in keys:
            ea, eb = self.factors.get(p, 0), other.factors.get(p, 0)
            g = min(ea, eb)
            # pull out the common power (may be negative: shared denominator)
            common[p] = g
            if ea - g:
                rest_a[p] = ea - g
            if eb - g:
                rest_b[p] = eb - g
        mono = [min(a, b) for a, b in zip(self.mono, other.mono)]
        ma = [a - m for a, m in zip(self.mono, mono)]
        mb = [b - m for b, m in zip(other.mono, mono)]
        # rest_a and rest_b now have nonnegative exponents
        den_c = self.coeff.denominator * other.coeff.denominator // gcd(self.coeff.denominator, other.coeff.denominator)
        ca = self.coeff * den_c
        cb = other.coeff * den_c
        pa = self._expand(rest_a).shift(ma).scale(int(ca))
        pb = self._expand(rest_b).shift(mb).scale(int(cb))
        s = pa + pb
        if s.is_zero():
            return FactoredFrac(n, 0, (0,) * n)
        c, m, q = s.primitive_split()
        facs = {p: e for p, e in common.items() if e}
        if not q.is_constant():
            # cancel against denominator factors by trial division
            for p in [p for p, e in facs.items() if e < 0]:
                while facs.get(p, 0) < 0:
                    r = divides(p, q)
                    if r is None:
                        break
                    q = r
                    facs[p] += 1
                    if not facs[p]:
                        del facs[p]
            if not q.is_constant():
                c2, m2, q = q.primitive_split()
                c *= c2
                m = [a + b for a, b in zip(m, m2)]
                if not q.is_constant():
                    facs[q] = facs.get(q, 0) + 1
            else:
                c *= q.constant_value()
        return FactoredFrac(n, Fraction(c) / den_c, [a + b for a, b in zip(mono, m)], facs)

    def __sub__(self, other: "FactoredFrac") -> "FactoredFrac":
        return self + (-other)

    @classmethod
    def eval_poly(cls, p: LaurentPoly, args: Sequence["FactoredFrac"]) -> "FactoredFrac":
        n = args[0].nvars if args else 0
        total = FactoredFrac(n, 0, (0,) * n)
        for e, c in p.sorted_terms():
            term = FactoredFrac(n, c, (0,) * n)
            for a, k in zip(args, e):
                if k:
                    term = term * (a ** k)
            total = total + term
        return total

    def to_ratfunc(self) -> RatFunc:
        num = {p: e for p, e in self.factors.items() if e > 0}
        den = {p: -e for p, e in self.factors.items() if e < 0}
        c = self.coeff
        pn = self._expand(num).shift(self.mono).scale(c.numerator)
        pd = self._expand(den).scale(c.denominator)
        return RatFunc(pn, pd)

    def term_count(self) -> int:
        return len(self.to_ratfunc().num)

    def __repr__(self):
        return f"FactoredFrac({self.to_ratfunc()!r})"
