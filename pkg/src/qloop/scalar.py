"""Exact scalars for q-deformed linear algebra.

Every scalar is a rational function with rational coefficients in the
formal variable ``u = q^(1/D)``.  Two modes are supported:

* generic: ``q`` is transcendental, values live in Q(u) and are kept as
  reduced fractions ``num/den`` with ``den`` monic;
* root of unity: ``q`` is a primitive N-th root of unity.  We take ``u`` a
  primitive (N*D)-th root, so ``q = u^D`` has order exactly N, and reduce
  modulo the cyclotomic polynomial of order N*D.  Values are then plain
  polynomials of bounded degree.

The canonical text form is an integer-coefficient Laurent expression in
``q^(a/D)``, optionally over an integer or polynomial denominator, for
example ``q + q^(-1)``, ``(q^(1/2) - 1)/3`` or ``1/(q^2 - 1)``.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

import flint

Rational = Union[int, Fraction]


class ScalarError(ValueError):
    """Raised for malformed scalars, context mismatches and division by zero."""


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> flint.fmpq_poly:
    return flint.fmpq_poly(flint.fmpz_poly.cyclotomic(n))


def _to_fmpq(x: Rational) -> flint.fmpq:
    if isinstance(x, int):
        return flint.fmpq(x)
    return flint.fmpq(x.numerator, x.denominator)


def _fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


@dataclass(frozen=True)
class ScalarContext:
    """Where scalars live: the root denominator ``D`` and an optional order ``N``.

    ``N is None`` selects generic mode.
    """

    D: int = 1
    N: int | None = None
    _mod: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.D, int) or self.D < 1:
            raise ScalarError(f"root denominator must be a positive integer, got {self.D!r}")
        if self.N is not None:
            if not isinstance(self.N, int) or self.N < 1:
                raise ScalarError(f"root of unity order must be a positive integer, got {self.N!r}")
            object.__setattr__(self, "_mod", _cyclotomic(self.N * self.D))

    @classmethod
    def generic(cls, D: int = 1) -> "ScalarContext":
        return cls(D=D)

    @classmethod
    def root_of_unity(cls, N: int, D: int = 1) -> "ScalarContext":
        return cls(D=D, N=N)

    @property
    def is_root(self) -> bool:
        return self.N is not None

    @property
    def mode_string(self) -> str:
        return "generic" if self.N is None else f"root:{self.N}"

    # constructors

    def __call__(self, value: Union[Rational, str, "QScalar"]) -> "QScalar":
        if isinstance(value, QScalar):
            if value.ctx != self:
                raise ScalarError("scalar belongs to a different context")
            return value
        if isinstance(value, str):
            return parse(value, self)
        if isinstance(value, (int, Fraction)):
            return QScalar._make(self, flint.fmpq_poly([_to_fmpq(value)]), _ONE)
        raise ScalarError(f"cannot convert {value!r} to a scalar")

    @property
    def zero(self) -> "QScalar":
        return self(0)

    @property
    def one(self) -> "QScalar":
        return self(1)

    @property
    def q(self) -> "QScalar":
        return self.q_power(1)

    def u_power(self, k: int) -> "QScalar":
        """Return ``u^k`` where ``u = q^(1/D)``."""
        if self.N is not None:
            k %= self.N * self.D
            return QScalar._make(self, _monomial(k), _ONE)
        if k >= 0:
            return QScalar(self, _monomial(k), _ONE)
        return QScalar(self, _ONE, _monomial(-k))

    def q_power(self, e: Rational) -> "QScalar":
        """Return ``q^e``; ``e*D`` must be an integer."""
        e = Fraction(e)
        k = e * self.D
        if k.denominator != 1:
            raise ScalarError(f"q^{e} needs a root denominator divisible by {e.denominator}, have D={self.D}")
        return self.u_power(int(k))

    def q_number(self, n: int) -> "QScalar":
        """Symmetric quantum integer ``[n]_q = (q^n - q^-n)/(q - q^-1)``."""
        if n == 0:
            return self.zero
        if n < 0:
            return -self.q_number(-n)
        terms = [self.D * (n - 1 - 2 * k) for k in range(n)]
        return _laurent_sum(self, {t: 1 for t in terms})

    def q_factorial(self, n: int) -> "QScalar":
        if n < 0:
            raise ScalarError("q-factorial of a negative integer")
        out = self.one
        for k in range(2, n + 1):
            out = out * self.q_number(k)
        return out

    def parse(self, text: str) -> "QScalar":
        return parse(text, self)


_ONE = flint.fmpq_poly([1])


@lru_cache(maxsize=4096)
def _monomial_cached(k: int) -> flint.fmpq_poly:
    return flint.fmpq_poly([0] * k + [1])


def _monomial(k: int) -> flint.fmpq_poly:
    # fmpq_poly is mutable in principle; callers never mutate, so sharing is safe
    return _monomial_cached(k)


def _laurent_sum(ctx: ScalarContext, terms: dict[int, Rational]) -> "QScalar":
    """Build ``sum c_k u^k`` from a dict of exponents to rational coefficients."""
    low = min(terms) if terms else 0
    shift = -low if low < 0 else 0
    coeffs = [flint.fmpq(0)] * (max(terms) + shift + 1 if terms else 1)
    for k, c in terms.items():
        coeffs[k + shift] += _to_fmpq(c)
    num = flint.fmpq_poly(coeffs)
    if ctx.N is not None:
        out = QScalar._make(ctx, num, _ONE)
        if shift:
            out = out * ctx.u_power(-shift)
        return out
    return QScalar(ctx, num, _monomial(shift))


class QScalar:
    """An exact element of Q(q^(1/D)) or of the cyclotomic field Q(zeta_{ND})."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx: ScalarContext, num: flint.fmpq_poly, den: flint.fmpq_poly):
        if den.is_zero():
            raise ScalarError("division by zero")
        if ctx.N is not None:
            if not den.is_one():
                inv = _invert_mod(den, ctx._mod)
                num = num * inv
            num = num % ctx._mod
            den = _ONE
        elif not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.ctx = ctx
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _make(cls, ctx: ScalarContext, num: flint.fmpq_poly, den: flint.fmpq_poly) -> "QScalar":
        """Construct from an already reduced pair (root mode still reduces num)."""
        obj = cls.__new__(cls)
        if ctx.N is not None and num.degree() >= ctx._mod.degree():
            num = num % ctx._mod
        obj.ctx = ctx
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    # coercion

    def _coerce(self, other) -> "QScalar":
        if isinstance(other, QScalar):
            if other.ctx != self.ctx:
                raise ScalarError("cannot combine scalars from different contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx(other)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den.is_one() and o.den.is_one():
            return QScalar._make(self.ctx, self.num + o.num, _ONE)
        if self.den == o.den:
            return QScalar(self.ctx, self.num + o.num, self.den)
        return QScalar(self.ctx, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return QScalar._make(self.ctx, -self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.num.is_zero() or o.num.is_zero():
            return self.ctx.zero
        if o.is_one():
            return self
        if self.is_one():
            return o
        if self.den.is_one() and o.den.is_one():
            if self.ctx.N is not None:
                return QScalar._make(self.ctx, (self.num * o.num) % self.ctx._mod, _ONE)
            return QScalar._make(self.ctx, self.num * o.num, _ONE)
        # cross-cancel before multiplying keeps degrees small
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        n1, d2 = (self.num // g1, o.den // g1) if not g1.is_one() else (self.num, o.den)
        n2, d1 = (o.num // g2, self.den // g2) if not g2.is_one() else (o.num, self.den)
        den = d1 * d2
        num = n1 * n2
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return QScalar._make(self.ctx, num, den)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if self.num.is_zero():
            raise ScalarError("division by zero")
        if self.ctx.N is not None:
            return QScalar._make(self.ctx, _invert_mod(self.num, self.ctx._mod), _ONE)
        num, den = self.den, self.num
        lc = den.leading_coefficient()
        return QScalar._make(self.ctx, num / lc, den / lc)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ScalarError("only integer powers of general scalars are supported")
        if n < 0:
            return self.inverse() ** (-n)
        if self.den.is_one() and self.num.length() == self.num.degree() + 1 and self._is_monomial():
            k = self.num.degree()
            c = self.num[k]
            return self.ctx.u_power(k * n) * self.ctx(_fraction(c) ** n)
        out = self.ctx.one
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def _is_monomial(self) -> bool:
        k = self.num.degree()
        return k >= 0 and all(self.num[i] == 0 for i in range(k))

    # predicates

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ctx(other)
        if not isinstance(other, QScalar):
            return NotImplemented
        return self.ctx == other.ctx and self.num == other.num and self.den == other.den

    def __ne__(self, other) -> bool:
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx.D, self.ctx.N, str(self.num), str(self.den)))
        return self._hash

    def is_rational(self) -> bool:
        return self.den.is_one() and self.num.degree() <= 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ScalarError(f"{self} is not a rational number")
        return _fraction(self.num[0]) if not self.num.is_zero() else Fraction(0)

    def as_q_power(self) -> Fraction | None:
        """Return ``e`` if this scalar equals ``q^e`` exactly, else ``None``.

        In root-of-unity mode the exponent is only defined modulo N and the
        smallest non-negative representative is returned.
        """
        if self.ctx.N is not None:
            if self.den.is_one() and self._is_monomial() and self.num[self.num.degree()] == 1:
                return Fraction(self.num.degree(), self.ctx.D)
            return None
        if self.num.is_one() and self._den_is_monic_monomial():
            return Fraction(-self.den.degree(), self.ctx.D)
        if self.den.is_one() and self._is_monomial() and self.num[self.num.degree()] == 1:
            return Fraction(self.num.degree(), self.ctx.D)
        return None

    def _den_is_monic_monomial(self) -> bool:
        k = self.den.degree()
        return all(self.den[i] == 0 for i in range(k)) and self.den[k] == 1

    # evaluation and text

    def eval_complex(self, q: complex | None = None) -> complex:
        """Floating-point value, for cross-checks only.

        In generic mode ``q`` must be supplied and ``u`` is its principal
        D-th root.  In root mode ``u = exp(2 pi i/(N D))`` unless ``q`` is given.
        """
        if q is None:
            if self.ctx.N is None:
                raise ScalarError("generic scalars need a value of q to evaluate")
            u = cmath.exp(2j * math.pi / (self.ctx.N * self.ctx.D))
        else:
            u = complex(q) ** (1.0 / self.ctx.D)
        return _eval_poly(self.num, u) / _eval_poly(self.den, u)

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"QScalar({format_scalar(self)!r}, {self.ctx.mode_string}, D={self.ctx.D})"


def _eval_poly(p: flint.fmpq_poly, u: complex) -> complex:
    out = 0j
    for c in reversed(p.coeffs()):
        out = out * u + float(_fraction(c))
    return out


def _invert_mod(p: flint.fmpq_poly, mod: flint.fmpq_poly) -> flint.fmpq_poly:
    g, s, _ = (p % mod).xgcd(mod)
    if not g.is_one():
        raise ScalarError("division by zero")
    return s


# ---------------------------------------------------------------------------
# canonical text form


def _exp_text(k: int, D: int) -> str:
    e = Fraction(k, D)
    if e == 1:
        return "q"
    if e.denominator == 1 and e > 0:
        return f"q^{e.numerator}"
    return f"q^({e})"


def _laurent_text(coeffs: list[int], shift: int, D: int) -> str:
    """Render ``sum coeffs[i] u^(i+shift)`` with the highest power first."""
    parts: list[tuple[bool, str]] = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        k = i + shift
        neg = c < 0
        a = abs(c)
        if k == 0:
            body = str(a)
        elif a == 1:
            body = _exp_text(k, D)
        else:
            body = f"{a}*{_exp_text(k, D)}"
        parts.append((neg, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _int_coeffs(p: flint.fmpq_poly, scale: int) -> list[int]:
    return [int((c * scale).p) for c in p.coeffs()]


def _low_order(coeffs: list[int]) -> int:
    for i, c in enumerate(coeffs):
        if c != 0:
            return i
    return 0


def format_scalar(x: QScalar) -> str:
    D = x.ctx.D
    if x.num.is_zero():
        return "0"
    L = math.lcm(int(x.num.denom()), int(x.den.denom()))
    num = _int_coeffs(x.num, L)
    den = _int_coeffs(x.den, L)
    g = 0
    for c in num + den:
        g = math.gcd(g, c)
    num = [c // g for c in num]
    den = [c // g for c in den]
    dlow = _low_order(den)
    den = den[dlow:]
    nterms = sum(1 for c in num if c)
    ntext = _laurent_text(num, -dlow, D)
    if len(den) == 1:
        c = den[0]
        if c == 1:
            return ntext
        return (f"({ntext})" if nterms > 1 else ntext) + f"/{c}"
    dtext = _laurent_text(den, 0, D)
    return (f"({ntext})" if nterms > 1 else ntext) + f"/({dtext})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|([-+*/^()]))")


def parse(text: str, ctx: ScalarContext) -> QScalar:
    """Parse a scalar expression in ``q``.

    Accepts sums, products, quotients, parentheses, integers, and powers
    ``q^k`` / ``q^(a/b)``; general sub-expressions may be raised to integer
    powers.  Every canonical string produced by :func:`format_scalar`
    round-trips exactly.
    """
    tokens: list[str] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ScalarError(f"unexpected character in scalar {text!r} at {pos}")
        tokens.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    if not tokens:
        raise ScalarError("empty scalar expression")
    p = _Parser(tokens, ctx, text)
    out = p.expr()
    if p.i != len(tokens):
        raise ScalarError(f"trailing input in scalar {text!r}")
    return out


class _Parser:
    def __init__(self, tokens: list[str], ctx: ScalarContext, text: str):
        self.t = tokens
        self.i = 0
        self.ctx = ctx
        self.text = text

    def peek(self) -> str | None:
        return self.t[self.i] if self.i < len(self.t) else None

    def take(self, want: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise ScalarError(f"malformed scalar {self.text!r}")
        self.i += 1
        return tok

    def expr(self) -> QScalar:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        out = self.term()
        if sign < 0:
            out = -out
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> QScalar:
        out = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            out = out * rhs if op == "*" else out / rhs
        return out

    def unary(self) -> QScalar:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> QScalar:
        tok = self.peek()
        if tok == "q":
            self.take()
            if self.peek() == "^":
                self.take()
                return self.ctx.q_power(self.exponent())
            return self.ctx.q
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.exponent()
            if e.denominator != 1:
                raise ScalarError("only q may carry a fractional exponent")
            return base ** int(e)
        return base

    def atom(self) -> QScalar:
        tok = self.take()
        if tok == "(":
            out = self.expr()
            self.take(")")
            return out
        if tok.isdigit():
            return self.ctx(int(tok))
        raise ScalarError(f"malformed scalar {self.text!r}")

    def exponent(self) -> Fraction:
        if self.peek() == "(":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            a = int(self.take())
            b = 1
            if self.peek() == "/":
                self.take()
                b = int(self.take())
            self.take(")")
            return sign * Fraction(a, b)
        tok = self.take()
        if not tok.isdigit():
            raise ScalarError(f"malformed exponent in {self.text!r}")
        return Fraction(int(tok))
