"""Graded vector spaces with the quadratic braiding.

A graded object is a finite list of basis vectors, each carrying a rational
degree ``a`` (a multiple of the fixed grading unit).  The braiding between
vectors of degrees ``a`` and ``b`` is the scalar ``Q^(a*b)`` with
``Q = q^(-2)``, followed by the flip of tensor factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .linalg import Matrix
from .scalar import QScalar, ScalarContext


def _rational(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"degrees must be rational, got {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class GradedObject:
    degrees: tuple[Fraction, ...]

    def __init__(self, degrees: Iterable):
        object.__setattr__(self, "degrees", tuple(_rational(d) for d in degrees))

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def tensor(self, other: "GradedObject") -> "GradedObject":
        """Degrees of ``self ⊗ other`` in the basis order ``(i, j) -> i*dim(other) + j``."""
        return GradedObject(a + b for a in self.degrees for b in other.degrees)

    def dual(self) -> "GradedObject":
        return GradedObject(-a for a in self.degrees)


@dataclass(frozen=True)
class BraidingContext:
    ctx: ScalarContext

    @property
    def Q(self) -> QScalar:
        return self.ctx.q_power(-2)

    def scalar(self, a, b) -> QScalar:
        """The braiding scalar ``Q^(a*b)``."""
        return self.ctx.q_power(-2 * _rational(a) * _rational(b))

    def grading_operator(self, V: GradedObject, power=1) -> Matrix:
        """Diagonal action of ``Q^(power * degree)`` on ``V``."""
        return Matrix.diag(self.ctx, [self.scalar(power, a) for a in V.degrees])


def braiding_matrix(V: GradedObject, W: GradedObject, bctx: BraidingContext, inverse: bool = False) -> Matrix:
    """Matrix of ``c_{V,W}: V⊗W -> W⊗V``, or of ``c_{W,V}^{-1}`` when ``inverse``."""
    m, n = V.dim, W.dim
    out = Matrix.zeros(bctx.ctx, n * m, m * n)
    sign = -1 if inverse else 1
    for i, a in enumerate(V.degrees):
        for j, b in enumerate(W.degrees):
            out.rows[j * m + i][i * n + j] = bctx.scalar(sign * a, b)
    return out


def half_braiding(sign: str, V: GradedObject, W: GradedObject, bctx: BraidingContext) -> Matrix:
    """Half-braiding of ``V`` past ``W``.

    ``sign='+'`` gives ``c_{V,W}`` and ``sign='-'`` gives ``c_{W,V}^{-1}``;
    both are maps ``V⊗W -> W⊗V``.
    """
    if sign in ("+", "plus", 1):
        return braiding_matrix(V, W, bctx)
    if sign in ("-", "minus", -1):
        return braiding_matrix(V, W, bctx, inverse=True)
    raise ValueError(f"unknown half-braiding sign {sign!r}")


def double_braiding(V: GradedObject, W: GradedObject, bctx: BraidingContext) -> Matrix:
    """``c_{W,V} ∘ c_{V,W}`` on ``V⊗W``."""
    return braiding_matrix(W, V, bctx) @ braiding_matrix(V, W, bctx)


def is_transparent(V: GradedObject, W: GradedObject, bctx: BraidingContext) -> bool:
    """True when the double braiding of ``V`` and ``W`` is the identity."""
    return all(bctx.scalar(2 * a, b).is_one() for a in V.degrees for b in W.degrees)
