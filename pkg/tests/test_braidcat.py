from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qloop.braidcat import BraidingContext, GradedObject, braiding_matrix, double_braiding, half_braiding, is_transparent
from qloop.linalg import Matrix
from qloop.scalar import ScalarContext

G = ScalarContext.generic(D=2)
B = BraidingContext(G)

degrees = st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=2), min_size=1, max_size=3)


def I(n):
    return Matrix.identity(G, n)


def test_scalar_convention():
    assert B.Q == G.q_power(-2)
    assert B.scalar(1, 1) == G.q_power(-2)
    assert B.scalar(Fraction(1, 2), -1) == G.q


def test_floats_rejected():
    with pytest.raises(TypeError):
        GradedObject([0.5])


@given(degrees, degrees, degrees)
def test_yang_baxter(a, b, c):
    U, V, W = GradedObject(a), GradedObject(b), GradedObject(c)
    lhs = I(W.dim).kron(braiding_matrix(U, V, B)) @ braiding_matrix(U, W, B).kron(I(V.dim)) @ I(U.dim).kron(braiding_matrix(V, W, B))
    rhs = braiding_matrix(V, W, B).kron(I(U.dim)) @ I(V.dim).kron(braiding_matrix(U, W, B)) @ braiding_matrix(U, V, B).kron(I(W.dim))
    assert lhs == rhs


@given(degrees, degrees)
def test_inverse_braiding(a, b):
    V, W = GradedObject(a), GradedObject(b)
    c = braiding_matrix(V, W, B)
    cinv = braiding_matrix(W, V, B, inverse=True)  # c_{V,W}^{-1}: W⊗V -> V⊗W
    assert (cinv @ c).is_identity()


@given(degrees, degrees, degrees)
def test_hexagon(a, b, c):
    U, V, W = GradedObject(a), GradedObject(b), GradedObject(c)
    lhs = braiding_matrix(U, V.tensor(W), B)
    rhs = I(V.dim).kron(braiding_matrix(U, W, B)) @ braiding_matrix(U, V, B).kron(I(W.dim))
    assert lhs == rhs


def test_half_braidings_and_transparency():
    F = GradedObject([1, -1])
    X = GradedObject([Fraction(1, 2)])
    assert half_braiding("+", F, X, B) == braiding_matrix(F, X, B)
    assert half_braiding("-", F, X, B) == braiding_matrix(F, X, B, inverse=True)
    with pytest.raises(ValueError):
        half_braiding("?", F, X, B)
    assert not is_transparent(F, X, B)
    assert is_transparent(GradedObject([0]), X, B)
    dd = double_braiding(F, X, B)
    assert dd.is_diagonal()
    assert dd.diagonal()[0] == G.q_power(-2)
