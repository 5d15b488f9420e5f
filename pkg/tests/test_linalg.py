from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from qloop.linalg import Matrix, nullspace
from qloop.scalar import ScalarContext

G = ScalarContext.generic()

entries = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def rational_matrix(draw, max_dim=5):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    rows = [[draw(entries) if draw(st.booleans()) else Fraction(0) for _ in range(n)] for _ in range(m)]
    return rows


def as_matrix(rows):
    return Matrix(G, rows)


@given(rational_matrix())
def test_rank_matches_sympy(rows):
    assert as_matrix(rows).rank() == sympy.Matrix(rows).rank()


@given(rational_matrix())
def test_kernels(rows):
    M = as_matrix(rows)
    for v in M.nullspace():
        assert all(x.is_zero() for x in M.apply(v))
    assert len(M.nullspace()) == M.ncols - M.rank()
    assert len(M.left_kernel()) == M.nrows - M.rank()


@given(rational_matrix(4))
def test_inverse_when_square(rows):
    n = min(len(rows), len(rows[0]))
    M = as_matrix([r[:n] for r in rows[:n]])
    if M.rank() < n:
        return
    assert (M @ M.inverse()).is_identity()
    assert (M**-1 @ M**2) == M


def test_q_dependent_kernel():
    q = G.q
    M = Matrix(G, [[q, 1], [q * q, q]])
    ker = M.nullspace()
    assert len(ker) == 1
    assert all(x.is_zero() for x in M.apply(ker[0]))


def test_kron_and_transpose():
    A = Matrix(G, [[1, 2], [3, 4]])
    B = Matrix.identity(G, 2)
    K = A.kron(B)
    assert K.shape == (4, 4)
    assert K[(2, 0)] == 3 and K[(2, 2)] == 4
    assert (A @ B).transpose() == B.transpose() @ A.transpose()


def test_sparse_nullspace_helper():
    rows = [{0: G(1), 1: G(-1)}, {2: G.q}]
    basis = nullspace(G, rows, 3)
    assert len(basis) == 1
    assert basis[0][0] == basis[0][1] and basis[0][2].is_zero()


def test_string_round_trip():
    q = G.q
    M = Matrix(G, [[q + 1, q.inverse()], [0, Fraction(1, 3)]])
    assert Matrix.from_strings(G, M.to_strings()) == M
