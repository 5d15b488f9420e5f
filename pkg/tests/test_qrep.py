from fractions import Fraction

import pytest

from qloop import qrep
from qloop.linalg import Matrix
from qloop.qrep import (
    QGroupRep,
    RepError,
    central_character,
    check_relations,
    dual,
    dual_central_character,
    evaluation_pullback,
    make_cyclic,
    make_q_oscillator,
    make_Vn,
    make_Xm,
    tensor,
)
from qloop.scalar import ScalarContext

G = ScalarContext.generic()


@pytest.mark.parametrize("n", range(0, 7))
def test_Vn_relations(n):
    V = make_Vn(n, G)
    assert V.dim == n + 1
    res = check_relations(V)
    assert res.passed, res.failures


def test_V2_matrices_frozen():
    V = make_Vn(2, G)
    q = G.q
    two = q + q.inverse()
    assert V.gens["e+"].to_strings() == Matrix(G, [[0, two, 0], [0, 0, 1], [0, 0, 0]]).to_strings()
    assert V.gens["e-"].to_strings() == Matrix(G, [[0, 0, 0], [1, 0, 0], [0, two, 0]]).to_strings()
    assert V.weights == [q**2, G.one, q**-2]


@pytest.mark.parametrize("form", ["k", "hbar"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_evaluation_relations(n, form):
    W = evaluation_pullback(make_Vn(n, G), Fraction(5, 3), form=form)
    res = check_relations(W)
    assert res.passed, res.failures
    # Serre relations are among those checked
    assert any("Serre" in c or "serre" in c for c in res.checked)


def test_corrupted_module_fails():
    V = make_Vn(2, G)
    bad = QGroupRep(V.flavor, G, {"e+": V.gens["e+"].scale(G(2)), "e-": V.gens["e-"]}, V.weights)
    assert not check_relations(bad).passed


def test_oscillator_truncation():
    Q = make_q_oscillator(0, Fraction(2), 5, G)
    assert Q.borel and Q.truncated and Q.floor == -8
    res = check_relations(Q)
    assert res.passed, res.failures
    assert res.skipped  # the cut-off edge is reported


def test_Xm_one_dimensional():
    X = make_Xm(3, G)
    assert X.dim == 1 and X.weights == [(Fraction(0), 3)]
    assert check_relations(X).passed


@pytest.mark.parametrize("N", [3, 4, 6, 8])
def test_cyclic_modules(N):
    R = ScalarContext.root_of_unity(N)
    V = make_cyclic(2, 3, 5, R)
    assert V.dim == qrep.order_of_q_squared(R)
    assert check_relations(V).passed
    p = central_character(V)
    assert all(x for x in p.as_tuple())


def test_cyclic_needs_root():
    with pytest.raises(RepError):
        make_cyclic(1, 1, 1, G)


def test_dual_central_character():
    R = ScalarContext.root_of_unity(8)
    V = make_cyclic(2, 3, 5, R)
    assert central_character(dual(V)) == dual_central_character(central_character(V))


def test_casimir_on_Vn_at_root():
    R = ScalarContext.root_of_unity(8)
    V = make_Vn(2, R)
    q = R.q
    assert central_character(V).c == q**3 + q**-3


def test_tensor_relations():
    W = tensor(make_Vn(1, G), make_Vn(2, G))
    assert W.dim == 6 and check_relations(W).passed
    L = tensor(evaluation_pullback(make_Vn(1, G), 2), evaluation_pullback(make_Vn(1, G), 7))
    assert check_relations(L).passed


def test_json_round_trip():
    for V in (make_Vn(2, G), make_q_oscillator(1, 3, 3, G), make_Xm(-2, G), evaluation_pullback(make_Vn(1, G), 4, "hbar")):
        back = QGroupRep.from_json(V.to_json())
        assert qrep.representations_equal(V, back)


def test_errors():
    with pytest.raises(RepError):
        make_Vn(-1, G)
    with pytest.raises(RepError):
        evaluation_pullback(make_Vn(1, G), 0)
    with pytest.raises(RepError):
        tensor(make_Vn(1, G), evaluation_pullback(make_Vn(1, G), 2))
    with pytest.raises(RepError):
        central_character(make_q_oscillator(0, 1, 3, G))
    with pytest.raises(RepError):
        evaluation_pullback(make_Vn(1, ScalarContext.root_of_unity(5)), 2, form="hbar")
