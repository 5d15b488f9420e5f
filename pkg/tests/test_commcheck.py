from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qloop.commcheck import (
    UNCOMPACTIFIED,
    CommError,
    CommModule,
    check_commutation,
    check_yd_generators,
    comm_modules_equal,
    compactified,
    pullback_compactified,
    pullback_uncompactified,
    rescale_family,
    tensor_comm,
    tensor_via_half_braiding,
)
from qloop.intertwine import find_isomorphism
from qloop.linalg import Matrix
from qloop.qrep import evaluation_pullback, make_q_oscillator, make_Vn
from qloop.scalar import ScalarContext

G = ScalarContext.generic()
ZETA, XI = Fraction(2), Fraction(3)


def ev(n, z, form):
    return evaluation_pullback(make_Vn(n, G), z, form=form)


def unc(n, z):
    return pullback_uncompactified(ev(n, z, "hbar"), ZETA, XI)


def comp(n, z):
    return pullback_compactified(ev(n, z, "k"), ZETA, XI)


def trivial(setting=UNCOMPACTIFIED):
    zero = Matrix.zeros(G, 1, 1)
    grading = [G.one] if setting.compact else [0]
    return CommModule(G, {n: zero for n in ("f+", "f-", "fb+", "fb-")}, grading, G(ZETA), G(XI), setting)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("build", [unc, comp])
def test_pullbacks_commute(build, n):
    M = build(n, Fraction(5, 2))
    rep = check_commutation(M)
    assert rep.passed, rep.failures
    yd = check_yd_generators(M)
    assert yd["passed"] and yd["agrees_with_commutation"]


@given(st.fractions(min_value=-5, max_value=5).filter(bool), st.fractions(min_value=-5, max_value=5).filter(bool))
def test_pullback_any_pairing(zeta, xi):
    M = pullback_uncompactified(ev(1, 3, "hbar"), zeta, xi)
    assert check_commutation(M).passed


@pytest.mark.parametrize("setting", [UNCOMPACTIFIED, compactified(-2)])
def test_trivial_module(setting):
    assert check_commutation(trivial(setting)).passed


def test_scaled_generator_fails():
    M = unc(1, 3)
    F = dict(M.F)
    F["f+"] = F["f+"].scale(G(2))
    bad = CommModule(G, F, M.grading, M.zeta, M.xi)
    rep = check_commutation(bad)
    assert not rep.passed
    assert not rep.identities["f+·fb- - c·fb-·f+"]
    yd = check_yd_generators(bad)
    assert not yd["passed"] and yd["agrees_with_commutation"]


def test_compactified_fb_minus():
    V = ev(1, 2, "k")
    M = pullback_compactified(V, ZETA, XI)
    q = G.q
    assert M.F["fb-"] == V.gens["e0-"].scale(G(ZETA) * (q - q.inverse()) / q**2)
    assert M.setting == compactified(-2)


def test_setting_validation():
    with pytest.raises(CommError):
        compactified(3)
    with pytest.raises(CommError):
        compactified(0)
    with pytest.raises(CommError):
        pullback_compactified(ev(1, 2, "k"), ZETA, XI, t=4)
    with pytest.raises(CommError):
        pullback_uncompactified(make_q_oscillator(0, 1, 3, G), ZETA, XI)
    with pytest.raises(CommError):
        pullback_uncompactified(ev(1, 2, "k"), ZETA, XI)


@pytest.mark.parametrize("build", [unc, comp])
def test_tensor_matches_half_braiding(build):
    M, N = build(1, 2), build(2, Fraction(1, 3))
    T = tensor_comm(M, N)
    assert comm_modules_equal(T, tensor_via_half_braiding(M, N))
    assert check_commutation(T).passed


@pytest.mark.parametrize("build,setting", [(unc, UNCOMPACTIFIED), (comp, compactified(-2))])
def test_tensor_unit_and_associativity(build, setting):
    M = build(1, 2)
    one = trivial(setting)
    assert comm_modules_equal(tensor_comm(M, one), M)
    assert comm_modules_equal(tensor_comm(one, M), M)
    A, B, C = build(1, 2), build(1, 3), build(1, 5)
    assert comm_modules_equal(tensor_comm(tensor_comm(A, B), C), tensor_comm(A, tensor_comm(B, C)))


def test_pullback_is_monoidal():
    from qloop.qrep import tensor

    a, b = ev(1, 2, "hbar"), ev(1, 7, "hbar")
    lhs = pullback_uncompactified(tensor(a, b), ZETA, XI)
    rhs = tensor_comm(pullback_uncompactified(a, ZETA, XI), pullback_uncompactified(b, ZETA, XI))
    assert find_isomorphism(lhs, rhs) is not None


def test_rescale_identity():
    M = unc(2, 3)
    assert comm_modules_equal(rescale_family(M, 1), M)
    assert comm_modules_equal(rescale_family(M, 1, split="degree"), M)


@pytest.mark.parametrize("w", [2, Fraction(3, 5)])
def test_rescale_chiral_is_spectral_shift(w):
    z = Fraction(7, 2)
    M = unc(1, z)
    R = rescale_family(M, w)
    assert check_commutation(R).passed
    assert find_isomorphism(R, unc(1, z * w * w)) is not None


@pytest.mark.parametrize("w", [2, Fraction(3, 5)])
def test_rescale_degree_split_is_conjugation(w):
    z = Fraction(7, 2)
    M = unc(1, z)
    R = rescale_family(M, w, split="degree")
    assert check_commutation(R).passed
    assert find_isomorphism(R, M) is not None
    assert find_isomorphism(R, unc(1, z * w * w)) is None


def test_unknown_split():
    with pytest.raises(CommError):
        rescale_family(unc(1, 2), 2, split="other")
