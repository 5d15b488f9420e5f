import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from qloop.boson import (
    BosonError,
    CxRational,
    SimpleBimoduleLabel,
    L_map,
    alpha_minus,
    alpha_plus,
    charge_lattice,
    charge_lattice_direct,
    coboundary_test,
    cocycle_table_csv,
    d_psi,
    d_sigma,
    exp_i_pi,
    fuse,
    generate_subgroup,
    isomorphic,
    labels_to_csv,
    labels_to_json,
    psi,
    sigma,
)

ONE = CxRational.one()
MINUS = CxRational.minus_one()
G = (MINUS, MINUS)
E = (ONE, ONE)

angles = st.fractions(min_value=0, max_value=1, max_denominator=60)
units = angles.map(CxRational)
elements = st.tuples(units, st.builds(CxRational, angles, st.fractions(min_value=F(1, 9), max_value=9, max_denominator=9)))


def test_L_map_examples():
    assert L_map(ONE, 1) == 0
    assert L_map(CxRational(F(3, 5)), 1) == F(3, 5)
    assert L_map(CxRational(F(8, 5)), 1) == F(3, 5)
    assert L_map(CxRational(F(1, 4)), 2) == F(1, 2)
    with pytest.raises(BosonError):
        L_map(CxRational(0, 2), 1)


def test_sigma_examples():
    assert sigma(ONE, CxRational(F(7, 10))) == 0
    assert sigma(CxRational(F(3, 5)), CxRational(F(7, 10))) == 1
    assert sigma(CxRational(F(1, 5)), CxRational(F(1, 10))) == 0


@given(units, units, st.sampled_from([1, 2, F(1, 3), F(5, 2)]))
def test_sigma_matches_L_formula(a, b, r):
    v = (L_map(a, r) + L_map(b, r) - L_map(a * b, r)) / r
    assert v in (0, 1) and sigma(a, b, r) == v


@given(units, units, units, st.sampled_from([1, 2, F(1, 3)]))
def test_sigma_is_cocycle(a, b, c, r):
    assert d_sigma(a, b, c, r) == 0


@given(elements, elements, elements, elements)
def test_psi_is_cocycle(g1, g2, g3, g4):
    assert d_psi(g1, g2, g3, g4).is_one()


@given(elements, elements)
def test_psi_normalised(g, h):
    assert psi(E, g, h).is_one() and psi(g, E, h).is_one() and psi(g, h, E).is_one()


def test_psi_on_minus_one():
    assert psi(G, G, G) == MINUS
    assert psi((CxRational(F(1, 3)), ONE), G, G).is_one()


def test_coboundary_minus_one():
    res = coboundary_test([G])
    assert not res.trivial and len(res.group) == 2
    assert (G, G, G) in res.witness
    assert CxRational(res.pairing) == MINUS


def _dphi_row(t):
    # coefficients of dφ(a, b, c) = φ(b,c) φ(ab,c)^-1 φ(a,bc) φ(a,b)^-1 on pairs
    a, b, c = t
    mul = lambda x, y: (x[0] * y[0], x[1] * y[1])
    row = {}
    for pair, s in (((b, c), 1), ((mul(a, b), c), -1), ((a, mul(b, c)), 1), ((a, b), -1)):
        row[pair] = row.get(pair, 0) + s
    return row


@pytest.mark.parametrize(
    "gen",
    [G, (CxRational(F(1, 4)), MINUS), (CxRational(F(1, 3)), CxRational(F(1, 3))), (CxRational(F(1, 6)), CxRational(F(1, 6))), (CxRational(F(1, 8)), MINUS)],
)
def test_witness_certifies_nontriviality(gen):
    res = coboundary_test([gen])
    assert not res.trivial
    # independent check: the witness kills every coboundary but not ψ
    total = {}
    for t, u in res.witness.items():
        for pair, s in _dphi_row(t).items():
            total[pair] = total.get(pair, 0) + u * s
    assert all(v == 0 for v in total.values())
    value = ONE
    for t, u in res.witness.items():
        value = value * psi(*t) ** u
    assert not value.is_one()
    assert value == CxRational(res.pairing)


@pytest.mark.parametrize("gens", [[], [(CxRational(F(1, 3)), ONE)], [(CxRational(F(1, 4)), ONE)], [(ONE, MINUS)]])
def test_coboundary_trivial(gens):
    res = coboundary_test(gens)
    assert res.trivial
    for t in itertools.product(res.group, repeat=3):
        a, b, c = t
        mul = lambda x, y: (x[0] * y[0], x[1] * y[1])
        d = res.phi[(b, c)] / res.phi[(mul(a, b), c)] * res.phi[(a, mul(b, c))] / res.phi[(a, b)]
        assert d == psi(*t)


def test_coboundary_nonzero_psi_but_trivial():
    # ψ takes the value exp(2πi/3) somewhere, yet it is dφ for some φ
    gen = (MINUS, CxRational(F(1, 3)))
    H = generate_subgroup([gen])
    assert any(not psi(*t).is_one() for t in itertools.product(H, repeat=3))
    res = coboundary_test([gen])
    assert res.trivial and len(res.group) == 6


def test_H_restriction_trivial():
    # ξ = 1 on H, so ψ is identically one there
    for n in (2, 3, 4, 6):
        H = generate_subgroup([(CxRational(F(1, n)), ONE)])
        assert len(H) == n
        assert all(psi(*t).is_one() for t in itertools.product(H, repeat=3))


def test_infinite_subgroup_rejected():
    with pytest.raises(BosonError):
        coboundary_test([(ONE, CxRational(0, 2))])
    with pytest.raises(BosonError):
        generate_subgroup([(CxRational(F(1, 97)), ONE)], limit=16)


def test_fusion_and_iso():
    r = 2
    unit = SimpleBimoduleLabel.unit_label(r)
    a = SimpleBimoduleLabel.from_charge(F(1, 3), CxRational(F(1, 5)), r)
    assert isomorphic(fuse(a, unit), a)
    assert fuse(a, a.inverse()).is_unit()
    w = SimpleBimoduleLabel.from_charge(F(1, 2), ONE, r)
    assert fuse(w, SimpleBimoduleLabel.from_charge(F(-1, 2), ONE, r)).is_unit()
    # β is only defined modulo r
    assert isomorphic(a, SimpleBimoduleLabel.from_charge(F(1, 3) + 2, CxRational(F(1, 5)), r))
    assert not isomorphic(a, SimpleBimoduleLabel.from_charge(F(1, 3) + 1, CxRational(F(1, 5)), r))
    with pytest.raises(BosonError):
        fuse(a, SimpleBimoduleLabel.unit_label(3))


def test_alpha_labels():
    lab = alpha_plus(F(1, 2), 2)
    assert lab.beta == F(1, 2) and lab.xi == exp_i_pi(1)
    assert alpha_minus(F(1, 2), 2).xi == exp_i_pi(-1)


@given(st.fractions(max_denominator=12), st.fractions(max_denominator=12), st.sampled_from([1, 2, F(3, 2)]))
def test_alpha_multiplicative(b1, b2, r):
    for alpha in (alpha_plus, alpha_minus):
        assert isomorphic(alpha(b1, r) * alpha(b2, r), alpha(b1 + b2, r))


def test_charge_lattice_spots():
    assert charge_lattice(F(3, 2), F(1, 2), 2) == 1
    assert charge_lattice(1, 0, 2) == 0
    assert charge_lattice(0, 0, 2) == 1


def test_charge_lattice_grid():
    grid = [F(k, 2) for k in range(-6, 7)]
    for p in grid:
        for q in grid:
            assert charge_lattice(p, q, 2) == charge_lattice_direct(p, q, 2)


@given(st.fractions(max_denominator=6), st.fractions(max_denominator=6), st.sampled_from([1, 2, 3, F(1, 2), F(2, 3)]))
def test_charge_lattice_matches_direct(p, q, r):
    assert charge_lattice(p, q, r) == charge_lattice_direct(p, q, r)


def test_exports():
    labs = [alpha_plus(F(1, 2), 2), SimpleBimoduleLabel.unit_label(2)]
    csv_text = labels_to_csv(labs)
    assert csv_text.splitlines()[0] == "beta,eta_angle,xi_angle,xi_modulus,r"
    assert csv_text.splitlines()[1] == "1/2,1/4,1/2,1,2"
    assert '"beta": "1/2"' in labels_to_json(labs)
    table = cocycle_table_csv(generate_subgroup([G]))
    assert table.splitlines()[-1] == "-1,-1,-1,-1,-1,-1,1,-1"
    assert len(table.splitlines()) == 1 + 8


def test_cx_rational():
    x = CxRational(F(5, 4), 3)
    assert x.angle == F(1, 4) and x.order() is None
    assert CxRational(F(1, 6)).order() == 6
    assert (x * x.inverse()).is_one()
    assert abs(MINUS.to_complex() + 1) < 1e-12
    assert CxRational.from_dict(x.to_dict()) == x
    with pytest.raises(TypeError):
        CxRational(0.5)
    with pytest.raises(BosonError):
        CxRational(0, 0)
