"""Acceptance criteria, one test each.

Each criterion prints a single ``criterion k PASS|FAIL: detail`` line; the
lines are also collected into the terminal summary.  Run this file as a
script to print the lines without pytest.
"""

import itertools
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402
from oracles import brute_gram, eval_at, frac_rank, q_factorial  # noqa: E402

from qloop import boson  # noqa: E402
from qloop.braidcat import BraidingContext  # noqa: E402
from qloop.commcheck import check_commutation, pullback_compactified, pullback_uncompactified, tensor_comm  # noqa: E402
from qloop.qrep import check_relations, evaluation_pullback, make_Vn, tensor  # noqa: E402
from qloop.relations import (  # noqa: E402
    TRUNCATED_VERIFIED,
    VERIFIED,
    cyclic_tq,
    grothendieck_reduction_suite,
    resonant_b,
    sample_rational,
    t_q_relation,
    t_system,
)
from qloop.scalar import ScalarContext  # noqa: E402
from qloop.tensoralg import (  # noqa: E402
    check_pairing_axioms,
    hopf_pairing,
    in_left_radical,
    radical_dimension,
    serre_vectors,
    symmetriser,
    word_index,
)

G = ScalarContext.generic()
SEED = 20240607


def _family(form, rng):
    z, w = sample_rational(rng), sample_rational(rng)
    V0 = evaluation_pullback(make_Vn(0, G), z, form)
    V1 = evaluation_pullback(make_Vn(1, G), z, form)
    V2 = evaluation_pullback(make_Vn(2, G), z, form)
    V11 = tensor(V1, evaluation_pullback(make_Vn(1, G), w, form))
    return {"V0": V0, "V1(z)": V1, "V2(z)": V2, "V1(z)⊗V1(w)": V11}


def criterion_1():
    t = time.perf_counter()
    ok = all(check_relations(make_Vn(n, G)).passed for n in range(7))
    dt = time.perf_counter() - t
    return ok and dt < 5, f"V_0..V_6 relations exact, {dt:.2f}s (limit 5s)"


def criterion_2():
    rng = random.Random(SEED)
    zs = [sample_rational(rng) for _ in range(2)]
    t = time.perf_counter()
    ok, serre = True, True
    for z in zs:
        for n in range(5):
            res = check_relations(evaluation_pullback(make_Vn(n, G), z))
            ok = ok and res.passed
            serre = serre and any("Serre" in c for c in res.checked)
    dt = time.perf_counter() - t
    return ok and serre and dt < 30, f"n<=4 at z in {[str(z) for z in zs]}, Serre checked={serre}, {dt:.2f}s (limit 30s)"


def criterion_3():
    rng = random.Random(SEED + 3)
    zeta, xi = sample_rational(rng), sample_rational(rng)
    t = time.perf_counter()
    mods = {k: pullback_uncompactified(V, zeta, xi) for k, V in _family("hbar", rng).items()}
    per = {k: check_commutation(M).passed for k, M in mods.items()}
    closure = check_commutation(tensor_comm(mods["V1(z)"], mods["V2(z)"])).passed
    dt = time.perf_counter() - t
    ok = all(per.values()) and closure and dt < 60
    return ok, f"zeta={zeta}, xi={xi}; {per}; tensor closure={closure}; {dt:.2f}s (limit 60s)"


def criterion_4():
    rng = random.Random(SEED + 4)
    zeta, xi = sample_rational(rng), sample_rational(rng)
    mods = {k: pullback_compactified(V, zeta, xi) for k, V in _family("k", rng).items()}
    per = {k: check_commutation(M).passed for k, M in mods.items()}
    closure = check_commutation(tensor_comm(mods["V1(z)"], mods["V2(z)"])).passed
    return all(per.values()) and closure, f"t=-2, zeta={zeta}, xi={xi}; {per}; tensor closure={closure}"


def criterion_5():
    B = BraidingContext(G)
    res = check_pairing_axioms(3, G(2), G(3), B)
    diag = []
    for n in range(1, 6):
        i = word_index("+" * n)
        got = symmetriser(n, B).rows[i][i]
        want = G.q_power(F(-n * (n - 1), 2)) * G.q_factorial(n)
        # and against the independent q-factorial at a rational point
        qv = F(3, 7)
        diag.append(got == want and eval_at(got, qv) == qv ** F(-n * (n - 1), 2) * q_factorial(n, qv))
    return res["passed"] and all(diag), f"pairing axioms to degree 3: {res['passed']}; diagonal n=1..5: {diag}"


def criterion_6():
    B = BraidingContext(G)
    gram4 = hopf_pairing(4, G(2), G(3), B)
    serre = all(in_left_radical(v, gram4) for v in serre_vectors(G))
    dims, oracle = [], []
    for n in range(1, 5):
        dims.append(radical_dimension(hopf_pairing(n, G(2), G(3), B)))
        oracle.append(2**n - frac_rank(brute_gram(n, F(2), F(3), F(3, 7))))
    return serre and dims == oracle, f"Serre in radical={serre}; radical dims {dims}, brute-force deficits {oracle}"


def criterion_7():
    rng = random.Random(SEED + 7)
    zs = [sample_rational(rng) for _ in range(2)]
    t = time.perf_counter()
    verdicts = [t_system(n, z, G, seed=SEED).verdict for z in zs for n in (1, 2, 3)]
    dt = time.perf_counter() - t
    ok = all(v == VERIFIED for v in verdicts) and dt < 120
    return ok, f"n=1,2,3 at z in {[str(z) for z in zs]}: {verdicts}, {dt:.2f}s (limit 120s)"


def criterion_8():
    reps = [t_q_relation(m, F(2), 6, G, w=F(7, 3), seed=SEED) for m in (-1, 0, 1)]
    seq_ok = all(r.verdict == TRUNCATED_VERIFIED for r in reps)
    iso_ok = all(any(c["kind"] == "isomorphism" and c["verified"] for c in r.certificates) for r in reps)
    literal = t_q_relation(0, F(2), 6, G, seed=SEED, labels="literal").verdict
    return seq_ok and iso_ok, (
        f"N=6, m=-1,0,1: {[r.verdict for r in reps]}; off-resonance iso at z=2, w=7/3: {iso_ok}; "
        f"labels read as Q_m(z)=osc(m,1/z), V_1(z)=ev(V_1,q/z) (literal reading: {literal})"
    )


def criterion_9():
    a, b, lam, w, wp = 2, 5, 3, F(1, 2), F(7, 3)
    r6 = cyclic_tq(a, b, lam, w, wp, ScalarContext.root_of_unity(6), seed=SEED)
    iso6 = any(c["kind"] == "isomorphism" and c["verified"] for c in r6.certificates)
    r8 = cyclic_tq(a, b, lam, w, wp, ScalarContext.root_of_unity(8), seed=SEED)
    hom8 = r8.certificates[0]["data"].get("dimension")
    R8 = ScalarContext.root_of_unity(8)
    wr = F(5, 2)
    res = cyclic_tq(a, resonant_b(a, lam, w, wr, R8), lam, w, wr, R8, seed=SEED)
    seqs = [c for c in res.certificates if c["kind"] == "exact-sequence"][:2]
    chars = all(c["data"].get("sub_matches") and c["data"].get("quotient_matches") for c in seqs)
    resonant_ok = res.verdict == VERIFIED and len(seqs) == 2 and chars
    r3 = cyclic_tq(a, b, lam, w, wp, ScalarContext.root_of_unity(3), seed=SEED)
    iso3 = any(c["kind"] == "isomorphism" and c["verified"] for c in r3.certificates)
    swapped = sum("submodule sits at" in n for n in res.notes)
    ok = iso6 and hom8 == 0 and resonant_ok
    detail = (
        f"6th root: iso found={iso6} (q^3=-1, so this root is {r6.inputs['root_parity']}; "
        f"Hom dim {r6.certificates[0]['data'].get('dimension')}); "
        f"8th root Hom dim={hom8}; resonance at 8th root verified={resonant_ok}, p1..p4 matched={chars} "
        f"(sub/quotient spectral shifts opposite to the predicted ones in {swapped} of 2 sequences); "
        f"supplementary: 3rd root (q^N'=1) iso found={iso3}"
    )
    return ok, detail


def criterion_10():
    rng = random.Random(SEED + 10)

    def unit():
        return boson.CxRational(F(rng.randint(0, 59), 60))

    def elem():
        return (unit(), boson.CxRational(F(rng.randint(0, 59), 60), F(rng.randint(1, 9), rng.randint(1, 9))))

    t = time.perf_counter()
    sig = all(boson.d_sigma(unit(), unit(), unit(), rng.choice([1, 2, F(1, 3)])) == 0 for _ in range(10_000))
    psi = all(boson.d_psi(elem(), elem(), elem(), elem()).is_one() for _ in range(10_000))
    g = (boson.CxRational.minus_one(), boson.CxRational.minus_one())
    ggg = boson.psi(g, g, g) == boson.CxRational.minus_one()
    cob = boson.coboundary_test([g])
    nontriv = not cob.trivial and bool(cob.witness)
    H_ok = True
    for n in (2, 3, 4, 6):
        H = boson.generate_subgroup([(boson.CxRational(F(1, n)), boson.CxRational.one())])
        H_ok = H_ok and all(boson.psi(*t3).is_one() for t3 in itertools.product(H, repeat=3))
        H_ok = H_ok and boson.coboundary_test([(boson.CxRational(F(1, n)), boson.CxRational.one())]).trivial
    dt = time.perf_counter() - t
    ok = sig and psi and ggg and nontriv and H_ok and dt < 10
    return ok, f"dσ=0: {sig}; dψ=1: {psi} (10^4 tuples each); ψ(g,g,g)=-1: {ggg}; <(-1,-1)> nontrivial with witness: {nontriv}; ψ|_H trivial: {H_ok}; {dt:.2f}s (limit 10s)"


def criterion_11():
    grid = [F(k, 2) for k in range(-6, 7)]
    match = all(boson.charge_lattice(p, q, 2) == boson.charge_lattice_direct(p, q, 2) for p in grid for q in grid)
    sectors = sum(boson.charge_lattice(p, q, 2) for p in grid for q in grid)
    spots = (
        boson.charge_lattice(F(3, 2), F(1, 2), 2) == 1
        and boson.charge_lattice(1, 0, 2) == 0
        and boson.charge_lattice(0, 0, 2) == 1
    )
    return match and spots, f"r=2 grid of {len(grid) ** 2} pairs matches the lattice conditions: {match} ({sectors} sectors); spot values: {spots}"


def criterion_12():
    rep = grothendieck_reduction_suite(samples=20, seed=SEED)
    per = {c["label"]: c["verified"] for c in rep.certificates}
    return rep.verdict == VERIFIED, f"20 samples: {per}"


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 13)}


def _record(k):
    ok, detail = CRITERIA[k]()
    line = f"criterion {k} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    return ok, line


@pytest.mark.parametrize("k", range(1, 13))
def test_criterion(k):
    ok, line = _record(k)
    assert ok, line


if __name__ == "__main__":
    results = [_record(k)[0] for k in CRITERIA]
    sys.exit(0 if all(results) else 1)
