"""Simple bimodule labels of the compactified boson and their cocycles.

Nonzero complex numbers are modelled exactly as ``ρ · exp(2πiθ)`` with a
positive rational modulus ``ρ`` and a rational angle ``θ`` taken mod 1.  A
simple label is a pair ``(η, ξ)``; ``η = exp(2πi β / r)`` records the charge
``β`` mod ``r``.  The braiding constant is fixed to ``κ = iπ`` throughout.
"""

from __future__ import annotations

import cmath
import csv
import io
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import Matrix as SMatrix
from sympy import ZZ
from sympy.matrices.normalforms import smith_normal_decomp


class BosonError(ValueError):
    pass


def _frac(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, float):
        raise TypeError("use exact rationals, not floats")
    return Fraction(x)


@dataclass(frozen=True, order=True)
class CxRational:
    """``modulus · exp(2πi · angle)`` with ``0 <= angle < 1``."""

    angle: Fraction
    modulus: Fraction = Fraction(1)

    def __init__(self, angle=0, modulus=1):
        angle, modulus = _frac(angle), _frac(modulus)
        if modulus <= 0:
            raise BosonError("modulus must be positive")
        object.__setattr__(self, "angle", angle - math.floor(angle))
        object.__setattr__(self, "modulus", modulus)

    @classmethod
    def _raw(cls, angle: Fraction, modulus: Fraction) -> "CxRational":
        # angle already a Fraction, reduced here; modulus already positive
        self = object.__new__(cls)
        object.__setattr__(self, "angle", angle - (angle.numerator // angle.denominator))
        object.__setattr__(self, "modulus", modulus)
        return self

    @classmethod
    def one(cls) -> "CxRational":
        return cls(0, 1)

    @classmethod
    def minus_one(cls) -> "CxRational":
        return cls(Fraction(1, 2), 1)

    def __mul__(self, other: "CxRational") -> "CxRational":
        return CxRational._raw(self.angle + other.angle, self.modulus * other.modulus)

    def __truediv__(self, other: "CxRational") -> "CxRational":
        return self * other.inverse()

    def __pow__(self, n: int) -> "CxRational":
        if n == 1:
            return self
        return CxRational._raw(self.angle * n, self.modulus**n)

    def inverse(self) -> "CxRational":
        return CxRational._raw(-self.angle, 1 / self.modulus)

    def is_one(self) -> bool:
        return self.angle == 0 and self.modulus == 1

    @property
    def unit(self) -> bool:
        return self.modulus == 1

    def order(self) -> int | None:
        """Multiplicative order, or ``None`` when infinite."""
        return self.angle.denominator if self.unit else None

    def to_complex(self) -> complex:
        return float(self.modulus) * cmath.exp(2j * math.pi * float(self.angle))

    def __str__(self) -> str:
        if self.angle == 0:
            return str(self.modulus)
        if self.angle == Fraction(1, 2):
            rot = "-1"
        else:
            rot = f"exp(2πi·{self.angle})"
        return rot if self.modulus == 1 else f"{self.modulus}·{rot}"

    def to_dict(self) -> dict:
        return {"angle": str(self.angle), "modulus": str(self.modulus)}

    @classmethod
    def from_dict(cls, d: dict) -> "CxRational":
        return cls(Fraction(d["angle"]), Fraction(d.get("modulus", 1)))


def exp_i_pi(x) -> CxRational:
    """``exp(iπ x)`` for rational ``x``."""
    return CxRational(_frac(x) / 2)


@dataclass(frozen=True, order=True)
class SimpleBimoduleLabel:
    """The simple bimodule ``X(β, ξ)`` stored as ``(η, ξ)``; equal labels are isomorphic bimodules."""

    eta: CxRational
    xi: CxRational
    r: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", _frac(self.r))
        if self.r <= 0:
            raise BosonError("r must be a positive rational")
        if not self.eta.unit:
            raise BosonError("η must have unit modulus in this model")

    @classmethod
    def from_charge(cls, beta, xi: CxRational, r) -> "SimpleBimoduleLabel":
        r = _frac(r)
        return cls(CxRational(_frac(beta) / r), xi, r)

    @classmethod
    def unit_label(cls, r) -> "SimpleBimoduleLabel":
        return cls(CxRational.one(), CxRational.one(), r)

    @property
    def beta(self) -> Fraction:
        """Charge representative in ``[0, r)``."""
        return L_map(self.eta, self.r)

    def __mul__(self, other: "SimpleBimoduleLabel") -> "SimpleBimoduleLabel":
        return fuse(self, other)

    def inverse(self) -> "SimpleBimoduleLabel":
        return SimpleBimoduleLabel(self.eta.inverse(), self.xi.inverse(), self.r)

    def is_unit(self) -> bool:
        return self.eta.is_one() and self.xi.is_one()

    def __str__(self) -> str:
        return f"X({self.beta}, {self.xi})"

    def to_dict(self) -> dict:
        return {"beta": str(self.beta), "eta": self.eta.to_dict(), "xi": self.xi.to_dict(), "r": str(self.r)}


def fuse(a: SimpleBimoduleLabel, b: SimpleBimoduleLabel) -> SimpleBimoduleLabel:
    if a.r != b.r:
        raise BosonError("labels belong to different radii")
    return SimpleBimoduleLabel(a.eta * b.eta, a.xi * b.xi, a.r)


def isomorphic(a: SimpleBimoduleLabel, b: SimpleBimoduleLabel) -> bool:
    """``X(β, ξ) ≅ X(β', ξ')`` iff ``β - β' ∈ rℤ`` and ``ξ = ξ'``."""
    return a.r == b.r and a.eta == b.eta and a.xi == b.xi


def alpha(sign: int, beta, r) -> SimpleBimoduleLabel:
    """Image of the one-dimensional object of charge ``β`` under ``α^±``: ``X(β, exp(±iπ r β))``."""
    if sign not in (1, -1):
        raise BosonError("sign must be ±1")
    r = _frac(r)
    return SimpleBimoduleLabel.from_charge(beta, exp_i_pi(sign * r * _frac(beta)), r)


def alpha_plus(beta, r) -> SimpleBimoduleLabel:
    return alpha(1, beta, r)


def alpha_minus(beta, r) -> SimpleBimoduleLabel:
    return alpha(-1, beta, r)


def omega_from_t(t: int, r) -> Fraction:
    """Charge of the perturbing field for the integer ``t`` (with ``κ = iπ``)."""
    return Fraction(t) / _frac(r)


def charge_lattice(p, q, r) -> int:
    """Multiplicity of the ``(p, q)`` sector: 1 iff ``α+(p) ⊗ α-(q)`` is the unit label."""
    return int(fuse(alpha_plus(p, r), alpha_minus(q, r)).is_unit())


def charge_lattice_direct(p, q, r) -> int:
    """The same multiplicity from ``p + q ∈ rℤ`` and ``p - q ∈ (2/r)ℤ``."""
    p, q, r = _frac(p), _frac(q), _frac(r)
    return int(((p + q) / r).denominator == 1 and ((p - q) * r / 2).denominator == 1)


# ---------------------------------------------------------------------------
# cocycles


def L_map(eta: CxRational, r) -> Fraction:
    """``ℒ(η) = r θ mod r`` for ``η = exp(2πiθ)``."""
    if not eta.unit:
        raise BosonError("ℒ is only evaluated on unit-modulus η")
    r = _frac(r)
    return r * eta.angle


def sigma(eta1: CxRational, eta2: CxRational, r=1) -> int:
    """``(ℒ(η) + ℒ(η') - ℒ(ηη'))/r``, which is 0 or 1.

    Since ``ℒ = r θ`` on angles in ``[0, 1)``, ``r`` cancels and the value is
    ``floor(θ + θ')``.
    """
    if not (eta1.unit and eta2.unit):
        raise BosonError("σ is only evaluated on unit-modulus η")
    return int(eta1.angle + eta2.angle >= 1)


Group = tuple[CxRational, CxRational]  # (η, ξ)


def psi(g1: Group, g2: Group, g3: Group, r=1) -> CxRational:
    """``ψ(g1, g2, g3) = ξ1^σ(η2, η3)``."""
    return g1[1] ** sigma(g2[0], g3[0], r)


def d_sigma(a: CxRational, b: CxRational, c: CxRational, r=1) -> int:
    return sigma(b, c, r) - sigma(a * b, c, r) + sigma(a, b * c, r) - sigma(a, b, r)


def _gmul(g: Group, h: Group) -> Group:
    return (g[0] * h[0], g[1] * h[1])


def d_psi(g1: Group, g2: Group, g3: Group, g4: Group, r=1) -> CxRational:
    """Coboundary of ψ; equals 1 for a 3-cocycle."""
    num = psi(g2, g3, g4, r) * psi(g1, _gmul(g2, g3), g4, r) * psi(g1, g2, g3, r)
    den = psi(_gmul(g1, g2), g3, g4, r) * psi(g1, g2, _gmul(g3, g4), r)
    return num / den


def generate_subgroup(generators, limit: int = 64) -> list[Group]:
    """All elements of the subgroup generated by ``generators`` (must be finite)."""
    one: Group = (CxRational.one(), CxRational.one())
    for g in generators:
        if not (g[0].unit and g[1].unit):
            raise BosonError("a generator of non-unit modulus spans an infinite subgroup")
    elems = [one]
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = _gmul(x, g)
                if y not in seen:
                    seen.add(y)
                    elems.append(y)
                    nxt.append(y)
                    if len(elems) > limit:
                        raise BosonError(f"subgroup has more than {limit} elements")
        frontier = nxt
    return sorted(elems)


@dataclass
class CoboundaryResult:
    trivial: bool
    group: list[Group]
    phi: dict | None = None
    witness: dict | None = None
    pairing: Fraction | None = None

    def to_dict(self) -> dict:
        def gs(g: Group) -> str:
            return f"({g[0]}, {g[1]})"

        out = {"trivial": self.trivial, "order": len(self.group)}
        if self.phi is not None:
            out["phi"] = {f"{gs(a)},{gs(b)}": str(v) for (a, b), v in self.phi.items()}
        if self.witness is not None:
            out["witness"] = {",".join(gs(g) for g in t): c for t, c in self.witness.items()}
            out["psi_on_witness"] = str(CxRational(self.pairing))
        return out


def _coboundary_matrix(H: list[Group]) -> tuple[list[tuple[Group, Group, Group]], list[tuple[Group, Group]], list[list[int]]]:
    """Integer matrix of ``φ ↦ dφ`` on angles; rows are triples, columns pairs."""
    pairs = list(itertools.product(H, repeat=2))
    col = {p: i for i, p in enumerate(pairs)}
    triples = list(itertools.product(H, repeat=3))
    rows = []
    for a, b, c in triples:
        row = [0] * len(pairs)
        row[col[(b, c)]] += 1
        row[col[(_gmul(a, b), c)]] -= 1
        row[col[(a, _gmul(b, c))]] += 1
        row[col[(a, b)]] -= 1
        rows.append(row)
    return triples, pairs, rows


def coboundary_test(generators, r=1, limit: int = 16) -> CoboundaryResult:
    """Decide whether ψ restricted to a finite subgroup is a coboundary.

    Writing ψ and a candidate 2-cochain φ through their angles, ``ψ = dφ``
    is the linear system ``A x ≡ α (mod ℤ)``.  With the Smith form
    ``S = U A V`` it is solvable iff ``(U α)_i ∈ ℤ`` for every zero row of
    ``S``.  Such a row ``u`` satisfies ``u A = 0``, so ``u · α ∉ ℤ`` is a
    witness: the combination of ψ values it selects is 1 for every
    coboundary but not for ψ.  Cheap witnesses (cancelling rows and the
    cyclic invariant ``∏_k ψ(g, g^k, g)``) are tried before the Smith form.
    """
    H = generate_subgroup(list(generators), limit)
    for g in H:
        if not (g[0].unit and g[1].unit):
            raise BosonError("the coboundary test needs a unit-modulus subgroup")
    triples, pairs, rows = _coboundary_matrix(H)
    alpha = [psi(*t, r=r).angle for t in triples]
    if not any(alpha):
        # ψ is identically one on H, so φ = 1 works
        return CoboundaryResult(True, H, phi={p: CxRational.one() for p in pairs})

    # look for a short witness first: a zero row or two rows that cancel
    def nonint(x: Fraction) -> bool:
        return x.denominator != 1

    keyed: dict[tuple[int, ...], int] = {}
    for i, row in enumerate(rows):
        key = tuple(row)
        if not any(key):
            if nonint(alpha[i]):
                return CoboundaryResult(False, H, witness={triples[i]: 1}, pairing=alpha[i])
            continue
        neg = tuple(-x for x in key)
        if neg in keyed and nonint(alpha[i] + alpha[keyed[neg]]):
            j = keyed[neg]
            return CoboundaryResult(False, H, witness={triples[j]: 1, triples[i]: 1}, pairing=alpha[i] + alpha[j])
        if key in keyed and nonint(alpha[i] - alpha[keyed[key]]):
            j = keyed[key]
            return CoboundaryResult(False, H, witness={triples[i]: 1, triples[j]: -1}, pairing=alpha[i] - alpha[j])
        keyed.setdefault(key, i)

    # next the cyclic invariant: u = sum_k (g, g^k, g) over the powers of one element
    index = {t: i for i, t in enumerate(triples)}
    for g in H:
        powers = [(CxRational.one(), CxRational.one())]
        while True:
            nxt = _gmul(powers[-1], g)
            if nxt == powers[0]:
                break
            powers.append(nxt)
        if len(powers) < 2:
            continue
        idx = [index[(g, h, g)] for h in powers]
        total = [sum(rows[i][j] for i in idx) for j in range(len(pairs))]
        value = sum((alpha[i] for i in idx), Fraction(0))
        if not any(total) and nonint(value):
            return CoboundaryResult(False, H, witness={triples[i]: 1 for i in idx}, pairing=value)

    A = SMatrix(rows)
    S, U, V = smith_normal_decomp(A, domain=ZZ)
    m, n = S.shape
    diag = [S[i, i] if i < min(m, n) else 0 for i in range(m)]
    beta = [sum((Fraction(int(U[i, k])) * alpha[k] for k in range(m)), Fraction(0)) for i in range(m)]
    for i in range(m):
        if diag[i] == 0 and nonint(beta[i]):
            u = {triples[k]: int(U[i, k]) for k in range(m) if U[i, k] != 0}
            return CoboundaryResult(False, H, witness=u, pairing=beta[i])
    y = [beta[i] / int(diag[i]) if i < n and diag[i] != 0 else Fraction(0) for i in range(n)]
    x = [sum((Fraction(int(V[j, i])) * y[i] for i in range(n)), Fraction(0)) for j in range(n)]
    phi = {pairs[j]: CxRational(x[j]) for j in range(n)}
    # exact confirmation
    for t in triples:
        a, b, c = t
        d = phi[(b, c)] / phi[(_gmul(a, b), c)] * phi[(a, _gmul(b, c))] / phi[(a, b)]
        if d != psi(*t, r=r):
            raise AssertionError("Smith-form solution does not reproduce ψ")
    return CoboundaryResult(True, H, phi=phi)


# ---------------------------------------------------------------------------
# export


def labels_to_csv(labels) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["beta", "eta_angle", "xi_angle", "xi_modulus", "r"])
    for lab in labels:
        w.writerow([lab.beta, lab.eta.angle, lab.xi.angle, lab.xi.modulus, lab.r])
    return buf.getvalue()


def labels_to_json(labels) -> str:
    return json.dumps([lab.to_dict() for lab in labels], indent=2, sort_keys=True)


def cocycle_table(H: list[Group], r=1) -> list[dict]:
    out = []
    for g1, g2, g3 in itertools.product(H, repeat=3):
        out.append(
            {
                "g1": [str(g1[0]), str(g1[1])],
                "g2": [str(g2[0]), str(g2[1])],
                "g3": [str(g3[0]), str(g3[1])],
                "sigma23": sigma(g2[0], g3[0], r),
                "psi": str(psi(g1, g2, g3, r)),
            }
        )
    return out


def cocycle_table_csv(H: list[Group], r=1) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eta1", "xi1", "eta2", "xi2", "eta3", "xi3", "sigma23", "psi"])
    for row in cocycle_table(H, r):
        w.writerow(row["g1"] + row["g2"] + row["g3"] + [row["sigma23"], row["psi"]])
    return buf.getvalue()
