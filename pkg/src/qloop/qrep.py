"""Finite-dimensional representations of quantum sl2 and its loop algebra.

Three flavours are modelled:

``Uq(sl2)``
    generators ``e+``, ``e-`` and a diagonal ``k``;
``Uq(Lsl2)``
    generators ``e0±``, ``e1±`` with ``k0`` diagonal and ``k1 = k0^-1``;
``Uhbar(Lsl2)``
    the same generators, but the Cartan part is recorded as ``h0``-weights.
    A weight ``(s, m)`` means ``h0`` acts by ``s + 2πi m/ħ``, so that
    ``exp(ħ h0) = q^s`` and ``m`` counts windings that no finite q-power sees.

In ``k``-form the weight list holds the ``k`` (or ``k0``) eigenvalues.
Representations of the Borel half carry only the ``e+`` generators, and a
truncated representation additionally records a floor: all ``h0``-weights
``s >= floor`` are complete, lower ones are cut off.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import Matrix
from .scalar import QScalar, ScalarContext

SL2 = "Uq(sl2)"
LOOP = "Uq(Lsl2)"
HBAR = "Uhbar(Lsl2)"
FLAVORS = (SL2, LOOP, HBAR)

SL2_GENS = ("e+", "e-")
LOOP_GENS = ("e0+", "e0-", "e1+", "e1-")

# shift of the h0-weight (or k0-exponent) produced by each generator
LOOP_SHIFT = {"e0+": 2, "e0-": -2, "e1+": -2, "e1-": 2}
SL2_SHIFT = {"e+": 2, "e-": -2}


class RepError(ValueError):
    pass


Weight = object  # QScalar in k-form, (Fraction, int) in hbar-form


@dataclass
class QGroupRep:
    flavor: str
    ctx: ScalarContext
    gens: dict[str, Matrix]
    weights: list
    borel: bool = False
    floor: Fraction | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.flavor not in FLAVORS:
            raise RepError(f"unknown flavour {self.flavor!r}")
        for name, m in self.gens.items():
            if m.shape != (self.dim, self.dim):
                raise RepError(f"generator {name} has shape {m.shape}, expected {(self.dim, self.dim)}")
        expected = self.generator_names()
        if set(self.gens) != set(expected):
            raise RepError(f"{self.flavor} representation needs generators {expected}, got {sorted(self.gens)}")

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def truncated(self) -> bool:
        return self.floor is not None

    @property
    def is_hbar(self) -> bool:
        return self.flavor == HBAR

    @property
    def is_loop(self) -> bool:
        return self.flavor in (LOOP, HBAR)

    def generator_names(self) -> tuple[str, ...]:
        names = LOOP_GENS if self.is_loop else SL2_GENS
        if self.borel:
            names = tuple(n for n in names if n.endswith("+"))
        return names

    def shifts(self) -> dict[str, int]:
        return LOOP_SHIFT if self.is_loop else SL2_SHIFT

    # Cartan part

    def k_values(self, node: int = 0) -> list[QScalar]:
        """Eigenvalues of ``k`` (sl2) or ``k_node``; in hbar-form ``exp(ħ h_node)``."""
        if self.is_hbar:
            vals = [self.ctx.q_power(s) for s, _ in self.weights]
        else:
            vals = list(self.weights)
        if node == 1:
            vals = [v.inverse() for v in vals]
        return vals

    def K(self, node: int = 0, power: int = 1) -> Matrix:
        return Matrix.diag(self.ctx, [v**power for v in self.k_values(node)])

    def s_values(self) -> list[Fraction]:
        """The exponents ``s`` with ``k0 = q^s`` (needs q-power weights in k-form)."""
        if self.is_hbar:
            return [s for s, _ in self.weights]
        out = []
        for w in self.weights:
            e = w.as_q_power()
            if e is None:
                raise RepError(f"weight {w} is not a power of q")
            out.append(e)
        return out

    def weight_keys(self) -> list:
        if self.is_hbar:
            return [(Fraction(s), int(m)) for s, m in self.weights]
        return list(self.weights)

    def describe(self) -> str:
        lines = [f"{self.label or 'representation'}: {self.flavor}, dim {self.dim}, mode {self.ctx.mode_string}, D={self.ctx.D}"]
        if self.borel:
            lines.append("  Borel half only")
        if self.truncated:
            lines.append(f"  truncated below h0-weight {self.floor}")
        wl = [f"({s}, {m})" for s, m in self.weights] if self.is_hbar else [str(w) for w in self.weights]
        lines.append(("  h0-weights: " if self.is_hbar else "  k-eigenvalues: ") + ", ".join(wl))
        for name in self.generator_names():
            lines.append(f"  {name}:")
            for row in self.gens[name].rows:
                lines.append("    [" + ", ".join(str(a) for a in row) + "]")
        return "\n".join(lines)

    # serialization

    def to_dict(self) -> dict:
        weights = [[str(s), int(m)] for s, m in self.weights] if self.is_hbar else [str(w) for w in self.weights]
        return {
            "flavor": self.flavor,
            "mode": self.ctx.mode_string,
            "D": self.ctx.D,
            "dim": self.dim,
            "borel": self.borel,
            "floor": None if self.floor is None else str(self.floor),
            "label": self.label,
            "weights": weights,
            "matrices": {name: self.gens[name].to_strings() for name in self.generator_names()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, payload: dict) -> "QGroupRep":
        ctx = context_from_mode(payload["mode"], payload.get("D", 1))
        flavor = payload["flavor"]
        if flavor == HBAR:
            weights = [(Fraction(s), int(m)) for s, m in payload["weights"]]
        else:
            weights = [ctx.parse(w) for w in payload["weights"]]
        gens = {name: Matrix.from_strings(ctx, rows) if rows else Matrix.zeros(ctx, 0, 0) for name, rows in payload["matrices"].items()}
        floor = payload.get("floor")
        rep = cls(flavor, ctx, gens, weights, bool(payload.get("borel", False)), None if floor is None else Fraction(floor), payload.get("label", ""))
        if rep.dim != payload["dim"]:
            raise RepError("dimension does not match the weight list")
        return rep

    @classmethod
    def from_json(cls, text: str) -> "QGroupRep":
        return cls.from_dict(json.loads(text))


def context_from_mode(mode: str, D: int = 1) -> ScalarContext:
    if mode == "generic":
        return ScalarContext.generic(D)
    if mode.startswith("root:"):
        return ScalarContext.root_of_unity(int(mode.split(":", 1)[1]), D)
    raise RepError(f"unknown scalar mode {mode!r}")


def _scalar(ctx: ScalarContext, x) -> QScalar:
    return ctx(x)


# ---------------------------------------------------------------------------
# constructors


def make_Vn(n: int, ctx: ScalarContext) -> QGroupRep:
    """The (n+1)-dimensional type-1 module with ``k = diag(q^n, ..., q^-n)``."""
    if not isinstance(n, int) or n < 0:
        raise RepError("highest weight must be a non-negative integer")
    d = n + 1
    ep = Matrix.zeros(ctx, d, d)
    em = Matrix.zeros(ctx, d, d)
    for j in range(1, d):
        ep.rows[j - 1][j] = ctx.q_number(n - j + 1)
        em.rows[j][j - 1] = ctx.q_number(j)
    weights = [ctx.q_power(n - 2 * j) for j in range(d)]
    return QGroupRep(SL2, ctx, {"e+": ep, "e-": em}, weights, label=f"V_{n}")


def order_of_q_squared(ctx: ScalarContext) -> int:
    if ctx.N is None:
        raise RepError("cyclic modules need a root-of-unity context")
    return ctx.N // math.gcd(ctx.N, 2)


def make_cyclic(a, b, lam, ctx: ScalarContext) -> QGroupRep:
    """Cyclic module of dimension ``N'`` (the order of ``q^2``).

    ``k v_j = lam q^(-2j) v_j``; ``e-`` lowers ``v_j -> v_{j+1}`` and wraps
    with ``e- v_{N'-1} = a v_0``; ``e+ v_0 = b v_{N'-1}`` and the remaining
    ``e+`` entries are solved from ``[e+, e-] = (k - k^-1)/(q - q^-1)``.
    """
    Np = order_of_q_squared(ctx)
    if Np < 2:
        raise RepError("q^2 = 1 leaves no room for a cyclic module")
    a, b, lam = ctx(a), ctx(b), ctx(lam)
    if not lam:
        raise RepError("the k-eigenvalue parameter must be invertible")
    q = ctx.q
    qq = q - q.inverse()
    kvals = [lam * ctx.q_power(-2 * j) for j in range(Np)]
    kappa = [(kv - kv.inverse()) / qq for kv in kvals]
    if sum(kappa, ctx.zero):
        raise RepError("inconsistent cyclic parameters: the commutator constraint has no solution")
    c = [a * b]
    for j in range(Np - 1):
        c.append(c[-1] + kappa[j])
    ep = Matrix.zeros(ctx, Np, Np)
    em = Matrix.zeros(ctx, Np, Np)
    for j in range(Np - 1):
        em.rows[j + 1][j] = ctx.one
    em.rows[0][Np - 1] = a
    for j in range(1, Np):
        ep.rows[j - 1][j] = c[j]
    ep.rows[Np - 1][0] = b
    return QGroupRep(SL2, ctx, {"e+": ep, "e-": em}, kvals, label=f"cyclic(a={a}, b={b}, lambda={lam})")


def evaluation_pullback(V: QGroupRep, z, form: str = "k") -> QGroupRep:
    """Pull an sl2-module back along evaluation at ``z``.

    ``e0± = q^∓1 z^±1 e∓``, ``e1± = e±``, ``k0 = k^-1``.  With ``form='hbar'``
    the Cartan part is recorded as ``h0 = -h`` and needs q-power weights.
    """
    if V.flavor != SL2:
        raise RepError("evaluation pullback needs a Uq(sl2) representation")
    ctx = V.ctx
    z = ctx(z)
    if not z:
        raise RepError("spectral parameter must be nonzero")
    q = ctx.q
    ep, em = V.gens["e+"], V.gens["e-"]
    gens = {
        "e0+": em.scale(q.inverse() * z),
        "e0-": ep.scale(q * z.inverse()),
        "e1+": ep,
        "e1-": em,
    }
    label = f"{V.label}({z})" if V.label else ""
    if form == "k":
        return QGroupRep(LOOP, ctx, gens, [w.inverse() for w in V.weights], label=label)
    if form == "hbar":
        weights = []
        for w in V.weights:
            e = w.as_q_power()
            if e is None or ctx.is_root:
                raise RepError("hbar-form evaluation needs generic mode and q-power weights")
            weights.append((-e, 0))
        return QGroupRep(HBAR, ctx, gens, weights, label=label)
    raise RepError(f"unknown form {form!r}")


def make_Xm(m: int, ctx: ScalarContext) -> QGroupRep:
    """One-dimensional module where ``h0`` acts by ``2πi m/ħ`` and all ``e`` vanish."""
    z = Matrix.zeros(ctx, 1, 1)
    return QGroupRep(HBAR, ctx, {g: z for g in LOOP_GENS}, [(Fraction(0), int(m))], label=f"X_{m}")


def make_q_oscillator(m, z, N: int, ctx: ScalarContext) -> QGroupRep:
    """Truncated prefundamental module of the Borel half.

    Basis ``v_0, v_-1, ..., v_-(N-1)`` with ``e1+ v_j = v_{j-1}``,
    ``e0+ v_j = z (1 - q^(2j))/(q - q^-1)^2 v_{j+1}`` and ``h0``-weight
    ``2j + m``.  The action of ``e1+`` on the last vector is cut to zero.
    """
    if N < 1:
        raise RepError("truncation depth must be positive")
    z = ctx(z)
    m = Fraction(m)
    q = ctx.q
    denom = (q - q.inverse()) ** 2
    e1 = Matrix.zeros(ctx, N, N)
    e0 = Matrix.zeros(ctx, N, N)
    for i in range(N - 1):
        e1.rows[i + 1][i] = ctx.one
    for i in range(1, N):
        # v_j with j = -i goes to v_{j+1}
        e0.rows[i - 1][i] = z * (1 - ctx.q_power(-2 * i)) / denom
    weights = [(m - 2 * i, 0) for i in range(N)]
    return QGroupRep(HBAR, ctx, {"e0+": e0, "e1+": e1}, weights, borel=True, floor=m - 2 * (N - 1), label=f"Q_{m}({z})")


# ---------------------------------------------------------------------------
# operations


def _max_s(V: QGroupRep) -> Fraction:
    return max(V.s_values())


def tensor(V: QGroupRep, W: QGroupRep) -> QGroupRep:
    """Tensor product through ``Δ(e+) = e+ ⊗ K + 1 ⊗ e+`` and ``Δ(e-) = e- ⊗ 1 + K^-1 ⊗ e-``."""
    if V.ctx != W.ctx:
        raise RepError("representations live over different scalar contexts")
    if V.is_loop != W.is_loop:
        raise RepError("cannot tensor a loop module with an sl2 module")
    if V.is_hbar != W.is_hbar:
        raise RepError("cannot tensor hbar-form with k-form modules")
    ctx = V.ctx
    borel = V.borel or W.borel
    flavor = V.flavor
    IV, IW = Matrix.identity(ctx, V.dim), Matrix.identity(ctx, W.dim)
    gens = {}
    names = LOOP_GENS if V.is_loop else SL2_GENS
    for name in names:
        if borel and name.endswith("-"):
            continue
        node = 1 if name.startswith("e1") else 0
        if name.endswith("+"):
            gens[name] = V.gens[name].kron(W.K(node)) + IV.kron(W.gens[name])
        else:
            gens[name] = V.gens[name].kron(IW) + V.K(node, -1).kron(W.gens[name])
    if V.is_hbar:
        weights = [(s1 + s2, m1 + m2) for s1, m1 in V.weights for s2, m2 in W.weights]
    else:
        weights = [w1 * w2 for w1 in V.weights for w2 in W.weights]
    floor = None
    if V.truncated or W.truncated:
        cands = []
        if V.truncated:
            cands.append(V.floor + _max_s(W))
        if W.truncated:
            cands.append(W.floor + _max_s(V))
        floor = max(cands)
    label = f"{V.label}⊗{W.label}" if V.label and W.label else ""
    return QGroupRep(flavor, ctx, gens, weights, borel=borel, floor=floor, label=label)


def dual(V: QGroupRep) -> QGroupRep:
    """Left dual via the antipode ``S(e+) = -e+ K^-1``, ``S(e-) = -K e-``, ``S(K) = K^-1``."""
    if V.truncated:
        raise RepError("the dual of a truncated module is not available")
    if V.borel:
        raise RepError("duals are only implemented for full modules")
    ctx = V.ctx
    gens = {}
    for name in V.generator_names():
        node = 1 if name.startswith("e1") else 0
        if name.endswith("+"):
            s = -(V.gens[name] @ V.K(node, -1))
        else:
            s = -(V.K(node) @ V.gens[name])
        gens[name] = s.transpose()
    if V.is_hbar:
        weights = [(-s, -m) for s, m in V.weights]
    else:
        weights = [w.inverse() for w in V.weights]
    return QGroupRep(V.flavor, ctx, gens, weights, label=f"{V.label}*" if V.label else "")


def restrict_to_sl2(V: QGroupRep, node: int = 1) -> QGroupRep:
    """The Uq(sl2)-module obtained from ``e±_node`` and ``k_node``."""
    if not V.is_loop or V.borel:
        raise RepError("restriction needs a full loop module")
    gens = {"e+": V.gens[f"e{node}+"], "e-": V.gens[f"e{node}-"]}
    return QGroupRep(SL2, V.ctx, gens, V.k_values(node), label=V.label)


def reduce(V: QGroupRep) -> QGroupRep:
    """hbar-form to k-form: ``k_j -> exp(ħ h_j)``; windings are forgotten."""
    if V.flavor != HBAR:
        raise RepError("reduce expects an hbar-form loop module")
    return QGroupRep(LOOP, V.ctx, dict(V.gens), V.k_values(0), borel=V.borel, floor=V.floor, label=V.label)


def section(V: QGroupRep) -> QGroupRep:
    """k-form to hbar-form, choosing ``h0 = s`` for a ``k0``-eigenvalue ``q^s`` and no winding."""
    if V.flavor != LOOP:
        raise RepError("section expects a k-form loop module")
    if V.ctx.is_root:
        raise RepError("section needs generic mode")
    weights = [(s, 0) for s in V.s_values()]
    return QGroupRep(HBAR, V.ctx, dict(V.gens), weights, borel=V.borel, floor=V.floor, label=V.label)


def direct_sum(V: QGroupRep, W: QGroupRep) -> QGroupRep:
    if V.flavor != W.flavor or V.borel != W.borel:
        raise RepError("direct sum needs matching flavours")
    ctx = V.ctx
    gens = {}
    for name in V.generator_names():
        m = Matrix.zeros(ctx, V.dim + W.dim, V.dim + W.dim)
        for i, r in enumerate(V.gens[name].rows):
            m.rows[i][: V.dim] = r
        for i, r in enumerate(W.gens[name].rows):
            m.rows[V.dim + i][V.dim :] = r
        gens[name] = m
    return QGroupRep(V.flavor, ctx, gens, list(V.weights) + list(W.weights), borel=V.borel)


# ---------------------------------------------------------------------------
# relations


@dataclass
class RelationCheck:
    passed: bool
    checked: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "failures": self.failures, "skipped": self.skipped}


def _weight_ok(V: QGroupRep, name: str, r: int, c: int) -> bool:
    shift = V.shifts()[name]
    if V.is_hbar:
        (sr, mr), (sc, mc) = V.weights[r], V.weights[c]
        return sr == sc + shift and mr == mc
    ratio = V.weights[r] / V.weights[c]
    # k-form stores k0 (or k); e1± shift k0 by q^(∓2)
    return ratio == V.ctx.q_power(shift)


def _word_stays_above(V: QGroupRep, word: Sequence[str], s: Fraction) -> bool:
    """Whether applying ``word`` right to left from weight ``s`` never drops below the floor."""
    if V.floor is None:
        return True
    shifts = V.shifts()
    for name in reversed(word):
        s += shifts[name]
        if s < V.floor:
            return False
    return True


def _relation(V: QGroupRep, terms: list[tuple[QScalar, tuple[str, ...]]]) -> Matrix:
    ctx = V.ctx
    out = Matrix.zeros(ctx, V.dim, V.dim)
    for c, word in terms:
        m = Matrix.identity(ctx, V.dim)
        for name in word:
            m = m @ V.gens[name]
        out = out + m.scale(c)
    return out


def _check_matrix(V: QGroupRep, label: str, mat: Matrix, words: list[tuple[str, ...]], res: RelationCheck) -> None:
    res.checked.append(label)
    s_vals = V.s_values() if V.truncated else None
    for c in range(V.dim):
        if s_vals is not None and not all(_word_stays_above(V, w, s_vals[c]) for w in words):
            res.skipped.append(f"{label} on basis vector {c}")
            continue
        for r in range(V.dim):
            if mat.rows[r][c]:
                res.failures.append(f"{label}: entry ({r},{c}) = {mat.rows[r][c]}")
                res.passed = False


def check_relations(V: QGroupRep) -> RelationCheck:
    """Check the defining relations of the flavour on ``V``.

    Weight relations are checked entrywise.  The ``[e+, e-]`` relations are
    skipped for Borel modules, and for truncated modules every relation
    instance whose path would leave the complete region is skipped and
    listed.
    """
    ctx = V.ctx
    res = RelationCheck(True)
    # weight relations
    for name in V.generator_names():
        res.checked.append(f"weight shift of {name}")
        m = V.gens[name]
        for r in range(V.dim):
            for c in range(V.dim):
                if m.rows[r][c] and not _weight_ok(V, name, r, c):
                    res.failures.append(f"weight shift of {name}: entry ({r},{c})")
                    res.passed = False
    q = ctx.q
    qq = q - q.inverse()
    one = ctx.one
    if not V.is_loop:
        if not V.borel:
            lhs = V.gens["e+"] @ V.gens["e-"] - V.gens["e-"] @ V.gens["e+"]
            rhs = (V.K(0) - V.K(0, -1)).scale(qq.inverse())
            _check_matrix(V, "[e+, e-]", lhs - rhs, [("e+", "e-"), ("e-", "e+")], res)
        return res
    if not V.borel:
        for i in (0, 1):
            for j in (0, 1):
                a, b = f"e{i}+", f"e{j}-"
                lhs = V.gens[a] @ V.gens[b] - V.gens[b] @ V.gens[a]
                if i == j:
                    lhs = lhs - (V.K(i) - V.K(i, -1)).scale(qq.inverse())
                _check_matrix(V, f"[{a}, {b}]", lhs, [(a, b), (b, a)], res)
    three = ctx.q_number(3)
    signs = ["+"] if V.borel else ["+", "-"]
    for sg in signs:
        for i, j in ((0, 1), (1, 0)):
            a, b = f"e{i}{sg}", f"e{j}{sg}"
            terms = [
                (one, (a, a, a, b)),
                (-three, (a, a, b, a)),
                (three, (a, b, a, a)),
                (-one, (b, a, a, a)),
            ]
            _check_matrix(V, f"Serre({a}, {b})", _relation(V, terms), [w for _, w in terms], res)
    return res


# ---------------------------------------------------------------------------
# central characters at roots of unity


@dataclass(frozen=True)
class CentralCharacter:
    x: QScalar
    y: QScalar
    z: QScalar
    c: QScalar

    def as_tuple(self) -> tuple[QScalar, QScalar, QScalar, QScalar]:
        return (self.x, self.y, self.z, self.c)

    def to_dict(self) -> dict:
        return {"x": str(self.x), "y": str(self.y), "z": str(self.z), "c": str(self.c)}


def central_elements(V: QGroupRep) -> dict[str, Matrix]:
    """Matrices of ``x = ((q-q^-1)e-)^N'``, ``y = ((q-q^-1)e+)^N'``, ``z = k^-N'`` and the Casimir."""
    if V.flavor != SL2 or V.borel:
        raise RepError("central characters are defined for full Uq(sl2) modules")
    ctx = V.ctx
    Np = order_of_q_squared(ctx)
    q = ctx.q
    qq = q - q.inverse()
    ep, em, K = V.gens["e+"], V.gens["e-"], V.K(0)
    casimir = K.inverse().scale(q) + K.scale(q.inverse()) + (ep @ em).scale(qq * qq)
    mats = {
        "x": em.scale(qq) ** Np,
        "y": ep.scale(qq) ** Np,
        "z": K ** (-Np),
        "c": casimir,
    }
    return mats


def central_character(V: QGroupRep) -> CentralCharacter:
    """Scalars by which the central elements act on an irreducible module."""
    vals = {}
    for key, m in central_elements(V).items():
        v = m.is_scalar()
        if v is None:
            raise RepError(f"central element {key} does not act by a scalar")
        vals[key] = v
    return CentralCharacter(**vals)


def dual_central_character(p: CentralCharacter) -> CentralCharacter:
    """Predicted central character of the dual: ``(-x/z, -y z, 1/z, c)``."""
    return CentralCharacter(-p.x / p.z, -p.y * p.z, p.z.inverse(), p.c)


def representations_equal(V: QGroupRep, W: QGroupRep) -> bool:
    if (V.flavor, V.ctx, V.borel, V.floor) != (W.flavor, W.ctx, W.borel, W.floor):
        return False
    if V.weight_keys() != W.weight_keys():
        return False
    return all(V.gens[n] == W.gens[n] for n in V.generator_names())
