"""Modules over the four defect generators and their commutation condition.

A commutation module carries four operators on a graded space:

* ``f+`` and ``f-`` come from the chiral letter object (degrees +1, -1),
* ``fb+`` and ``fb-`` come from the antichiral one (degrees +1, -1),

together with the pairing constants ``zeta`` (pairing ``+`` with ``-``) and
``xi`` (pairing ``-`` with ``+``).  Two settings are supported.

Uncompactified
    the grading is a rational degree ``a`` per basis vector.  A letter of
    degree ``d`` moves past a vector of degree ``a`` with ``Q^(a d)``,
    ``Q = q^-2``, and past another letter of degree ``d'`` with ``Q^(d d')``.
Compactified(t)
    the grading is a diagonal ``k``; the letter scalars become ``k^(t d/2)``
    and ``q^(t d d')``.  ``t`` must be even.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .braidcat import BraidingContext, GradedObject, half_braiding
from .linalg import Matrix
from .qrep import HBAR, LOOP, QGroupRep
from .scalar import QScalar, ScalarContext

PLUS_GENS = ("f+", "f-")
MINUS_GENS = ("fb+", "fb-")
COMM_GENS = PLUS_GENS + MINUS_GENS
DEGREE = {"f+": 1, "f-": -1, "fb+": 1, "fb-": -1}


class CommError(ValueError):
    pass


@dataclass(frozen=True)
class Setting:
    kind: str = "uncompactified"
    t: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("uncompactified", "compactified"):
            raise CommError(f"unknown setting {self.kind!r}")
        if self.kind == "compactified":
            if not isinstance(self.t, int) or self.t == 0 or self.t % 2:
                raise CommError("the compactified setting needs a nonzero even integer t")

    @property
    def compact(self) -> bool:
        return self.kind == "compactified"

    def describe(self) -> str:
        return "uncompactified" if not self.compact else f"compactified(t={self.t})"


UNCOMPACTIFIED = Setting()


def compactified(t: int) -> Setting:
    return Setting("compactified", t)


@dataclass
class CommModule:
    ctx: ScalarContext
    F: dict[str, Matrix]
    grading: list
    zeta: QScalar
    xi: QScalar
    setting: Setting = UNCOMPACTIFIED
    windings: list[int] | None = None
    label: str = ""
    floor: Fraction | None = field(default=None, init=False)

    def __post_init__(self) -> None:
        if set(self.F) != set(COMM_GENS):
            raise CommError(f"need operators {COMM_GENS}")
        for name, m in self.F.items():
            if m.shape != (self.dim, self.dim):
                raise CommError(f"operator {name} has the wrong shape")
        if not self.setting.compact:
            self.grading = [Fraction(a) for a in self.grading]

    @property
    def dim(self) -> int:
        return len(self.grading)

    # module protocol used by intertwine
    @property
    def gens(self) -> dict[str, Matrix]:
        return self.F

    def generator_names(self) -> tuple[str, ...]:
        return COMM_GENS

    def weight_keys(self) -> list:
        return list(self.grading)

    # braiding scalars

    def letter_past(self, d: int) -> Matrix:
        """Diagonal scalar picked up when a letter of degree ``d`` moves past each basis vector."""
        ctx = self.ctx
        if self.setting.compact:
            e = self.setting.t * d // 2
            return Matrix.diag(ctx, [k**e for k in self.grading])
        return Matrix.diag(ctx, [ctx.q_power(-2 * a * d) for a in self.grading])

    def letter_letter(self, d1: int, d2: int) -> QScalar:
        if self.setting.compact:
            return self.ctx.q_power(self.setting.t * d1 * d2)
        return self.ctx.q_power(-2 * d1 * d2)

    def pairing(self, x: str, y: str) -> QScalar:
        """Bulk pairing between an ``f`` letter and an ``fb`` letter."""
        dx, dy = DEGREE[x], DEGREE[y]
        if dx == 1 and dy == -1:
            return self.zeta
        if dx == -1 and dy == 1:
            return self.xi
        return self.ctx.zero

    def describe(self) -> str:
        lines = [f"{self.label or 'commutation module'}: dim {self.dim}, {self.setting.describe()}, zeta={self.zeta}, xi={self.xi}"]
        lines.append("  grading: " + ", ".join(str(a) for a in self.grading))
        for name in COMM_GENS:
            lines.append(f"  {name}:")
            for row in self.F[name].rows:
                lines.append("    [" + ", ".join(str(a) for a in row) + "]")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "setting": self.setting.describe(),
            "zeta": str(self.zeta),
            "xi": str(self.xi),
            "grading": [str(a) for a in self.grading],
            "operators": {n: self.F[n].to_strings() for n in COMM_GENS},
        }


# ---------------------------------------------------------------------------
# pullbacks from the loop algebra


def _prefactor(ctx: ScalarContext, c: QScalar) -> QScalar:
    q = ctx.q
    return c * (q - q.inverse()) / (q * q)


def pullback_uncompactified(V: QGroupRep, zeta, xi) -> CommModule:
    """Commutation module from an hbar-form loop module.

    ``f+ -> e0+ exp(-ħ h0)``, ``f- -> xi (q - q^-1)/q^2 · e1+ exp(-ħ h1)``,
    ``fb+ -> e1-``, ``fb- -> zeta (q - q^-1)/q^2 · e0-``, with grading
    ``a = s/2`` for an ``h0``-weight ``s``.
    """
    if V.flavor != HBAR:
        raise CommError("the uncompactified pullback expects an hbar-form loop module")
    if V.borel:
        raise CommError("a Borel-only module makes the commutation condition vacuous")
    ctx = V.ctx
    zeta, xi = ctx(zeta), ctx(xi)
    F = {
        "f+": V.gens["e0+"] @ V.K(0, -1),
        "f-": (V.gens["e1+"] @ V.K(1, -1)).scale(_prefactor(ctx, xi)),
        "fb+": V.gens["e1-"],
        "fb-": V.gens["e0-"].scale(_prefactor(ctx, zeta)),
    }
    grading = [Fraction(s) / 2 for s, _ in V.weights]
    windings = [m for _, m in V.weights]
    return CommModule(ctx, F, grading, zeta, xi, UNCOMPACTIFIED, windings, label=V.label)


def pullback_compactified(V: QGroupRep, zeta, xi, t: int = -2) -> CommModule:
    """Commutation module from a k-form loop module, defined for ``t = -2``.

    ``k -> k0``, ``f+ -> e0+ k0^-1``, ``f- -> xi (q - q^-1)/q^2 · e1+ k1^-1``,
    ``fb+ -> e1-``, ``fb- -> zeta (q - q^-1)/q^2 · e0-``.
    """
    if t != -2:
        raise CommError("the compactified pullback is only defined for t = -2")
    if V.flavor != LOOP:
        raise CommError("the compactified pullback expects a k-form loop module")
    if V.borel:
        raise CommError("a Borel-only module makes the commutation condition vacuous")
    ctx = V.ctx
    zeta, xi = ctx(zeta), ctx(xi)
    F = {
        "f+": V.gens["e0+"] @ V.K(0, -1),
        "f-": (V.gens["e1+"] @ V.K(1, -1)).scale(_prefactor(ctx, xi)),
        "fb+": V.gens["e1-"],
        "fb-": V.gens["e0-"].scale(_prefactor(ctx, zeta)),
    }
    return CommModule(ctx, F, V.k_values(0), zeta, xi, compactified(t), label=V.label)


# ---------------------------------------------------------------------------
# checks


@dataclass
class CommReport:
    passed: bool
    identities: dict[str, bool]
    failures: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "identities": self.identities, "failures": self.failures}


def _weight_ok(M: CommModule, name: str) -> bool:
    d = DEGREE[name]
    m = M.F[name]
    step = M.ctx.q_power(2 * d) if M.setting.compact else None
    for r in range(M.dim):
        for c in range(M.dim):
            if not m.rows[r][c]:
                continue
            if M.setting.compact:
                if M.grading[r] != step * M.grading[c]:
                    return False
            elif M.grading[r] != M.grading[c] + d:
                return False
    return True


def check_commutation(M: CommModule) -> CommReport:
    """Check the commutation condition on the four generators.

    For ``x`` in ``f±`` and ``y`` in ``fb±`` the normative form is
    ``F^x F^y - c(x, y) F^y F^x = b(x, y) (id - P(d_x) P(-d_y))`` where
    ``c`` is the letter-letter braiding and ``P(d)`` the letter-past-vector
    scalar.  The equivalent commutator form
    ``[F^x P(-d_x), F^y] = b(x, y) c(+, +) (P(-d_x) - P(d_x))`` is checked
    as well, together with the degree shifts of all four operators.
    """
    ctx = M.ctx
    I = Matrix.identity(ctx, M.dim)
    out: dict[str, bool] = {}
    failures: list[str] = []
    for name in COMM_GENS:
        ok = _weight_ok(M, name)
        out[f"degree shift of {name}"] = ok
        if not ok:
            failures.append(f"{name} does not shift the grading by {DEGREE[name]:+d}")
    for x in PLUS_GENS:
        for y in MINUS_GENS:
            dx, dy = DEGREE[x], DEGREE[y]
            b = M.pairing(x, y)
            Fx, Fy = M.F[x], M.F[y]
            lhs = Fx @ Fy - (Fy @ Fx).scale(M.letter_letter(dx, dy))
            rhs = (I - M.letter_past(dx) @ M.letter_past(-dy)).scale(b)
            key = f"{x}·{y} - c·{y}·{x}"
            out[key] = lhs == rhs
            if not out[key]:
                failures.append(f"normative identity for ({x}, {y}) fails")
            A = Fx @ M.letter_past(-dx)
            lhs2 = A @ Fy - Fy @ A
            rhs2 = (M.letter_past(-dx) - M.letter_past(dx)).scale(b * M.letter_letter(1, 1))
            key2 = f"[{x}·P, {y}]"
            out[key2] = lhs2 == rhs2
            if not out[key2]:
                failures.append(f"commutator identity for ({x}, {y}) fails")
    return CommReport(all(out.values()), out, failures)


def check_yd_generators(M: CommModule) -> dict:
    """Generator-level Yetter-Drinfeld identity, compared with the commutation check.

    With the left action ``L^x = F^x`` and the right action
    ``R^y = F^y P(d_y)`` the identity reads
    ``[L^x, R^y] = b(x, y) (P(d_y) - P(d_x))``.  It is algebraically
    equivalent to the normative commutation identity for the same pair, so
    both must pass or fail together.
    """
    cc = check_commutation(M)
    yd: dict[str, bool] = {}
    agree = True
    for x in PLUS_GENS:
        for y in MINUS_GENS:
            dx, dy = DEGREE[x], DEGREE[y]
            L = M.F[x]
            R = M.F[y] @ M.letter_past(dy)
            lhs = L @ R - R @ L
            rhs = (M.letter_past(dy) - M.letter_past(dx)).scale(M.pairing(x, y))
            ok = lhs == rhs
            yd[f"({x}, {y})"] = ok
            agree = agree and ok == cc.identities[f"{x}·{y} - c·{y}·{x}"]
    return {"passed": all(yd.values()), "identities": yd, "agrees_with_commutation": agree}


# ---------------------------------------------------------------------------
# tensor products


def _check_compatible(M: CommModule, N: CommModule) -> None:
    if M.ctx != N.ctx or M.setting != N.setting:
        raise CommError("modules live in different settings")
    if M.zeta != N.zeta or M.xi != N.xi:
        raise CommError("modules use different pairing constants")


def _tensor_grading(M: CommModule, N: CommModule) -> list:
    if M.setting.compact:
        return [a * b for a in M.grading for b in N.grading]
    return [a + b for a in M.grading for b in N.grading]


def tensor_comm(M: CommModule, N: CommModule) -> CommModule:
    """Tensor product through ``Δ(f±) = f± ⊗ 1 + P(±1) ⊗ f±`` and ``Δ(fb±) = fb± ⊗ 1 + P(∓1) ⊗ fb±``."""
    _check_compatible(M, N)
    ctx = M.ctx
    IN = Matrix.identity(ctx, N.dim)
    F = {}
    for name in COMM_GENS:
        d = DEGREE[name] if name in PLUS_GENS else -DEGREE[name]
        F[name] = M.F[name].kron(IN) + M.letter_past(d).kron(N.F[name])
    windings = None
    if M.windings is not None and N.windings is not None:
        windings = [a + b for a in M.windings for b in N.windings]
    label = f"{M.label}⊗{N.label}" if M.label and N.label else ""
    return CommModule(ctx, F, _tensor_grading(M, N), M.zeta, M.xi, M.setting, windings, label)


def _action_matrix(M: CommModule) -> Matrix:
    """The action ``m: F ⊗ X -> X`` with letters ordered ``f+, f-, fb+, fb-``."""
    blocks = [M.F[name] for name in COMM_GENS]
    rows = [sum((b.rows[i] for b in blocks), []) for i in range(M.dim)]
    return Matrix(M.ctx, rows)


def _half_braiding_F(M: CommModule) -> Matrix:
    """``φ_{F,X}: F ⊗ X -> X ⊗ F``, built from the braiding on each letter."""
    ctx = M.ctx
    n = M.dim
    out = Matrix.zeros(ctx, 4 * n, 4 * n)
    if not M.setting.compact:
        bctx = BraidingContext(ctx)
        X = GradedObject(M.grading)
        for li, name in enumerate(COMM_GENS):
            letter = GradedObject([DEGREE[name]])
            sign = "+" if name in PLUS_GENS else "-"
            hb = half_braiding(sign, letter, X, bctx)  # (1·n) x (1·n), basis x ⊗ letter
            for xr in range(n):
                for xc in range(n):
                    if hb.rows[xr][xc]:
                        out.rows[xr * 4 + li][li * n + xc] = hb.rows[xr][xc]
        return out
    for li, name in enumerate(COMM_GENS):
        d = DEGREE[name] if name in PLUS_GENS else -DEGREE[name]
        P = M.letter_past(d)
        for x in range(n):
            out.rows[x * 4 + li][li * n + x] = P.rows[x][x]
    return out


def tensor_via_half_braiding(M: CommModule, N: CommModule) -> CommModule:
    """Tensor product ``T(m, n) = m ⊗ id + (id ⊗ n)(φ_{F,X} ⊗ id)`` built literally."""
    _check_compatible(M, N)
    ctx = M.ctx
    nx, ny = M.dim, N.dim
    IX, IY = Matrix.identity(ctx, nx), Matrix.identity(ctx, ny)
    T = _action_matrix(M).kron(IY) + IX.kron(_action_matrix(N)) @ _half_braiding_F(M).kron(IY)
    F = {}
    block = nx * ny
    for li, name in enumerate(COMM_GENS):
        F[name] = T.submatrix(range(block), range(li * block, (li + 1) * block))
    return CommModule(ctx, F, _tensor_grading(M, N), M.zeta, M.xi, M.setting, None, "")


def comm_modules_equal(M: CommModule, N: CommModule) -> bool:
    return (
        M.setting == N.setting
        and list(M.grading) == list(N.grading)
        and all(M.F[n] == N.F[n] for n in COMM_GENS)
    )


def rescale_family(M: CommModule, w, split: str = "chiral") -> CommModule:
    """Rescale the action along the one-parameter family of the module.

    With ``split='chiral'`` the chiral letters ``f±`` are scaled by ``w`` and
    the antichiral letters ``fb±`` by ``w^-1``, which keeps the bulk pairing
    invariant.  ``split='degree'`` scales ``(f+, fb+)`` by ``w`` and
    ``(f-, fb-)`` by ``w^-1``; it also preserves the commutation condition
    but only amounts to conjugation by ``w^degree``.
    """
    ctx = M.ctx
    w = ctx(w)
    if split == "chiral":
        up, down = PLUS_GENS, MINUS_GENS
    elif split == "degree":
        up, down = ("f+", "fb+"), ("f-", "fb-")
    else:
        raise CommError(f"unknown split {split!r}")
    F = {n: M.F[n].scale(w) for n in up}
    F.update({n: M.F[n].scale(w.inverse()) for n in down})
    return CommModule(ctx, F, list(M.grading), M.zeta, M.xi, M.setting, M.windings, M.label)
