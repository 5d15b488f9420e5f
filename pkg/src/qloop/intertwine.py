"""Exact intertwiner spaces, isomorphism search and exactness certificates.

Any module object exposing ``ctx``, ``dim``, ``generator_names()``, ``gens``,
``weight_keys()`` and, for truncated modules, ``floor`` plus ``s_values()``
can be fed in; both quantum-group representations and commutation modules
qualify.

Intertwiners are forced to preserve weights, so the unknowns are only the
entries between equal weights.  For truncated modules the unknowns and the
equations are further restricted to weights at or above a common floor,
where every weight space is complete; everything below is reported as
excluded.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import Matrix, nullspace, rank_of_vectors
from .scalar import QScalar


def common_floor(*mods) -> Fraction | None:
    floors = [m.floor for m in mods if getattr(m, "floor", None) is not None]
    return max(floors) if floors else None


def interior(mod, floor: Fraction | None) -> list[int]:
    """Basis indices whose weight lies in the complete region."""
    if floor is None:
        return list(range(mod.dim))
    s = mod.s_values()
    return [i for i in range(mod.dim) if s[i] >= floor]


def _shared_generators(V, W) -> list[str]:
    names = [n for n in V.generator_names() if n in W.generator_names()]
    if not names and (V.generator_names() or W.generator_names()):
        raise ValueError("modules share no generators")
    return names


def hom_space(V, W, floor: Fraction | None = None) -> list[Matrix]:
    """Basis of weight-preserving maps ``T: V -> W`` with ``T ρ_V(g) = ρ_W(g) T``.

    Only generators present on both sides are imposed, so a full module can
    be compared with a Borel one.  ``floor`` defaults to the largest floor
    of the two modules.
    """
    if V.ctx != W.ctx:
        raise ValueError("modules live over different scalar contexts")
    ctx = V.ctx
    if floor is None:
        floor = common_floor(V, W)
    iv = set(interior(V, floor))
    iw = set(interior(W, floor))
    kv, kw = V.weight_keys(), W.weight_keys()
    var: dict[tuple[int, int], int] = {}
    for r in sorted(iw):
        for c in sorted(iv):
            if kw[r] == kv[c]:
                var[(r, c)] = len(var)
    if not var:
        return []
    by_row: dict[int, list[int]] = {}
    by_col: dict[int, list[int]] = {}
    for r, c in var:
        by_row.setdefault(r, []).append(c)
        by_col.setdefault(c, []).append(r)
    equations: list[dict[int, QScalar]] = []
    for name in _shared_generators(V, W):
        A, B = V.gens[name], W.gens[name]
        eqs: dict[tuple[int, int], dict[int, QScalar]] = {}
        # (T A)[r, c] = sum_k T[r, k] A[k, c]
        for k in range(V.dim):
            rs = by_col.get(k)
            if not rs:
                continue
            for c, a in enumerate(A.rows[k]):
                if not a or c not in iv:
                    continue
                for r in rs:
                    d = eqs.setdefault((r, c), {})
                    x = var[(r, k)]
                    d[x] = d[x] + a if x in d else a
        # (B T)[r, c] = sum_k B[r, k] T[k, c]
        for r in iw:
            for k, b in enumerate(B.rows[r]):
                if not b:
                    continue
                for c in by_row.get(k, ()):
                    d = eqs.setdefault((r, c), {})
                    x = var[(k, c)]
                    d[x] = d[x] - b if x in d else -b
        for d in eqs.values():
            d = {x: a for x, a in d.items() if a}
            if d:
                equations.append(d)
    basis = nullspace(ctx, equations, len(var))
    out = []
    for vec in basis:
        m = Matrix.zeros(ctx, W.dim, V.dim)
        for (r, c), x in var.items():
            m.rows[r][c] = vec[x]
        out.append(m)
    return out


def _combine(ctx, basis: Sequence[Matrix], coeffs: Sequence[int]) -> Matrix:
    out = Matrix.zeros(ctx, basis[0].nrows, basis[0].ncols)
    for c, m in zip(coeffs, basis):
        if c:
            out = out + m.scale(c)
    return out


def _restricted_rank(m: Matrix, rows: Sequence[int], cols: Sequence[int]) -> int:
    return m.submatrix(rows, cols).rank()


def normalize(m: Matrix) -> Matrix:
    """Scale so the first nonzero entry (row-major) equals one."""
    for row in m.rows:
        for a in row:
            if a:
                return m.scale(a.inverse())
    return m


def _random_full_rank(ctx, basis, rows, cols, target, rng: random.Random, tries: int) -> Matrix | None:
    if not basis:
        return None
    if len(basis) == 1:
        m = basis[0]
        return m if _restricted_rank(m, rows, cols) == target else None
    for _ in range(tries):
        coeffs = [rng.randint(-3, 3) for _ in basis]
        if not any(coeffs):
            continue
        m = _combine(ctx, basis, coeffs)
        if _restricted_rank(m, rows, cols) == target:
            return m
    return None


def find_isomorphism(V, W, seed: int = 0) -> Matrix | None:
    """An invertible intertwiner ``V -> W``, certified exactly, or ``None``.

    Tries ``d + 3`` random small-integer combinations of a basis of the
    intertwiner space, where ``d`` is its dimension.
    """
    if V.dim != W.dim:
        return None
    floor = common_floor(V, W)
    basis = hom_space(V, W, floor)
    rows, cols = interior(W, floor), interior(V, floor)
    if len(rows) != len(cols):
        return None
    rng = random.Random(seed)
    m = _random_full_rank(V.ctx, basis, rows, cols, len(cols), rng, len(basis) + 3)
    return None if m is None else normalize(m)


def hom_dimension(V, W) -> int:
    return len(hom_space(V, W))


@dataclass
class ExactSequenceCertificate:
    verified: bool
    f: Matrix | None
    g: Matrix | None
    dims: dict
    ranks: dict
    truncated: bool = False
    floor: Fraction | None = None
    excluded: dict = field(default_factory=dict)
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "verified": self.verified,
            "f": None if self.f is None else self.f.to_strings(),
            "g": None if self.g is None else self.g.to_strings(),
            "dims": self.dims,
            "ranks": self.ranks,
            "truncated": self.truncated,
            "floor": None if self.floor is None else str(self.floor),
            "excluded": self.excluded,
            "reason": self.reason,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def verify_exact_sequence(A, B, C, seed: int = 0) -> ExactSequenceCertificate:
    """Look for ``0 -> A --f--> B --g--> C -> 0`` and certify it exactly.

    ``f`` must be injective, ``g`` surjective, ``g ∘ f = 0`` and
    ``rank f + rank g = dim B``.  With truncated modules all conditions are
    taken on the complete region and the cut-off basis vectors are listed.
    """
    ctx = B.ctx
    floor = common_floor(A, B, C)
    ia, ib, ic = interior(A, floor), interior(B, floor), interior(C, floor)
    dims = {"A": len(ia), "B": len(ib), "C": len(ic)}
    excluded = {}
    if floor is not None:
        excluded = {
            name: [i for i in range(mod.dim) if i not in set(idx)]
            for name, mod, idx in (("A", A, ia), ("B", B, ib), ("C", C, ic))
        }
    cert = ExactSequenceCertificate(False, None, None, dims, {}, floor is not None, floor, excluded)
    if not ia or not ic:
        cert.reason = "complete region is empty"
        return cert
    if len(ia) + len(ic) != len(ib):
        cert.reason = "dimensions do not add up"
        return cert
    rng = random.Random(seed)
    hab = hom_space(A, B, floor)
    f = _random_full_rank(ctx, hab, ib, ia, len(ia), rng, len(hab) + 3)
    if f is None:
        cert.reason = f"no injective intertwiner A -> B (intertwiner space of dimension {len(hab)})"
        return cert
    f = normalize(f)
    hbc = hom_space(B, C, floor)
    if not hbc:
        cert.reason = "no intertwiner B -> C"
        return cert
    # restrict to g with g ∘ f = 0 on the complete region
    comps = [(g @ f).submatrix(ic, ia) for g in hbc]
    rows = []
    for r in range(len(ic)):
        for c in range(len(ia)):
            d = {i: m.rows[r][c] for i, m in enumerate(comps) if m.rows[r][c]}
            if d:
                rows.append(d)
    kernel = nullspace(ctx, rows, len(hbc))
    gbasis = [_combine_q(ctx, hbc, v) for v in kernel]
    g = _random_full_rank(ctx, gbasis, ic, ib, len(ic), rng, len(gbasis) + 3)
    if g is None:
        cert.reason = "no surjective intertwiner B -> C annihilating the image of A"
        return cert
    g = normalize(g)
    rf = _restricted_rank(f, ib, ia)
    rg = _restricted_rank(g, ic, ib)
    gf_zero = (g @ f).submatrix(ic, ia).is_zero()
    cert.f, cert.g = f, g
    cert.ranks = {"f": rf, "g": rg}
    cert.verified = gf_zero and rf == len(ia) and rg == len(ic) and rf + rg == len(ib)
    cert.reason = "exact" if cert.verified else "rank or composition check failed"
    return cert


def _combine_q(ctx, basis: Sequence[Matrix], coeffs: Sequence[QScalar]) -> Matrix:
    out = Matrix.zeros(ctx, basis[0].nrows, basis[0].ncols)
    for c, m in zip(coeffs, basis):
        if c:
            out = out + m.scale(c)
    return out


def invariant_subspace_from(v: Sequence[QScalar], V) -> list[list[QScalar]]:
    """Basis of the smallest subspace containing ``v`` and stable under all generators."""
    ctx = V.ctx
    basis: list[list[QScalar]] = []
    queue = [list(v)]
    while queue:
        w = queue.pop()
        if not any(w):
            continue
        if rank_of_vectors(ctx, basis + [w]) > len(basis):
            basis.append(w)
            for name in V.generator_names():
                queue.append(V.gens[name].apply(w))
    return basis


def acts_by_scalar_on_image(op: Matrix, f: Matrix) -> QScalar | None:
    """``λ`` with ``op f = λ f`` if it exists."""
    lhs = op @ f
    lam = None
    for r in range(f.nrows):
        for c in range(f.ncols):
            a = f.rows[r][c]
            if a:
                lam = lhs.rows[r][c] / a
                break
        if lam is not None:
            break
    if lam is None:
        return None
    return lam if lhs == f.scale(lam) else None


def acts_by_scalar_on_quotient(op: Matrix, g: Matrix) -> QScalar | None:
    """``μ`` with ``g op = μ g`` if it exists."""
    lhs = g @ op
    mu = None
    for r in range(g.nrows):
        for c in range(g.ncols):
            a = g.rows[r][c]
            if a:
                mu = lhs.rows[r][c] / a
                break
        if mu is not None:
            break
    if mu is None:
        return None
    return mu if lhs == g.scale(mu) else None


def coordinates(basis: Sequence[Sequence[QScalar]], vectors: Sequence[Sequence[QScalar]], ctx) -> Matrix:
    """Coordinates (as columns) of ``vectors`` in the span of ``basis``; raises if outside."""
    bm = Matrix(ctx, [list(col) for col in zip(*basis)])
    k = len(basis)
    out = Matrix.zeros(ctx, k, len(vectors))
    for j, v in enumerate(vectors):
        aug = Matrix(ctx, [row + [x] for row, x in zip(bm.rows, v)])
        ker = aug.nullspace()
        sol = [w for w in ker if w[k]]
        if not sol:
            raise ValueError("vector is not in the span")
        w = sol[0]
        inv = -w[k].inverse()
        for i in range(k):
            out.rows[i][j] = w[i] * inv
    return out


def induced_on_subspace(V, basis: Sequence[Sequence[QScalar]]) -> dict[str, Matrix]:
    """Matrices of the generators restricted to an invariant subspace."""
    return {name: coordinates(basis, [V.gens[name].apply(b) for b in basis], V.ctx) for name in V.generator_names()}
