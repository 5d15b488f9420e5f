"""Braided tensor algebras on two letters and their Hopf pairing.

Letters are ``+`` (degree +1) and ``-`` (degree -1).  Words of length ``n``
index the basis of the n-th tensor power in lexicographic order with ``+``
first, so the word with binary digits ``d_1 ... d_n`` (``+ = 0``) sits at
position ``int(d_1...d_n, 2)``.

The symmetriser of degree ``n`` is the sum over all permutations of their
positive braid lifts along reduced words.  The pairing between the two
tensor algebras is ``b^{*n} ∘ (S_n ⊗ id)``, where ``b^{*n}`` pairs letters
from the middle outwards.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from typing import Callable, Iterator, Sequence

from .braidcat import BraidingContext, GradedObject, braiding_matrix
from .linalg import Matrix
from .scalar import QScalar, ScalarContext

LETTERS = "+-"
LETTER_OBJECT = GradedObject([1, -1])
DEFAULT_MAX_DEGREE = 6


def words(n: int) -> list[str]:
    return ["".join(w) for w in itertools.product(LETTERS, repeat=n)]


def word_index(w: str) -> int:
    idx = 0
    for ch in w:
        idx = 2 * idx + LETTERS.index(ch)
    return idx


def word_degree(w: str) -> int:
    return w.count("+") - w.count("-")


def _check_degree(n: int, max_degree: int) -> None:
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n > max_degree:
        raise ValueError(f"degree {n} exceeds the configured bound {max_degree}")


def adjacent_braiding(i: int, n: int, bctx: BraidingContext, F: GradedObject = LETTER_OBJECT) -> Matrix:
    """``id^{⊗i} ⊗ c_{F,F} ⊗ id^{⊗(n-i-2)}`` on ``F^{⊗n}``."""
    ctx = bctx.ctx
    left = Matrix.identity(ctx, F.dim**i)
    right = Matrix.identity(ctx, F.dim ** (n - i - 2))
    return left.kron(braiding_matrix(F, F, bctx)).kron(right)


def _as_monomial(m: Matrix) -> tuple[list[int], list[QScalar]]:
    """Split a matrix with one nonzero per column into (target row, scalar)."""
    target, scal = [], []
    for j in range(m.ncols):
        nz = [(i, m.rows[i][j]) for i in range(m.nrows) if m.rows[i][j]]
        if len(nz) != 1:
            raise ValueError("not a monomial matrix")
        target.append(nz[0][0])
        scal.append(nz[0][1])
    return target, scal


def reduced_lifts(n: int, bctx: BraidingContext, F: GradedObject = LETTER_OBJECT) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], list[int], list[QScalar]]]:
    """Yield ``(perm, reduced_word, target, scalar)`` for every permutation.

    Permutations are reached from the identity by right multiplication with
    simple transpositions that increase the length, so the accumulated word
    is reduced and the accumulated map is the positive braid lift.
    """
    dim = F.dim**n
    gens = [_as_monomial(adjacent_braiding(i, n, bctx, F)) for i in range(n - 1)]
    start = tuple(range(n))
    one = bctx.ctx.one
    seen = {start}
    queue = deque([(start, (), list(range(dim)), [one] * dim)])
    while queue:
        perm, word, target, scal = queue.popleft()
        yield perm, word, target, scal
        for i in range(n - 1):
            if perm[i] > perm[i + 1]:
                continue
            nperm = list(perm)
            nperm[i], nperm[i + 1] = nperm[i + 1], nperm[i]
            nperm = tuple(nperm)
            if nperm in seen:
                continue
            seen.add(nperm)
            gt, gs = gens[i]
            # lift(f s_i) = lift(f) ∘ sigma_i
            ntarget = [target[gt[c]] for c in range(dim)]
            nscal = [scal[gt[c]] * gs[c] for c in range(dim)]
            queue.append((nperm, word + (i,), ntarget, nscal))


def symmetriser(n: int, bctx: BraidingContext, F: GradedObject = LETTER_OBJECT, max_degree: int = DEFAULT_MAX_DEGREE) -> Matrix:
    """Sum of the positive braid lifts of all permutations of ``n`` strands."""
    _check_degree(n, max_degree)
    ctx = bctx.ctx
    dim = F.dim**n
    acc: list[dict[int, QScalar]] = [dict() for _ in range(dim)]
    for _, _, target, scal in reduced_lifts(n, bctx, F):
        for c in range(dim):
            row = acc[target[c]]
            v = row.get(c)
            row[c] = scal[c] if v is None else v + scal[c]
    out = Matrix.zeros(ctx, dim, dim)
    for r, row in enumerate(acc):
        for c, v in row.items():
            out.rows[r][c] = v
    return out


def symmetriser_recursive(n: int, bctx: BraidingContext, F: GradedObject = LETTER_OBJECT) -> Matrix:
    """The same operator through ``S_n = (S_{n-1} ⊗ id)(1 + σ_{n-1} + σ_{n-1}σ_{n-2} + ...)``."""
    ctx = bctx.ctx
    if n <= 1:
        return Matrix.identity(ctx, F.dim**n)
    prev = symmetriser_recursive(n - 1, bctx, F).kron(Matrix.identity(ctx, F.dim))
    shuffle = Matrix.identity(ctx, F.dim**n)
    chain = Matrix.identity(ctx, F.dim**n)
    for i in range(n - 2, -1, -1):
        chain = chain @ adjacent_braiding(i, n, bctx, F)
        shuffle = shuffle + chain
    return prev @ shuffle


def letter_pairing(x: str, y: str, zeta: QScalar, xi: QScalar) -> QScalar:
    if x == "+" and y == "-":
        return zeta
    if x == "-" and y == "+":
        return xi
    return zeta.ctx.zero


def b_power(n: int, zeta: QScalar, xi: QScalar) -> Matrix:
    """Iterated letter pairing; rows index the first algebra, columns the second.

    The entry for words ``w, v`` is ``prod_k b(w_k, v_{n+1-k})``.
    """
    ctx = zeta.ctx
    ws = words(n)
    out = Matrix.zeros(ctx, len(ws), len(ws))
    for i, w in enumerate(ws):
        for j, v in enumerate(ws):
            e = ctx.one
            for k in range(n):
                e = e * letter_pairing(w[k], v[n - 1 - k], zeta, xi)
                if not e:
                    break
            out.rows[i][j] = e
    return out


def hopf_pairing(n: int, zeta: QScalar, xi: QScalar, bctx: BraidingContext, sym: Matrix | None = None, max_degree: int = DEFAULT_MAX_DEGREE) -> Matrix:
    """Gram matrix of the degree-``n`` pairing ``b^{*n} ∘ (S_n ⊗ id)``.

    Entries vanish unless the total degree of the two words is zero.
    """
    _check_degree(n, max_degree)
    if sym is None:
        sym = symmetriser(n, bctx, max_degree=max_degree)
    return sym.transpose() @ b_power(n, zeta, xi)


def radical(gram: Matrix) -> list[list[QScalar]]:
    """Exact basis of the left radical ``{v : v^T G = 0}`` of a Gram matrix."""
    return gram.left_kernel()


def radical_dimension(gram: Matrix) -> int:
    return gram.nrows - gram.rank()


def serre_vectors(ctx: ScalarContext) -> list[list[QScalar]]:
    """The two degree-4 quantum Serre elements written in the word basis.

    ``a^3 b - [3] a^2 b a + [3] a b a^2 - b a^3`` with ``(a, b) = (+, -)``
    and with the letters exchanged.
    """
    three = ctx.q_number(3)
    out = []
    for a, b in (("+", "-"), ("-", "+")):
        v = [ctx.zero] * 16
        for w, c in ((a * 3 + b, ctx.one), (a * 2 + b + a, -three), (a + b + a * 2, three), (b + a * 3, -ctx.one)):
            v[word_index(w)] = c
        out.append(v)
    return out


def in_left_radical(v: Sequence[QScalar], gram: Matrix) -> bool:
    return all(not x for x in Matrix(gram.ctx, [list(v)]).__matmul__(gram).rows[0])


def coproduct(word: str, bctx: BraidingContext) -> dict[tuple[str, str], QScalar]:
    """Braided coproduct of a word in the tensor algebra with primitive letters.

    Uses ``Δ(x w) = (x ⊗ 1)Δ(w) + (1 ⊗ x)Δ(w)`` where moving ``x`` past the
    left tensor factor ``a`` costs the braiding scalar ``Q^(deg x · deg a)``.
    """
    ctx = bctx.ctx
    if not word:
        return {("", ""): ctx.one}
    x, rest = word[0], word[1:]
    dx = word_degree(x)
    out: dict[tuple[str, str], QScalar] = {}
    for (a, b), c in coproduct(rest, bctx).items():
        for key, coeff in (((x + a, b), c), ((a, x + b), c * bctx.scalar(dx, word_degree(a)))):
            v = out.get(key)
            v = coeff if v is None else v + coeff
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def check_pairing_axioms(
    n_max: int,
    zeta: QScalar,
    xi: QScalar,
    bctx: BraidingContext,
    grams: dict[int, Matrix] | None = None,
) -> dict:
    """Check both Hopf pairing compatibilities on all words up to degree ``n_max``.

    ``ρ(x y, z) = Σ ρ(y, z_(1)) ρ(x, z_(2))`` and
    ``ρ(x, z w) = Σ ρ(x_(1), w) ρ(x_(2), z)``.

    ``grams`` may override the Gram matrix of any degree, which is how a
    corrupted symmetriser is fed in as a negative control.
    """
    ctx = bctx.ctx
    grams = dict(grams or {})
    for n in range(1, n_max + 1):
        if n not in grams:
            grams[n] = hopf_pairing(n, zeta, xi, bctx)

    def rho(x: str, z: str) -> QScalar:
        if len(x) != len(z):
            return ctx.zero
        if not x:
            return ctx.one
        return grams[len(x)].rows[word_index(x)][word_index(z)]

    coprods: dict[str, dict] = {}

    def delta(w: str) -> dict:
        if w not in coprods:
            coprods[w] = coproduct(w, bctx)
        return coprods[w]

    failures: list[dict] = []
    per_degree: dict[int, bool] = {}
    for n in range(2, n_max + 1):
        ok = True
        for i in range(1, n):
            j = n - i
            for x in words(i):
                for y in words(j):
                    for z in words(n):
                        lhs = rho(x + y, z)
                        rhs = ctx.zero
                        for (z1, z2), c in delta(z).items():
                            if len(z1) == j:
                                rhs = rhs + c * rho(y, z1) * rho(x, z2)
                        if lhs != rhs:
                            ok = False
                            failures.append({"axiom": "product", "x": x, "y": y, "z": z, "lhs": str(lhs), "rhs": str(rhs)})
                    # mirror: x of degree n paired against z w
            for xw in words(n):
                for z in words(i):
                    for w in words(j):
                        lhs = rho(xw, z + w)
                        rhs = ctx.zero
                        for (x1, x2), c in delta(xw).items():
                            if len(x1) == j:
                                rhs = rhs + c * rho(x1, w) * rho(x2, z)
                        if lhs != rhs:
                            ok = False
                            failures.append({"axiom": "coproduct", "x": xw, "z": z, "w": w, "lhs": str(lhs), "rhs": str(rhs)})
        per_degree[n] = ok
    return {
        "passed": all(per_degree.values()),
        "per_degree": per_degree,
        "first_failing_degree": min((n for n, ok in per_degree.items() if not ok), default=None),
        "failures": failures[:20],
    }


def gram_to_json(gram: Matrix, n: int) -> str:
    ws = words(n)
    payload = {"degree": n, "rows": ws, "cols": ws, "entries": gram.to_strings()}
    return json.dumps(payload, indent=2, sort_keys=True)


def gram_from_json(text: str, ctx: ScalarContext) -> tuple[int, Matrix]:
    payload = json.loads(text)
    return payload["degree"], Matrix.from_strings(ctx, payload["entries"])
