"""Dense matrices over :class:`~qloop.scalar.QScalar` and exact elimination."""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalar import QScalar, ScalarContext


class Matrix:
    __slots__ = ("ctx", "rows", "nrows", "ncols")

    def __init__(self, ctx: ScalarContext, rows: Sequence[Sequence[QScalar]], ncols: int | None = None):
        self.ctx = ctx
        self.rows = [[a if isinstance(a, QScalar) else ctx(a) for a in r] for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)

    # constructors

    @classmethod
    def zeros(cls, ctx: ScalarContext, m: int, n: int) -> "Matrix":
        z = ctx.zero
        return cls(ctx, [[z] * n for _ in range(m)], n)

    @classmethod
    def identity(cls, ctx: ScalarContext, n: int) -> "Matrix":
        out = cls.zeros(ctx, n, n)
        one = ctx.one
        for i in range(n):
            out.rows[i][i] = one
        return out

    @classmethod
    def diag(cls, ctx: ScalarContext, entries: Iterable[QScalar]) -> "Matrix":
        entries = [ctx(e) for e in entries]
        out = cls.zeros(ctx, len(entries), len(entries))
        for i, e in enumerate(entries):
            out.rows[i][i] = e
        return out

    @classmethod
    def from_entries(cls, ctx: ScalarContext, m: int, n: int, entries: dict[tuple[int, int], object]) -> "Matrix":
        out = cls.zeros(ctx, m, n)
        for (i, j), v in entries.items():
            out.rows[i][j] = ctx(v)
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> QScalar:
        i, j = ij
        return self.rows[i][j]

    def copy(self) -> "Matrix":
        return Matrix(self.ctx, self.rows, self.ncols)

    # arithmetic

    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.ctx, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.ctx, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix(self.ctx, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        c = self.ctx(c)
        if c.is_one():
            return self
        return Matrix(self.ctx, [[c * a for a in r] for r in self.rows], self.ncols)

    def __mul__(self, c) -> "Matrix":
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        z = self.ctx.zero
        cols = other.ncols
        # sparse view of the right factor
        right = [[(j, v) for j, v in enumerate(row) if v] for row in other.rows]
        out = []
        for row in self.rows:
            acc: dict[int, QScalar] = {}
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in right[k]:
                    p = a * b
                    acc[j] = acc[j] + p if j in acc else p
            new = [z] * cols
            for j, v in acc.items():
                new[j] = v
            out.append(new)
        return Matrix(self.ctx, out, cols)

    def apply(self, vec: Sequence[QScalar]) -> list[QScalar]:
        z = self.ctx.zero
        out = []
        for row in self.rows:
            acc = z
            for a, b in zip(row, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def __pow__(self, n: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        out = Matrix.identity(self.ctx, self.nrows)
        base = self
        while n:
            if n & 1:
                out = out @ base
            n >>= 1
            if n:
                base = base @ base
        return out

    def transpose(self) -> "Matrix":
        return Matrix(self.ctx, [list(c) for c in zip(*self.rows)] if self.rows else [], self.nrows)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def kron(self, other: "Matrix") -> "Matrix":
        z = self.ctx.zero
        m, n = other.shape
        rows = []
        for r in self.rows:
            for i in range(m):
                orow = other.rows[i]
                new = []
                for a in r:
                    if not a:
                        new.extend([z] * n)
                    else:
                        new.extend(a * b if b else z for b in orow)
                rows.append(new)
        return Matrix(self.ctx, rows, self.ncols * n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    def __hash__(self):
        return None  # matrices are mutable

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        return all((a.is_one() if i == j else not a) for i, r in enumerate(self.rows) for j, a in enumerate(r))

    def is_scalar(self) -> QScalar | None:
        """Return ``c`` if the matrix equals ``c * id``, else ``None``."""
        if self.nrows != self.ncols or self.nrows == 0:
            return None
        c = self.rows[0][0]
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if (i == j and a != c) or (i != j and a):
                    return None
        return c

    def is_diagonal(self) -> bool:
        return all(not a for i, r in enumerate(self.rows) for j, a in enumerate(r) if i != j)

    def diagonal(self) -> list[QScalar]:
        return [self.rows[i][i] for i in range(min(self.nrows, self.ncols))]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.ctx, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def column(self, j: int) -> list[QScalar]:
        return [r[j] for r in self.rows]

    # exact elimination

    def rank(self) -> int:
        return len(_rref([dict((j, a) for j, a in enumerate(r) if a) for r in self.rows])[1])

    def nullspace(self) -> list[list[QScalar]]:
        """Basis of the right kernel ``{v : M v = 0}``."""
        return nullspace(self.ctx, [dict((j, a) for j, a in enumerate(r) if a) for r in self.rows], self.ncols)

    def left_kernel(self) -> list[list[QScalar]]:
        """Basis of ``{v : v^T M = 0}``."""
        return self.transpose().nullspace()

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        one = self.ctx.one
        aug = []
        for i, r in enumerate(self.rows):
            d = {j: a for j, a in enumerate(r) if a}
            d[n + i] = one
            aug.append(d)
        red, pivots = _rref(aug)
        if len(pivots) < n or pivots[n - 1] >= n:
            raise ValueError("matrix is singular")
        out = Matrix.zeros(self.ctx, n, n)
        for row, p in zip(red, pivots):
            for j, a in row.items():
                if j >= n:
                    out.rows[p][j - n] = a
        return out

    def to_strings(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.rows]

    @classmethod
    def from_strings(cls, ctx: ScalarContext, rows: Sequence[Sequence[str]]) -> "Matrix":
        return cls(ctx, [[ctx.parse(s) for s in r] for r in rows])

    def __repr__(self) -> str:
        return "Matrix(" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.rows) + ")"


def _weight(a: QScalar) -> int:
    return a.num.degree() + a.den.degree() + (0 if a.is_rational() else 1)


def _rref(rows: list[dict[int, QScalar]]) -> tuple[list[dict[int, QScalar]], list[int]]:
    """Reduced row echelon form of sparse rows; returns (rows, pivot columns)."""
    rows = [dict(r) for r in rows if r]
    pivots: list[int] = []
    done: list[dict[int, QScalar]] = []
    while rows:
        col = min(min(r) for r in rows)
        cands = [i for i, r in enumerate(rows) if min(r) == col]
        best = min(cands, key=lambda i: (_weight(rows[i][col]), len(rows[i])))
        prow = rows.pop(best)
        inv = prow[col].inverse()
        prow = {j: a * inv for j, a in prow.items()}
        new_rows = []
        for r in rows:
            f = r.get(col)
            if f is not None:
                r = _axpy(r, prow, -f)
            if r:
                new_rows.append(r)
        rows = new_rows
        for k, r in enumerate(done):
            f = r.get(col)
            if f is not None:
                done[k] = _axpy(r, prow, -f)
        done.append(prow)
        pivots.append(col)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [done[i] for i in order], [pivots[i] for i in order]


def _axpy(r: dict[int, QScalar], p: dict[int, QScalar], f: QScalar) -> dict[int, QScalar]:
    out = dict(r)
    for j, a in p.items():
        v = out.get(j)
        v = f * a if v is None else v + f * a
        if v:
            out[j] = v
        else:
            out.pop(j, None)
    return out


def nullspace(ctx: ScalarContext, rows: list[dict[int, QScalar]], ncols: int) -> list[list[QScalar]]:
    """Right kernel of a sparse system given as column-index dictionaries."""
    red, pivots = _rref(rows)
    pivset = set(pivots)
    basis = []
    z, one = ctx.zero, ctx.one
    for free in range(ncols):
        if free in pivset:
            continue
        v = [z] * ncols
        v[free] = one
        for row, p in zip(red, pivots):
            a = row.get(free)
            if a is not None:
                v[p] = -a
        basis.append(v)
    return basis


def rank_of_vectors(ctx: ScalarContext, vectors: Sequence[Sequence[QScalar]]) -> int:
    return len(_rref([dict((j, a) for j, a in enumerate(v) if a) for v in vectors])[1])
