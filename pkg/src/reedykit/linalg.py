"""Sparse exact linear algebra over the rationals.

Matrices are stored column-major as ``{col: {row: mpq}}`` with only nonzero
entries.  Everything downstream (chain complexes, limits, spectral sequences)
is built from the handful of primitives here: products, stacking, and an
incremental echelon form that yields ranks, kernels, images and quotients.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator

from gmpy2 import mpq

ZERO = mpq(0)
ONE = mpq(1)

Vector = dict  # sparse column: {row: mpq}


def q(x) -> mpq:
    """Coerce ints, Fractions, strings like ``"3/4"`` to an exact rational."""
    if isinstance(x, str):
        return mpq(Fraction(x))
    return mpq(x)


def q_str(x: mpq) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vadd(u: Vector, v: Vector, c=ONE) -> Vector:
    """Return u + c*v as a new sparse vector."""
    w = dict(u)
    for k, x in v.items():
        y = w.get(k, ZERO) + c * x
        if y:
            w[k] = y
        else:
            w.pop(k, None)
    return w


def vaxpy(w: Vector, v: Vector, c) -> None:
    """In place: w += c*v."""
    for k, x in v.items():
        y = w.get(k, ZERO) + c * x
        if y:
            w[k] = y
        else:
            del w[k]


def vscale(v: Vector, c) -> Vector:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


class Matrix:
    """Immutable sparse rational matrix (by convention; nothing enforces it)."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: dict | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = {} if cols is None else cols

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        return cls(m, n, {})

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, {j: {j: ONE} for j in range(n)})

    @classmethod
    def from_rows(cls, rows, ncols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        m = len(rows)
        n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
        cols: dict = {}
        for i, r in enumerate(rows):
            if len(r) != n:
                raise ValueError("ragged rows")
            for j, x in enumerate(r):
                x = q(x)
                if x:
                    cols.setdefault(j, {})[i] = x
        return cls(m, n, cols)

    @classmethod
    def from_columns(cls, nrows: int, columns: Iterable[Vector]) -> "Matrix":
        cols = {}
        n = 0
        for j, c in enumerate(columns):
            n = j + 1
            c = {i: x for i, x in c.items() if x}
            if c:
                cols[j] = c
        return cls(nrows, n, cols)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries) -> "Matrix":
        """Build from ``(i, j, value)`` triples; repeated positions are summed."""
        cols: dict = {}
        for i, j, x in entries:
            c = cols.setdefault(j, {})
            y = c.get(i, ZERO) + x
            if y:
                c[i] = y
            else:
                c.pop(i, None)
        return cls(nrows, ncols, {j: c for j, c in cols.items() if c})

    # -- access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def col(self, j: int) -> Vector:
        return self.cols.get(j, {})

    def __getitem__(self, ij) -> mpq:
        i, j = ij
        return self.cols.get(j, {}).get(i, ZERO)

    def entries(self) -> Iterator[tuple[int, int, mpq]]:
        for j, c in self.cols.items():
            for i, x in c.items():
                yield i, j, x

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def to_rows(self) -> list[list[mpq]]:
        rows = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for i, j, x in self.entries():
            rows[i][j] = x
        return rows

    def rows_dict(self) -> dict:
        """Row-major view ``{row: {col: value}}``."""
        out: dict = {}
        for i, j, x in self.entries():
            out.setdefault(i, {})[j] = x
        return out

    def is_zero(self) -> bool:
        return not self.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __hash__(self):
        return hash((self.shape, self.nnz()))

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # -- arithmetic -------------------------------------------------------
    def apply(self, v: Vector) -> Vector:
        """Matrix times sparse column vector."""
        out: dict = {}
        for j, x in v.items():
            c = self.cols.get(j)
            if c:
                vaxpy(out, c, x)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = {}
        for j, c in other.cols.items():
            r = self.apply(c)
            if r:
                cols[j] = r
        return Matrix(self.nrows, other.ncols, cols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, c in other.cols.items():
            w = cols.setdefault(j, {})
            vaxpy(w, c, ONE)
            if not w:
                del cols[j]
        return Matrix(self.nrows, self.ncols, cols)

    def __neg__(self) -> "Matrix":
        return Matrix(self.nrows, self.ncols,
                      {j: {i: -x for i, x in c.items()} for j, c in self.cols.items()})

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = q(c)
        if not c:
            return Matrix.zeros(*self.shape)
        return Matrix(self.nrows, self.ncols,
                      {j: {i: c * x for i, x in col.items()} for j, col in self.cols.items()})

    @property
    def T(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows, self.rows_dict())

    # -- slicing and stacking ---------------------------------------------
    def select_rows(self, rows) -> "Matrix":
        pos = {r: k for k, r in enumerate(rows)}
        cols = {}
        for j, c in self.cols.items():
            d = {pos[i]: x for i, x in c.items() if i in pos}
            if d:
                cols[j] = d
        return Matrix(len(pos), self.ncols, cols)

    def select_cols(self, columns) -> "Matrix":
        columns = list(columns)
        cols = {k: dict(self.cols[j]) for k, j in enumerate(columns) if j in self.cols}
        return Matrix(self.nrows, len(columns), cols)

    def row_block(self, start: int, stop: int) -> "Matrix":
        cols = {}
        for j, c in self.cols.items():
            d = {i - start: x for i, x in c.items() if start <= i < stop}
            if d:
                cols[j] = d
        return Matrix(stop - start, self.ncols, cols)

    def col_block(self, start: int, stop: int) -> "Matrix":
        cols = {j - start: dict(c) for j, c in self.cols.items() if start <= j < stop}
        return Matrix(self.nrows, stop - start, cols)


def hstack(mats: list[Matrix], nrows: int | None = None) -> Matrix:
    if not mats:
        return Matrix.zeros(nrows or 0, 0)
    m = mats[0].nrows
    cols = {}
    off = 0
    for A in mats:
        if A.nrows != m:
            raise ValueError("hstack row mismatch")
        for j, c in A.cols.items():
            cols[off + j] = dict(c)
        off += A.ncols
    return Matrix(m, off, cols)


def vstack(mats: list[Matrix], ncols: int | None = None) -> Matrix:
    if not mats:
        return Matrix.zeros(0, ncols or 0)
    n = mats[0].ncols
    cols: dict = {}
    off = 0
    for A in mats:
        if A.ncols != n:
            raise ValueError("vstack column mismatch")
        for j, c in A.cols.items():
            d = cols.setdefault(j, {})
            for i, x in c.items():
                d[off + i] = x
        off += A.nrows
    return Matrix(off, n, cols)


def block_diag(mats: list[Matrix]) -> Matrix:
    cols = {}
    ro = co = 0
    for A in mats:
        for j, c in A.cols.items():
            cols[co + j] = {ro + i: x for i, x in c.items()}
        ro += A.nrows
        co += A.ncols
    return Matrix(ro, co, cols)


def kron(A: Matrix, B: Matrix) -> Matrix:
    """Kronecker product; basis index of (a, b) is a*dim_b + b."""
    m, n = B.shape
    cols = {}
    for ja, ca in A.cols.items():
        for jb, cb in B.cols.items():
            cols[ja * n + jb] = {ia * m + ib: xa * xb
                                 for ia, xa in ca.items() for ib, xb in cb.items()}
    return Matrix(A.nrows * m, A.ncols * n, cols)


# ---------------------------------------------------------------------------
# Echelon machinery
# ---------------------------------------------------------------------------

class Echelon:
    """Incremental column echelon form with lowest-index pivots.

    Each stored vector has a distinct pivot, its smallest nonzero index, with
    value 1.  Reducing a vector against the stored ones terminates because the
    smallest index strictly increases at every step.  With ``track=True`` each
    stored vector also remembers how it was combined from the inserted inputs,
    which gives kernels and solutions of linear systems.
    """

    def __init__(self, track: bool = False):
        self.pivots: dict[int, Vector] = {}
        self.track = track
        self.combos: dict[int, Vector] = {}
        self.count = 0

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Vector, combo: Vector | None = None):
        w = dict(v)
        c = dict(combo) if combo is not None else None
        piv = self.pivots
        while w:
            p = min(w)
            b = piv.get(p)
            if b is None:
                break
            x = w[p]
            vaxpy(w, b, -x)
            if c is not None:
                vaxpy(c, self.combos[p], -x)
        return w, c

    def insert(self, v: Vector, label=None) -> Vector | None:
        """Insert a vector.  Returns None if independent, else (with tracking)
        the dependency combination expressing it in earlier inputs."""
        idx = self.count if label is None else label
        self.count += 1
        combo = {idx: ONE} if self.track else None
        w, c = self.reduce(v, combo)
        if not w:
            return c if self.track else {}
        p = min(w)
        inv = ONE / w[p]
        if inv != ONE:
            w = {k: x * inv for k, x in w.items()}
            if c is not None:
                c = {k: x * inv for k, x in c.items()}
        self.pivots[p] = w
        if c is not None:
            self.combos[p] = c
        return None

    def contains(self, v: Vector) -> bool:
        w, _ = self.reduce(v)
        return not w

    def reduced_basis(self) -> list[tuple[int, Vector]]:
        """Fully reduced basis: pivot entries 1, zero at every other pivot.

        Returned sorted by pivot.
        """
        order = sorted(self.pivots)
        basis = {p: dict(self.pivots[p]) for p in order}
        # back substitution from the largest pivot down
        for p in reversed(order):
            bp = basis[p]
            for r in order:
                if r >= p:
                    break
                br = basis[r]
                x = br.get(p)
                if x:
                    vaxpy(br, bp, -x)
        return [(p, basis[p]) for p in order]


def rank(A: Matrix) -> int:
    # eliminate along the shorter side
    if A.nrows < A.ncols:
        e = Echelon()
        limit = A.nrows
        for j in sorted(A.cols):
            e.insert(A.cols[j])
            if len(e) == limit:
                break
        return len(e)
    e = Echelon()
    rows = A.rows_dict()
    limit = A.ncols
    for i in sorted(rows):
        e.insert(rows[i])
        if len(e) == limit:
            break
    return len(e)


def is_injective(A: Matrix) -> bool:
    return rank(A) == A.ncols


def is_surjective(A: Matrix) -> bool:
    return rank(A) == A.nrows


class Subspace:
    """A subspace of Q^n with a fully reduced basis.

    ``basis`` is an ``n x k`` matrix whose column ``t`` has entry 1 at row
    ``pivots[t]`` and 0 at every other pivot row, so coordinates of a member
    vector are read off at the pivot rows.
    """

    __slots__ = ("ambient", "pivots", "basis")

    def __init__(self, ambient: int, pivots: list[int], basis: Matrix):
        self.ambient = ambient
        self.pivots = pivots
        self.basis = basis

    @classmethod
    def span(cls, ambient: int, vectors: Iterable[Vector]) -> "Subspace":
        e = Echelon()
        for v in vectors:
            if len(e) == ambient:
                break
            e.insert(v)
        return cls.from_echelon(ambient, e)

    @classmethod
    def from_echelon(cls, ambient: int, e: Echelon) -> "Subspace":
        rb = e.reduced_basis()
        pivots = [p for p, _ in rb]
        return cls(ambient, pivots, Matrix.from_columns(ambient, [v for _, v in rb]))

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, list(range(n)), Matrix.identity(n))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def coords(self, v: Vector) -> Vector:
        """Coordinates of a vector assumed to lie in the subspace."""
        out = {}
        for t, p in enumerate(self.pivots):
            x = v.get(p)
            if x:
                out[t] = x
        return out

    def coords_matrix(self, A: Matrix) -> Matrix:
        """Coordinates of every column of A (columns assumed in the subspace)."""
        return A.select_rows(self.pivots)

    def contains(self, v: Vector) -> bool:
        w = dict(v)
        for t, p in enumerate(self.pivots):
            x = w.get(p)
            if x:
                vaxpy(w, self.basis.col(t), -x)
        return not w

    def complement_rows(self) -> list[int]:
        pset = set(self.pivots)
        return [i for i in range(self.ambient) if i not in pset]

    def quotient_projection(self) -> tuple[Matrix, Matrix]:
        """Return (Q, S): Q maps Q^n onto Q^n / self in the basis given by the
        non-pivot coordinates, S is the section sending those back."""
        comp = self.complement_rows()
        cpos = {r: k for k, r in enumerate(comp)}
        n = self.ambient
        cols = {}
        for i in range(n):
            if i in cpos:
                cols[i] = {cpos[i]: ONE}
        # pivot coordinate p contributes -b_t restricted to complement
        for t, p in enumerate(self.pivots):
            b = self.basis.col(t)
            d = {cpos[i]: -x for i, x in b.items() if i in cpos}
            if d:
                cols[p] = d
        Q = Matrix(len(comp), n, cols)
        S = Matrix(n, len(comp), {k: {r: ONE} for k, r in enumerate(comp)})
        return Q, S


def column_space(A: Matrix) -> Subspace:
    return Subspace.span(A.nrows, (A.cols[j] for j in sorted(A.cols)))


def kernel(A: Matrix) -> Subspace:
    """Kernel of A as a subspace of Q^{ncols}."""
    e = Echelon(track=True)
    deps = []
    for j in range(A.ncols):
        c = e.insert(A.col(j), label=j)
        if c is not None:
            deps.append(c)
    return Subspace.span(A.ncols, deps)


def solve(A: Matrix, b: Vector) -> Vector | None:
    """A particular solution of A x = b, or None if inconsistent."""
    e = Echelon(track=True)
    for j in range(A.ncols):
        e.insert(A.col(j), label=j)
    w, c = e.reduce(b, {})
    if w:
        return None
    return {k: -x for k, x in c.items() if x}


def solve_matrix(A: Matrix, B: Matrix) -> Matrix | None:
    """Solve A X = B column by column; None if any column is inconsistent."""
    e = Echelon(track=True)
    for j in range(A.ncols):
        e.insert(A.col(j), label=j)
    cols = {}
    for j in range(B.ncols):
        w, c = e.reduce(B.col(j), {})
        if w:
            return None
        x = {k: -v for k, v in c.items() if v}
        if x:
            cols[j] = x
    return Matrix(A.ncols, B.ncols, cols)


def inverse(A: Matrix) -> Matrix:
    if A.nrows != A.ncols:
        raise ValueError("inverse of non-square matrix")
    X = solve_matrix(A, Matrix.identity(A.nrows))
    if X is None or rank(A) != A.nrows:
        raise ValueError("matrix is singular")
    return X
