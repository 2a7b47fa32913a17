"""
Exact sparse linear algebra over the rationals.

Vectors are plain dicts ``{index: Fraction}`` with no stored zeros; matrices
are :class:`SparseMat`, keyed by ``(row, col)``.  Pivoting always takes the
smallest available column, so every echelon form and every basis returned
here is canonical.
"""

from __future__ import annotations

from fractions import Fraction

Rat = Fraction


class NoSolution(ValueError):
    """The linear system is inconsistent."""


class AmbientMismatch(ValueError):
    pass


def vec(entries) -> dict:
    """Sparse vector from a dense sequence or a mapping, dropping zeros."""
    if isinstance(entries, dict):
        items = entries.items()
    else:
        items = enumerate(entries)
    return {i: Fraction(x) for i, x in items if x != 0}


def axpy(y: dict, a, x: dict) -> None:
    """In place ``y += a*x``."""
    if a == 0:
        return
    for k, v in x.items():
        t = y.get(k, 0) + a * v
        if t:
            y[k] = t
        else:
            y.pop(k, None)


def scaled(a, x: dict) -> dict:
    if a == 0:
        return {}
    return {k: a * v for k, v in x.items()}


class SparseMat:
    """Immutable sparse rational matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        ent = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry {(r, c)} outside {rows}x{cols}")
            if v != 0:
                ent[r, c] = Fraction(v)
        self.entries = ent

    @classmethod
    def from_dense(cls, rows_list, cols=None):
        rows_list = [list(r) for r in rows_list]
        nr = len(rows_list)
        nc = cols if cols is not None else (len(rows_list[0]) if nr else 0)
        ent = {(i, j): x for i, r in enumerate(rows_list) for j, x in enumerate(r) if x != 0}
        return cls(nr, nc, ent)

    @classmethod
    def from_rows(cls, row_dicts, cols: int):
        ent = {(i, j): x for i, r in enumerate(row_dicts) for j, x in r.items()}
        return cls(len(row_dicts), cols, ent)

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def col_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMat":
        return SparseMat(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def apply(self, v: dict) -> dict:
        """Matrix-vector product with a sparse vector."""
        out: dict = {}
        for (r, c), x in self.entries.items():
            y = v.get(c)
            if y:
                out[r] = out.get(r, 0) + x * y
        return {k: x for k, x in out.items() if x}

    def __matmul__(self, other: "SparseMat") -> "SparseMat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ocols = other.row_dicts()
        acc: dict = {}
        for (r, k), x in self.entries.items():
            for c, y in ocols[k].items():
                acc[r, c] = acc.get((r, c), 0) + x * y
        return SparseMat(self.rows, other.cols, acc)

    def __eq__(self, other):
        return (
            isinstance(other, SparseMat)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def __repr__(self):
        return f"SparseMat({self.rows}x{self.cols}, nnz={self.nnz})"


class Echelon:
    """Incrementally maintained reduced row-echelon basis.

    Pivot rows are kept fully reduced, so reducing a new vector needs a single
    pass over the pivot columns in its support.
    """

    def __init__(self):
        self.pivots: dict[int, dict] = {}

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        for c in sorted(k for k in v if k in self.pivots):
            a = v.get(c)
            if a:
                axpy(v, -a, self.pivots[c])
        return v

    def add(self, v: dict) -> bool:
        """Insert ``v``; return True when it enlarged the span."""
        v = self.reduce(v)
        if not v:
            return False
        p = min(v)
        inv = 1 / v[p]
        v = {k: x * inv for k, x in v.items()}
        for row in self.pivots.values():
            a = row.get(p)
            if a:
                axpy(row, -a, v)
        self.pivots[p] = v
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rows(self) -> list[dict]:
        return [self.pivots[c] for c in sorted(self.pivots)]


def rref(m: SparseMat) -> SparseMat:
    """Reduced row-echelon form; zero rows are dropped."""
    ech = Echelon()
    for r in m.row_dicts():
        ech.add(r)
    return SparseMat.from_rows(ech.rows(), m.cols)


def rank(m: SparseMat) -> int:
    ech = Echelon()
    for r in m.row_dicts():
        ech.add(r)
    return ech.rank


def _kernel_rows(rows: list[dict], ncols: int) -> list[dict]:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    piv = ech.pivots
    out = []
    for f in range(ncols):
        if f in piv:
            continue
        v = {f: Fraction(1)}
        for p, row in piv.items():
            a = row.get(f)
            if a:
                v[p] = -a
        out.append(v)
    return out


def kernel(m: SparseMat) -> "Subspace":
    """Right null space ``{v : m v = 0}``."""
    return Subspace.span(_kernel_rows(m.row_dicts(), m.cols), m.cols)


def solve(m: SparseMat, b) -> list[Fraction]:
    """One particular solution of ``m x = b``, free variables set to zero."""
    b = list(b)
    if len(b) != m.rows:
        raise ValueError("right-hand side has wrong length")
    n = m.cols
    ech = Echelon()
    for r, row in enumerate(m.row_dicts()):
        row = dict(row)
        if b[r] != 0:
            row[n] = Fraction(b[r])
        ech.add(row)
    if n in ech.pivots:
        raise NoSolution("rank([m|b]) > rank(m)")
    x = [Fraction(0)] * n
    for p, row in ech.pivots.items():
        x[p] = row.get(n, Fraction(0))
    return x


class Subspace:
    """A subspace of ``Q^ambient_dim`` stored by its canonical rref basis.

    ``split`` optionally tags coordinates ``>= split`` as odd, which is how
    superdimensions are read off.
    """

    __slots__ = ("ambient_dim", "basis", "split", "_rows")

    def __init__(self, ambient_dim: int, basis: SparseMat, split=None):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.split = split
        self._rows = basis.row_dicts()

    @classmethod
    def span(cls, vectors, ambient_dim: int, split=None) -> "Subspace":
        ech = Echelon()
        for v in vectors:
            ech.add(v)
        return cls(ambient_dim, SparseMat.from_rows(ech.rows(), ambient_dim), split)

    @classmethod
    def zero(cls, ambient_dim: int, split=None):
        return cls(ambient_dim, SparseMat(0, ambient_dim), split)

    @classmethod
    def full(cls, ambient_dim: int, split=None):
        return cls(ambient_dim, SparseMat.identity(ambient_dim), split)

    @classmethod
    def coordinate(cls, indices, ambient_dim: int, split=None):
        idx = sorted(set(indices))
        return cls(ambient_dim, SparseMat(len(idx), ambient_dim, {(r, c): 1 for r, c in enumerate(idx)}), split)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> list[dict]:
        return [dict(r) for r in self._rows]

    def pivots(self) -> list[int]:
        return [min(r) for r in self._rows]

    def contains(self, v: dict) -> bool:
        v = dict(v)
        for r in self._rows:
            a = v.get(min(r))
            if a:
                axpy(v, -a, r)
        return not v

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors())

    def sudim(self) -> tuple[int, int]:
        """``(dim even | dim odd)`` for a parity-graded subspace."""
        if self.split is None:
            raise ValueError("subspace carries no parity tag")
        s = self.split
        odd_proj = rank(SparseMat.from_rows([{k: x for k, x in r.items() if k >= s} for r in self._rows], self.ambient_dim))
        return self.dim - odd_proj, odd_proj

    def is_graded(self) -> bool:
        """True when the subspace is the sum of its even and odd parts."""
        s = self.split
        even = [{k: x for k, x in r.items() if k < s} for r in self._rows]
        odd = [{k: x for k, x in r.items() if k >= s} for r in self._rows]
        return all(self.contains(v) for v in even + odd if v)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(f"{a.ambient_dim} != {b.ambient_dim}")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace.span(a.vectors() + b.vectors(), a.ambient_dim, a.split)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    va, vb = a.vectors(), b.vectors()
    if not va or not vb:
        return Subspace.zero(a.ambient_dim, a.split)
    # columns: a-basis then negated b-basis; kernel coefficients on the a-part give the intersection
    ka = len(va)
    cols = va + [scaled(-1, v) for v in vb]
    m = SparseMat(a.ambient_dim, len(cols), {(r, c): x for c, v in enumerate(cols) for r, x in v.items()})
    out = []
    for coeffs in _kernel_rows(m.row_dicts(), len(cols)):
        w: dict = {}
        for i, c in coeffs.items():
            if i < ka:
                axpy(w, c, va[i])
        out.append(w)
    return Subspace.span(out, a.ambient_dim, a.split)


def subspace_ops(a: Subspace, b: Subspace) -> dict:
    return {"sum": subspace_sum(a, b), "intersection": subspace_intersection(a, b)}


def matrix_from_columns(columns: list[dict], rows: int) -> SparseMat:
    return SparseMat(rows, len(columns), {(r, c): x for c, v in enumerate(columns) for r, x in v.items()})


def inverse(m: SparseMat) -> SparseMat:
    """Inverse of a square invertible matrix."""
    n = m.rows
    if m.cols != n:
        raise ValueError("matrix is not square")
    ech = Echelon()
    for r, row in enumerate(m.row_dicts()):
        aug = dict(row)
        aug[n + r] = Fraction(1)
        ech.add(aug)
    if any(p >= n for p in ech.pivots) or ech.rank != n:
        raise ValueError("matrix is singular")
    ent = {}
    for p, row in ech.pivots.items():
        for c, x in row.items():
            if c >= n:
                ent[p, c - n] = x
    return SparseMat(n, n, ent)
