"""
The queer Lie superalgebra q(N).

An element is stored by its coordinates in the canonical basis
``e0_{11}, e0_{12}, ..., e0_{NN}, e1_{11}, ..., e1_{NN}`` (row-major within each
parity, 0-based indices internally).  The even block ``s`` and the odd block
``sp`` are recovered from those coordinates; the 2N x 2N realization is
``[[s, sp], [sp, s]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .exactla import SparseMat, Subspace, axpy, rank, scaled


class Parity(Enum):
    EVEN = 0
    ODD = 1
    MIXED = 2


class SizeMismatch(ValueError):
    pass


def basis_index(n: int, parity: int, i: int, j: int) -> int:
    """Canonical coordinate of ``e^parity_{i,j}`` (0-based i, j)."""
    return parity * n * n + i * n + j


def index_info(n: int, k: int) -> tuple[int, int, int]:
    """Inverse of :func:`basis_index`: ``(parity, i, j)``."""
    p, r = divmod(k, n * n)
    i, j = divmod(r, n)
    return p, i, j


class QElement:
    __slots__ = ("n", "coords")

    def __init__(self, n: int, coords=None):
        self.n = n
        self.coords = {k: Fraction(v) for k, v in (coords or {}).items() if v != 0}

    @classmethod
    def from_blocks(cls, n: int, s=None, sp=None) -> "QElement":
        """Build from block dicts ``{(i, j): value}`` (0-based)."""
        c = {}
        for (i, j), v in (s or {}).items():
            c[basis_index(n, 0, i, j)] = v
        for (i, j), v in (sp or {}).items():
            c[basis_index(n, 1, i, j)] = v
        return cls(n, c)

    @classmethod
    def unit(cls, n: int, parity: int, i: int, j: int) -> "QElement":
        """Matrix unit ``e^parity_{i,j}`` with 1-based indices, as in the literature."""
        return cls(n, {basis_index(n, parity, i - 1, j - 1): 1})

    @classmethod
    def basis(cls, n: int, k: int) -> "QElement":
        return cls(n, {k: 1})

    @classmethod
    def identity(cls, n: int) -> "QElement":
        return cls(n, {basis_index(n, 0, i, i): 1 for i in range(n)})

    @property
    def dim(self) -> int:
        return 2 * self.n * self.n

    @property
    def s(self) -> dict:
        nn = self.n * self.n
        return {divmod(k, self.n): v for k, v in self.coords.items() if k < nn}

    @property
    def sp(self) -> dict:
        nn = self.n * self.n
        return {divmod(k - nn, self.n): v for k, v in self.coords.items() if k >= nn}

    @property
    def parity(self) -> Parity:
        nn = self.n * self.n
        has_even = any(k < nn for k in self.coords)
        has_odd = any(k >= nn for k in self.coords)
        if has_odd and not has_even:
            return Parity.ODD
        if has_even and not has_odd:
            return Parity.EVEN
        if not has_even and not has_odd:
            return Parity.EVEN
        return Parity.MIXED

    def is_zero(self) -> bool:
        return not self.coords

    def even_part(self) -> "QElement":
        nn = self.n * self.n
        return QElement(self.n, {k: v for k, v in self.coords.items() if k < nn})

    def odd_part(self) -> "QElement":
        nn = self.n * self.n
        return QElement(self.n, {k: v for k, v in self.coords.items() if k >= nn})

    def __add__(self, other: "QElement") -> "QElement":
        _same(self, other)
        c = dict(self.coords)
        axpy(c, 1, other.coords)
        return QElement(self.n, c)

    def __sub__(self, other: "QElement") -> "QElement":
        _same(self, other)
        c = dict(self.coords)
        axpy(c, -1, other.coords)
        return QElement(self.n, c)

    def __neg__(self):
        return QElement(self.n, scaled(-1, self.coords))

    def __rmul__(self, a) -> "QElement":
        return QElement(self.n, scaled(Fraction(a), self.coords))

    def __eq__(self, other):
        return isinstance(other, QElement) and self.n == other.n and self.coords == other.coords

    def __hash__(self):
        return hash((self.n, frozenset(self.coords.items())))

    def to_matrix(self) -> list[list[Fraction]]:
        """Dense 2N x 2N realization ``[[s, sp], [sp, s]]``."""
        n = self.n
        m = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
        for (i, j), v in self.s.items():
            m[i][j] = v
            m[n + i][n + j] = v
        for (i, j), v in self.sp.items():
            m[i][n + j] = v
            m[n + i][j] = v
        return m

    def __repr__(self):
        if not self.coords:
            return "0"
        terms = []
        for k in sorted(self.coords):
            p, i, j = index_info(self.n, k)
            terms.append(f"{self.coords[k]}*e{p}_{i + 1}{j + 1}")
        return " + ".join(terms)


def _same(x: QElement, y: QElement):
    if x.n != y.n:
        raise SizeMismatch(f"q({x.n}) vs q({y.n})")


def _matmul(a: dict, b: dict) -> dict:
    """Product of N x N matrices given as ``{(i, j): v}``."""
    by_row: dict = {}
    for (k, j), v in b.items():
        by_row.setdefault(k, []).append((j, v))
    out: dict = {}
    for (i, k), u in a.items():
        for j, v in by_row.get(k, ()):
            out[i, j] = out.get((i, j), 0) + u * v
    return out


def _add_into(acc: dict, m: dict, sign=1):
    for key, v in m.items():
        t = acc.get(key, 0) + sign * v
        if t:
            acc[key] = t
        else:
            acc.pop(key, None)


def bracket(x: QElement, y: QElement) -> QElement:
    """Supercommutator ``xy - (-1)^{|x||y|} yx``, extended bilinearly to mixed inputs."""
    _same(x, y)
    a0, a1 = x.s, x.sp
    b0, b1 = y.s, y.sp
    even: dict = {}
    odd: dict = {}
    # [even, even] and [odd, odd] land in the even block
    _add_into(even, _matmul(a0, b0))
    _add_into(even, _matmul(b0, a0), -1)
    _add_into(even, _matmul(a1, b1))
    _add_into(even, _matmul(b1, a1))
    # mixed-parity brackets land in the odd block
    _add_into(odd, _matmul(a0, b1))
    _add_into(odd, _matmul(b1, a0), -1)
    _add_into(odd, _matmul(a1, b0))
    _add_into(odd, _matmul(b0, a1), -1)
    return QElement.from_blocks(x.n, even, odd)


def odd_form(x: QElement, y: QElement) -> Fraction:
    """``(x, y) = otr(xy)``: trace of the off-diagonal block of the product."""
    _same(x, y)
    a0, a1 = x.s, x.sp
    b0, b1 = y.s, y.sp
    tot = Fraction(0)
    for (i, k), u in a0.items():
        v = b1.get((k, i))
        if v:
            tot += u * v
    for (i, k), u in a1.items():
        v = b0.get((k, i))
        if v:
            tot += u * v
    return tot


def pi(x: QElement) -> QElement:
    """Parity swap: exchanges ``e0_{ij}`` and ``e1_{ij}``."""
    nn = x.n * x.n
    return QElement(x.n, {(k + nn) if k < nn else (k - nn): v for k, v in x.coords.items()})


@dataclass(frozen=True)
class LinearFunctional:
    n: int
    values: dict  # canonical basis index -> Fraction

    def __call__(self, x: QElement) -> Fraction:
        return sum((v * self.values.get(k, 0) for k, v in x.coords.items()), Fraction(0))

    def vanishes_on_odd(self) -> bool:
        nn = self.n * self.n
        return all(k < nn for k, v in self.values.items() if v)


def functional_from_element(E: QElement) -> LinearFunctional:
    """``y -> (E, y)``."""
    n = E.n
    vals = {}
    for k in range(2 * n * n):
        v = odd_form(E, QElement.basis(n, k))
        if v:
            vals[k] = v
    return LinearFunctional(n, vals)


def element_from_functional(chi: LinearFunctional) -> QElement:
    """The odd ``E`` with ``chi = (E, .)``; requires ``chi`` to vanish on the odd part."""
    if not chi.vanishes_on_odd():
        raise ValueError("functional does not vanish on the odd part")
    n = chi.n
    # (E, e0_{ij}) = E_sp[j, i]
    sp = {}
    for k, v in chi.values.items():
        _, i, j = index_info(n, k)
        sp[j, i] = v
    return QElement.from_blocks(n, None, sp)


def gram_matrix(n: int) -> SparseMat:
    """Gram matrix of the odd form on the canonical basis."""
    d = 2 * n * n
    ent = {}
    for a in range(d):
        x = QElement.basis(n, a)
        for b in range(d):
            v = odd_form(x, QElement.basis(n, b))
            if v:
                ent[a, b] = v
    return SparseMat(d, d, ent)


def form_is_nondegenerate(n: int) -> bool:
    return rank(gram_matrix(n)) == 2 * n * n


def ad_matrix(x: QElement) -> SparseMat:
    """Matrix of ``y -> [x, y]`` in canonical coordinates (columns = inputs)."""
    n = x.n
    d = 2 * n * n
    ent = {}
    for c in range(d):
        for r, v in bracket(x, QElement.basis(n, c)).coords.items():
            ent[r, c] = v
    return SparseMat(d, d, ent)


def span(elements, n: int) -> Subspace:
    """Subspace of q(n) spanned by the given elements, parity-tagged."""
    return Subspace.span([x.coords for x in elements], 2 * n * n, n * n)


def element(n: int, v: dict) -> QElement:
    return QElement(n, v)
