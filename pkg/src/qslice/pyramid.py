"""
Partitions, pyramids, the nilpotent e^P and the grading Gamma^P.

Geometry: boxes are 2 units wide and rows are placed on the integer line.
Row ``r`` of a pyramid (0 = top, n-1 = bottom) has ``parts[r]`` boxes and left
edge ``left_edges[r]``; the bottom row is centred, so its left edge is
``-parts[-1]``.  The box ``k`` of row ``r`` has column centre
``left_edges[r] + 2k + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .exactla import SparseMat, Subspace, rank
from .qsuper import QElement, index_info


class InvalidPartition(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise InvalidPartition("empty partition")
        if any((not isinstance(p, int)) or p < 1 for p in self.parts):
            raise InvalidPartition(f"parts must be positive integers: {self.parts}")
        if list(self.parts) != sorted(self.parts):
            raise InvalidPartition(f"parts must be weakly increasing: {self.parts}")

    @classmethod
    def of(cls, parts) -> "Partition":
        """Normalize any ordering to weakly increasing."""
        try:
            ps = sorted(int(p) for p in parts)
        except (TypeError, ValueError) as exc:
            raise InvalidPartition(str(exc)) from None
        return cls(tuple(ps))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        try:
            parts = [int(t) for t in text.replace(" ", "").split(",") if t]
        except ValueError:
            raise InvalidPartition(f"cannot parse partition {text!r}") from None
        return cls.of(parts)

    @property
    def N(self) -> int:
        return sum(self.parts)

    @property
    def n(self) -> int:
        return len(self.parts)

    def sum_min(self) -> int:
        """``sum_{i,j} min(p_i, p_j)``."""
        return sum(min(a, b) for a in self.parts for b in self.parts)

    def __str__(self):
        return ",".join(map(str, self.parts))


def partitions_of(N: int) -> list[Partition]:
    """All partitions of N, each weakly increasing, in lexicographic order."""
    out = []

    def rec(rest, maxpart, acc):
        if rest == 0:
            out.append(Partition(tuple(sorted(acc))))
            return
        for p in range(min(rest, maxpart), 0, -1):
            rec(rest - p, p, acc + [p])

    rec(N, N, [])
    return sorted(out, key=lambda p: p.parts)


@dataclass(frozen=True)
class Pyramid:
    shape: Partition
    left_edges: tuple[int, ...]

    def __post_init__(self):
        ps, le = self.shape.parts, self.left_edges
        if len(le) != len(ps):
            raise ValueError("one left edge per row")
        if le[-1] != -ps[-1]:
            raise ValueError("bottom row must be centred")
        for r in range(len(ps) - 1):
            if not (le[r] >= le[r + 1] and le[r] + 2 * ps[r] <= le[r + 1] + 2 * ps[r + 1]):
                raise ValueError(f"row {r} is not supported by the row below")

    @property
    def N(self) -> int:
        return self.shape.N

    @cached_property
    def boxes(self) -> list[tuple[int, int, int]]:
        """``(row, k, col)`` for every box, listed in label order."""
        raw = []
        for r, (p, left) in enumerate(zip(self.shape.parts, self.left_edges)):
            for k in range(p):
                raw.append((r, k, left + 2 * k + 1))
        # column-major labelling: columns left to right, top to bottom inside a column
        raw.sort(key=lambda b: (b[2], b[0]))
        return raw

    @cached_property
    def label_of(self) -> dict[tuple[int, int], int]:
        """``(row, k) -> label`` with labels 1..N."""
        return {(r, k): i + 1 for i, (r, k, _) in enumerate(self.boxes)}

    @cached_property
    def cols(self) -> tuple[int, ...]:
        """Column centre of the box labelled ``i`` at position ``i-1``."""
        return tuple(c for _, _, c in self.boxes)

    def col(self, label: int) -> int:
        return self.cols[label - 1]

    def left_neighbor(self, label: int):
        r, k, _ = self.boxes[label - 1]
        if k == 0:
            return None
        return self.label_of[r, k - 1]

    def row_labels(self, r: int) -> list[int]:
        """Labels of row ``r`` from left to right."""
        return [self.label_of[r, k] for k in range(self.shape.parts[r])]

    def last_labels(self) -> list[int]:
        """``t_1, ..., t_n``: label of the last box of each row."""
        return [self.row_labels(r)[-1] for r in range(self.shape.n)]

    def relabeled(self, perm) -> "RelabeledPyramid":
        return RelabeledPyramid(self, tuple(perm))

    def to_json(self) -> dict:
        return {"partition": list(self.shape.parts), "left_edges": list(self.left_edges), "cols": list(self.cols)}

    @classmethod
    def from_json(cls, d: dict) -> "Pyramid":
        return cls(Partition.of(d["partition"]), tuple(d["left_edges"]))

    def diagram(self) -> str:
        """Small ASCII picture, one character per unit."""
        lo = min(self.left_edges)
        hi = max(le + 2 * p for le, p in zip(self.left_edges, self.shape.parts))
        lines = []
        for r, (p, le) in enumerate(zip(self.shape.parts, self.left_edges)):
            row = [" "] * (hi - lo)
            for k in range(p):
                lab = str(self.label_of[r, k])[-2:].rjust(2)
                a = le + 2 * k - lo
                row[a], row[a + 1] = lab[0], lab[1]
            lines.append("".join(row).rstrip())
        return "\n".join(lines)


@dataclass(frozen=True)
class RelabeledPyramid:
    """A pyramid whose labels are permuted: new label of old label ``i`` is ``perm[i-1]``."""

    base: Pyramid
    perm: tuple[int, ...]

    @property
    def shape(self):
        return self.base.shape

    @property
    def N(self):
        return self.base.N

    @cached_property
    def cols(self):
        out = [0] * self.N
        for old, new in enumerate(self.perm, start=1):
            out[new - 1] = self.base.col(old)
        return tuple(out)

    def col(self, label):
        return self.cols[label - 1]

    def left_neighbor(self, label):
        old = self.perm.index(label) + 1
        ln = self.base.left_neighbor(old)
        return None if ln is None else self.perm[ln - 1]

    def row_labels(self, r):
        return [self.perm[i - 1] for i in self.base.row_labels(r)]

    def last_labels(self):
        return [self.perm[i - 1] for i in self.base.last_labels()]


def enumerate_pyramids(shape: Partition) -> list[Pyramid]:
    """All pyramids of the given shape, ordered lexicographically by left edges."""
    ps = shape.parts
    n = len(ps)
    results = []

    def rec(r, edges):
        # edges holds left edges for rows r+1..n-1 (bottom-up)
        if r < 0:
            results.append(tuple(edges))
            return
        below_left = edges[0]
        below_right = below_left + 2 * ps[r + 1]
        for left in range(below_left, below_right - 2 * ps[r] + 1):
            rec(r - 1, [left] + edges)

    rec(n - 2, [-ps[-1]])
    return [Pyramid(shape, e) for e in sorted(results)]


def nilpotent_from_pyramid(P) -> QElement:
    """``e^P``: sends ``v_i`` to ``v_{L(i)}``, i.e. ``sum_i e0_{L(i), i}``."""
    s = {}
    for i in range(1, P.N + 1):
        L = P.left_neighbor(i)
        if L is not None:
            s[L - 1, i - 1] = 1
    return QElement.from_blocks(P.N, s, None)


@dataclass(frozen=True)
class Grading:
    """Inner grading of q(n): ``deg e^eps_{ij} = cols[j] - cols[i]``."""

    n: int
    cols: tuple

    def degree_of_index(self, k: int) -> int:
        _, i, j = index_info(self.n, k)
        return self.cols[j] - self.cols[i]

    def degree(self, parity: int, i: int, j: int) -> int:
        """Degree of ``e^parity_{i,j}`` with 1-based indices."""
        return self.cols[j - 1] - self.cols[i - 1]

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self.degree_of_index(k) for k in range(2 * self.n * self.n))

    @cached_property
    def h_gamma(self) -> QElement:
        """Traceless diagonal element whose adjoint action realizes the degrees."""
        avg = Fraction(sum(self.cols), self.n)
        return QElement.from_blocks(self.n, {(i, i): avg - c for i, c in enumerate(self.cols)})

    def degree_of(self, x: QElement):
        """Degree of a homogeneous element, or None if ``x`` is not homogeneous (0 -> None)."""
        ds = {self.degrees[k] for k in x.coords}
        return ds.pop() if len(ds) == 1 else None

    def component(self, x: QElement, j: int) -> QElement:
        return QElement(self.n, {k: v for k, v in x.coords.items() if self.degrees[k] == j})

    def indices_of_degree(self, j: int) -> list[int]:
        return [k for k, d in enumerate(self.degrees) if d == j]

    def indices_where(self, pred) -> list[int]:
        return [k for k, d in enumerate(self.degrees) if pred(d)]

    def support(self) -> list[int]:
        return sorted(set(self.degrees))


def grading_from_pyramid(P) -> Grading:
    return Grading(P.N, tuple(P.cols))


def trivial_grading(n: int) -> Grading:
    return Grading(n, (0,) * n)


def graded_pieces(G: Grading) -> dict[int, Subspace]:
    n = G.n
    out = {}
    for j in G.support():
        out[j] = Subspace.coordinate(G.indices_of_degree(j), 2 * n * n, n * n)
    return out


def sudim_of_degree(G: Grading, j: int) -> tuple[int, int]:
    nn = G.n * G.n
    ks = G.indices_of_degree(j)
    return sum(1 for k in ks if k < nn), sum(1 for k in ks if k >= nn)


def jordan_type(e: QElement) -> tuple[int, ...]:
    """Jordan block sizes of a nilpotent even element, from ranks of its powers."""
    n = e.n
    a = SparseMat(n, n, e.s)
    ranks = [n]
    p = SparseMat.identity(n)
    while ranks[-1] > 0:
        p = p @ a
        r = rank(p)
        if r == ranks[-1]:
            raise ValueError("element is not nilpotent")
        ranks.append(r)
    ranks.append(0)
    # number of blocks of size >= k is rank(a^{k-1}) - rank(a^k)
    ge = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k in range(1, len(ge) + 1):
        exact = ge[k - 1] - (ge[k] if k < len(ge) else 0)
        sizes += [k] * exact
    return tuple(sorted(sizes))


def all_pyramids(max_n: int):
    """``(partition, index, pyramid)`` for all N <= max_n, deterministic order."""
    for N in range(1, max_n + 1):
        for lam in partitions_of(N):
            for idx, P in enumerate(enumerate_pyramids(lam)):
                yield lam, idx, P


__all__ = [
    "Partition",
    "InvalidPartition",
    "Pyramid",
    "Grading",
    "enumerate_pyramids",
    "nilpotent_from_pyramid",
    "grading_from_pyramid",
    "graded_pieces",
    "trivial_grading",
    "jordan_type",
    "partitions_of",
    "all_pyramids",
    "sudim_of_degree",
]
