import itertools

import pytest

from qslice.exactla import SparseMat, rank
from qslice.pyramid import (
    Grading,
    InvalidPartition,
    Partition,
    Pyramid,
    enumerate_pyramids,
    grading_from_pyramid,
    jordan_type,
    nilpotent_from_pyramid,
    partitions_of,
    sudim_of_degree,
    trivial_grading,
)
from qslice.qsuper import QElement, bracket


def brute_force_count(parts):
    """Try every tuple of integer left edges in a window and keep the supported stacks."""
    parts = sorted(parts)
    w = parts[-1]
    count = 0
    for edges in itertools.product(range(-w, w + 1), repeat=len(parts) - 1):
        le = list(edges) + [-w]
        ok = all(
            le[r] >= le[r + 1] and le[r] + 2 * parts[r] <= le[r + 1] + 2 * parts[r + 1]
            for r in range(len(parts) - 1)
        )
        count += ok
    return count


@pytest.mark.parametrize("parts,expected", [((2, 2, 3), 3), ((4,), 1), ((1, 2), 3), ((1,), 1), ((1, 1), 1)])
def test_counts(parts, expected):
    assert len(enumerate_pyramids(Partition.of(parts))) == expected


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_counts_match_brute_force(N):
    for lam in partitions_of(N):
        assert len(enumerate_pyramids(lam)) == brute_force_count(lam.parts)


def test_partition_normalization_and_errors():
    assert Partition.of([3, 2, 2]).parts == (2, 2, 3)
    assert Partition.parse("3, 1").parts == (1, 3)
    with pytest.raises(InvalidPartition):
        Partition.of([0, 2])
    with pytest.raises(InvalidPartition):
        Partition.parse("a,b")
    assert len(partitions_of(5)) == 7


def test_one_two_left_edges():
    ps = enumerate_pyramids(Partition.of((1, 2)))
    assert [p.left_edges for p in ps] == [(-2, -2), (-1, -2), (0, -2)]
    assert [p.cols for p in ps] == [(-1, -1, 1), (-1, 0, 1), (-1, 1, 1)]


def test_nilpotent_examples():
    (P,) = enumerate_pyramids(Partition.of((2,)))
    assert nilpotent_from_pyramid(P) == QElement.unit(2, 0, 1, 2)
    (P,) = enumerate_pyramids(Partition.of((1, 1)))
    assert nilpotent_from_pyramid(P).is_zero()
    for P in enumerate_pyramids(Partition.of((2, 2, 3))):
        e = nilpotent_from_pyramid(P)
        a = SparseMat(7, 7, e.s)
        assert rank(a) == 4 and rank(a @ a) == 1
        assert jordan_type(e) == (2, 2, 3)


def test_degrees():
    (P,) = enumerate_pyramids(Partition.of((2,)))
    G = grading_from_pyramid(P)
    assert G.degree(0, 1, 2) == 2
    assert G.degree_of(QElement.identity(2)) == 0
    assert sudim_of_degree(G, 0) == (2, 2)
    assert sudim_of_degree(G, 2) == sudim_of_degree(G, -2) == (1, 1)
    assert sudim_of_degree(G, 1) == (0, 0)
    centred = grading_from_pyramid(enumerate_pyramids(Partition.of((1, 2)))[1])
    off = sorted(centred.degree(0, i, j) for i in range(1, 4) for j in range(1, 4) if i != j)
    assert off == [-2, -1, -1, 1, 1, 2]
    assert sudim_of_degree(centred, -1) == (2, 2)
    assert sudim_of_degree(trivial_grading(3), 0) == (9, 9)


def test_h_gamma_realizes_degrees():
    for P in enumerate_pyramids(Partition.of((1, 1, 2))):
        G = grading_from_pyramid(P)
        h = G.h_gamma
        assert sum(h.s.get((i, i), 0) for i in range(G.n)) == 0
        for k in range(2 * G.n * G.n):
            x = QElement.basis(G.n, k)
            assert bracket(h, x) == G.degrees[k] * x


@pytest.mark.parametrize("N", [2, 3, 4])
def test_grading_is_a_lie_grading(N):
    for lam in partitions_of(N):
        for P in enumerate_pyramids(lam):
            G = grading_from_pyramid(P)
            e = nilpotent_from_pyramid(P)
            assert e.is_zero() or G.degree_of(e) == 2
            nn = N * N
            # odd part mirrors the even part
            assert all(G.degrees[k] == G.degrees[k + nn] for k in range(nn))
            for a in range(2 * nn):
                for b in range(2 * nn):
                    z = bracket(QElement.basis(N, a), QElement.basis(N, b))
                    if not z.is_zero():
                        assert G.degree_of(z) == G.degrees[a] + G.degrees[b]


def test_relabel_invariance_of_degrees():
    P = enumerate_pyramids(Partition.of((1, 2)))[0]
    R = P.relabeled((3, 1, 2))
    G, GR = Grading(3, P.cols), Grading(3, R.cols)
    for i in range(1, 4):
        for j in range(1, 4):
            assert G.degree(0, i, j) == GR.degree(0, R.perm[i - 1], R.perm[j - 1])


def test_json_roundtrip():
    for P in enumerate_pyramids(Partition.of((2, 2, 3))):
        assert Pyramid.from_json(P.to_json()) == P
