from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qslice.exactla import (
    AmbientMismatch,
    NoSolution,
    SparseMat,
    Subspace,
    inverse,
    kernel,
    rank,
    rref,
    solve,
    subspace_intersection,
    subspace_ops,
    subspace_sum,
)


def test_rref_example():
    m = SparseMat.from_dense([[2, 4, 6], [1, 2, 4], [0, 0, 0]])
    assert rref(m).to_dense() == [[1, 2, 0], [0, 0, 1]]
    assert rank(m) == 2


def test_kernel_example():
    m = SparseMat.from_dense([[1, 1, 0], [0, 1, 1]])
    k = kernel(m)
    assert k.dim == 1
    assert k.vectors() == [{0: 1, 1: -1, 2: 1}]


def test_solve_and_inconsistent():
    m = SparseMat.from_dense([[1, 2], [3, 4]])
    assert solve(m, [5, 6]) == [Fr(-4), Fr(9, 2)]
    with pytest.raises(NoSolution):
        solve(SparseMat.from_dense([[1, 1], [2, 2]]), [1, 3])


def test_inverse_roundtrip():
    m = SparseMat.from_dense([[2, 1, 0], [0, 1, 3], [1, 0, 1]])
    assert m @ inverse(m) == SparseMat.identity(3)
    with pytest.raises(ValueError):
        inverse(SparseMat.from_dense([[1, 2], [2, 4]]))


def test_subspace_ops():
    a = Subspace.span([{0: 1}, {1: 1}], 3)
    b = Subspace.span([{1: 1}, {2: 1}], 3)
    ops = subspace_ops(a, b)
    assert ops["sum"].dim == 3
    assert ops["intersection"] == Subspace.span([{1: 1}], 3)
    with pytest.raises(AmbientMismatch):
        subspace_sum(a, Subspace.zero(4))


def test_sudim_reads_parity_split():
    s = Subspace.span([{0: 1, 1: 1}, {3: 1}, {2: 1, 3: 1}], 4, split=2)
    assert s.is_graded()
    assert s.sudim() == (1, 2)
    assert not Subspace.span([{0: 1, 2: 1}], 4, split=2).is_graded()


small = st.integers(min_value=-3, max_value=3)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@settings(max_examples=60, deadline=None)
@given(matrices(4, 5), matrices(4, 5))
def test_modular_law(x, y):
    a = Subspace.span(SparseMat.from_dense(x).row_dicts(), 5)
    b = Subspace.span(SparseMat.from_dense(y).row_dicts(), 5)
    assert subspace_sum(a, b).dim + subspace_intersection(a, b).dim == a.dim + b.dim


@settings(max_examples=60, deadline=None)
@given(matrices(3, 5))
def test_rank_nullity(x):
    m = SparseMat.from_dense(x)
    k = kernel(m)
    assert rank(m) + k.dim == 5
    for v in k.vectors():
        assert m.apply(v) == {}
