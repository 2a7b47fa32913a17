import pytest

from _cases import non_good_pairs
from qslice.exactla import Subspace
from qslice.pyramid import (
    Grading,
    Partition,
    enumerate_pyramids,
    grading_from_pyramid,
    nilpotent_from_pyramid,
    partitions_of,
    trivial_grading,
)
from qslice.qsuper import QElement, bracket, functional_from_element, pi
from qslice.structure import (
    CenterNotDegreeZero,
    anticommutant_basis,
    centralizer,
    centralizer_of_functional,
    check_good,
    check_grading_properties,
    check_isotropic,
    form_on_g_minus1,
    gl_commutant,
    is_sl2_triple,
    mperp_decomposition,
    sl2_complete,
)


def test_centralizer_examples(datum):
    assert centralizer(datum((2, 2, 3)).E).sudim() == (19, 19)
    assert centralizer(datum((2,)).E).sudim() == (2, 2)
    assert centralizer(QElement(3)).sudim() == (9, 9)


def test_centralizer_of_functional_agrees(datum):
    for parts in [(2,), (1, 2), (1, 1, 2)]:
        d = datum(parts)
        assert centralizer_of_functional(d.chi) == centralizer(d.E)


def test_anticommutant_examples():
    (P,) = enumerate_pyramids(Partition.of((2,)))
    e = nilpotent_from_pyramid(P)
    zs = anticommutant_basis(e, P)
    G = grading_from_pyramid(P)
    # ad E odd part is the anticommutant; g_E must sit in nonnegative degrees
    assert sorted(G.degree_of(z) for z in zs) == [0, 2]
    (P1,) = enumerate_pyramids(Partition.of((1, 1, 1)))
    assert len(anticommutant_basis(nilpotent_from_pyramid(P1), P1)) == 9
    for P in enumerate_pyramids(Partition.of((2, 2, 3))):
        zs = anticommutant_basis(nilpotent_from_pyramid(P), P)
        assert len(zs) == 19


def test_check_good_examples():
    e = QElement.unit(2, 0, 1, 2)
    chi = functional_from_element(pi(e))
    rep = check_good(trivial_grading(2), chi)
    assert not rep.gg1 and not rep.good and rep.consistent
    rep0 = check_good(trivial_grading(2), functional_from_element(QElement(2)))
    assert rep0.good


class _TiltedCenter(Grading):
    # column gradings always put the identity in degree 0, so fake one that does not
    def degree_of(self, x):
        return 1


def test_center_must_have_degree_zero():
    with pytest.raises(CenterNotDegreeZero):
        check_good(_TiltedCenter(2, (0, 2)), functional_from_element(QElement(2)))


def test_non_good_pairs_equivalence():
    pairs = non_good_pairs()
    assert len(pairs) >= 10
    for _, G, chi in pairs:
        rep = check_good(G, chi)
        assert not rep.good
        assert rep.consistent


def test_sl2_examples(datum):
    d = datum((2,))
    assert d.h == QElement.unit(2, 0, 1, 1) - QElement.unit(2, 0, 2, 2)
    assert d.f == QElement.unit(2, 0, 2, 1)
    assert sl2_complete(QElement(2), trivial_grading(2)) == (QElement(2), QElement(2))
    for idx in range(3):
        d = datum((1, 2), idx)
        assert is_sl2_triple(d.e, d.h, d.f)
        assert d.grading.degree_of(d.h) in (0, None) and d.grading.degree_of(d.f) == -2


def test_gram_forms(datum):
    assert form_on_g_minus1(datum((2,))).even_indices == []
    g = form_on_g_minus1(datum((1, 2), 1))
    chk = g.check()
    assert all(chk.values())
    assert g.cross_zero


def test_isotropic_examples(choice):
    for mode in ("lagrangian", "zero"):
        c = choice((2,), 0, mode)
        assert c.l.dim == 0 and c.m.sudim() == (1, 1) and c.m_prime.sudim() == (1, 1)
    lag = choice((1, 2), 1, "lagrangian")
    assert lag.l.sudim() == (1, 1) and lag.m.sudim() == (2, 2) and lag.m_prime == lag.m
    zero = choice((1, 2), 1, "zero")
    assert zero.m.sudim() == (1, 1) and zero.m_prime.sudim() == (3, 3)


def test_mperp_examples(datum, choice):
    rep = mperp_decomposition(datum((2,)), choice((2,)))
    assert rep.sudim_mperp == (3, 3) and rep.sudim_image == (1, 1) and rep.sudim_pi_gF == (2, 2)
    rep0 = mperp_decomposition(datum((1, 1)), choice((1, 1)))
    assert rep0.sudim_mperp == (4, 4) and rep0.sudim_image == (0, 0)
    for idx in range(3):
        for mode in ("lagrangian", "zero"):
            assert mperp_decomposition(datum((1, 2), idx), choice((1, 2), idx, mode)).direct_sum


def test_grading_properties_examples(datum):
    r = check_grading_properties(datum((2,)))
    assert r.ok and r.sudim_gE == (2, 2) and r.sudim_g0_plus_g1 == (2, 2)
    for idx in range(3):
        r = check_grading_properties(datum((2, 2, 3), idx))
        assert r.ok and r.sudim_gE == (19, 19)
    assert check_grading_properties(datum((1, 1))).ok


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_sweep(N, datum, choice):
    for lam in partitions_of(N):
        for idx in range(len(enumerate_pyramids(lam))):
            d = datum(lam.parts, idx)
            rep = check_good(d.grading, d.chi)
            assert rep.good and rep.consistent and rep.gg3
            assert gl_commutant(d.e).dim == lam.sum_min()
            for mode in ("lagrangian", "zero"):
                c = choice(lam.parts, idx, mode)
                assert check_isotropic(d, c)["ok"]
                assert mperp_decomposition(d, c).direct_sum


def test_zhat_anticommute():
    for lam in partitions_of(4):
        for P in enumerate_pyramids(lam):
            e = nilpotent_from_pyramid(P)
            zs = anticommutant_basis(e, P)
            # odd copies anticommute with E: [E, Pi z] = 0
            E = pi(e)
            assert all(bracket(E, pi(z)).is_zero() for z in zs)
            assert Subspace.span([z.coords for z in zs], 32).dim == len(zs) == lam.sum_min()
