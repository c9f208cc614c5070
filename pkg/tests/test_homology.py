import pytest

from thrlog import simplicial as S
from thrlog.homology import ChainComplex, mapping_cone, normalized_chains, sparse_invariant_factors, z2_equivalence_certificate
from thrlog.monoid import natural_numbers
from thrlog.report import FAIL, PASS


def test_two_gon_is_a_circle():
    assert normalized_chains(S.two_gon(4)).table(3).betti() == [1, 1, 0, 0]


def test_point_and_interval_contractible():
    assert normalized_chains(S.point(4)).table(3).betti() == [1, 0, 0, 0]
    assert normalized_chains(S.delta1_sigma(4)).table(3).betti() == [1, 0, 0, 0]


def test_d_squared_vanishes():
    C = normalized_chains(S.dihedral_nerve(natural_numbers(1), 6, weight=(3,)))
    assert C.check_d2() == [] or C.check_d2() is None


def test_sparse_factors_detect_torsion():
    # boundary of a 1-cell glued twice
    assert sparse_invariant_factors([{0: 2}], 1) == [2]


def test_homology_above_truncation_refused():
    C = normalized_chains(S.point(3))
    with pytest.raises(ValueError):
        C.homology(C.top)


def test_certificate_accepts_sum_collapse():
    X = S.tensor_interval(natural_numbers(1), 9, weight=(2,))
    assert z2_equivalence_certificate(S.sum_map(X), 3).status == PASS


def test_certificate_rejects_point_into_circle():
    f = S.SimplicialMap(S.point(9), S.two_gon(9), lambda q, c: ("A",))
    rep = z2_equivalence_certificate(f, 3)
    assert rep.status == FAIL
    assert rep.witness["degree"] == 1


def test_certificate_needs_depth():
    X = S.tensor_interval(natural_numbers(1), 5, weight=(1,))
    with pytest.raises(ValueError):
        z2_equivalence_certificate(S.sum_map(X), 3)
