from math import comb

import pytest

from thrlog import simplicial as S
from thrlog.monoid import integers, natural_numbers, swap_matrix
from thrlog.report import FAIL, PASS


@pytest.mark.parametrize("weight", range(4))
def test_weight_piece_counts(weight):
    X = S.dihedral_nerve(natural_numbers(1), 5, weight=(weight,))
    assert [len(X.cells(q)) for q in range(6)] == [comb(weight + q, q) for q in range(6)]


@pytest.mark.parametrize("build", [
    lambda: S.dihedral_nerve(natural_numbers(1), 6, weight=(2,)),
    lambda: S.replete_nerve(integers(1), 4, 2),
    lambda: S.tensor_interval(natural_numbers(1), 6, weight=(2,)),
    lambda: S.real_nerve(integers(1), 3, 2),
    lambda: S.two_gon(5),
    lambda: S.delta1_sigma(5),
    lambda: S.segal_subdivide(S.dihedral_nerve(natural_numbers(1), 9, weight=(1,)), 4),
])
def test_relations_hold(build):
    assert verify(build()) == PASS


def verify(X):
    return S.verify_relations(X).status


def test_single_weight_off_the_orbit_is_not_closed():
    n2 = natural_numbers(2, swap_matrix(2))
    assert verify(S.dihedral_nerve(n2, 3, weight=(1, 2))) == FAIL
    assert verify(S.union(*(S.dihedral_nerve(n2, 3, weight=w) for w in S.weight_orbit(n2, (1, 2))))) == PASS


def test_sum_map_is_simplicial():
    X = S.tensor_interval(natural_numbers(1), 5, weight=(2,))
    assert S.sum_map(X).violations() == []


def test_reversal_on_cyclic_nerve():
    X = S.dihedral_nerve(natural_numbers(1), 3, weight=(3,))
    assert X.w(2, ((0,), (1,), (2,))) == ((0,), (2,), (1,))


def test_fixed_points_of_two_gon_are_two_points():
    F = S.fixed_points(S.segal_subdivide(S.two_gon(7), 3))
    assert len(F.cells(0)) == 2
