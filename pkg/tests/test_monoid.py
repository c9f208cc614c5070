import json

import pytest
from hypothesis import given, settings, strategies as st

from thrlog.monoid import (AffineMonoid, DimensionCapError, MonoidHom, direct_sum, exactify, integers,
                           is_saturated, natural_numbers, p_zero, sharpen, swap_matrix, units)


def test_natural_numbers_membership():
    n2 = natural_numbers(2)
    assert n2.contains((3, 1))
    assert not n2.contains((-1, 0))
    assert n2.is_sharp


def test_integers_are_all_units():
    z = integers(1)
    assert not z.is_sharp
    assert units(z).rank == 1
    bar, _ = sharpen(z)
    assert bar.rank == 0


def test_non_saturated_monoid_detected():
    m = AffineMonoid(1, ((2,), (3,)))
    assert not is_saturated(m)
    assert not m.contains((1,))
    assert m.contains((5,))


def test_p_zero_units_and_saturation():
    p = p_zero(2)
    assert is_saturated(p)
    assert units(p).rank == 1


def test_rank_cap_is_reported():
    with pytest.raises(DimensionCapError):
        is_saturated(natural_numbers(5), rank_cap=4)


def test_bad_involution_rejected():
    with pytest.raises(ValueError):
        natural_numbers(2, [[1, 1], [0, 1]])
    with pytest.raises(ValueError):
        AffineMonoid(2, ((1,),))


def test_json_round_trip():
    m = natural_numbers(2, swap_matrix(2))
    again = AffineMonoid.from_json(json.dumps(m.to_dict()))
    assert again.to_dict() == m.to_dict()


def test_direct_sum_rank():
    assert direct_sum(natural_numbers(1), integers(1)).rank == 2


def test_hom_respects_monoid():
    n = natural_numbers(1)
    assert MonoidHom(n, n, [[-1]]).validate()
    assert MonoidHom(n, n, [[2]]).validate() == []
    with pytest.raises(ValueError):
        MonoidHom(n, n, [[1, 0]])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
def test_exactification_triangle_on_swap_square(a, b, c, d):
    ex = exactify(natural_numbers(2, swap_matrix(2)))
    cell = (a, b, c - 3, d - 3)
    assert ex.carrier.w(ex.carrier.w(cell)) == cell
    assert ex.triangle_commutes((a, b, c, d))
