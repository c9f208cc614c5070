from hypothesis import given, settings, strategies as st

from thrlog import lattice as lat
from thrlog.snf import invariant_factors, smith_normal_form, unimodular_inverse

matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_known_diagonal():
    _, d, _ = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert [d[i][i] for i in range(3)] == [2, 6, 12]


def test_zero_matrix_has_no_factors():
    assert invariant_factors([[0, 0], [0, 0]]) == []


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_uav_is_diagonal_and_recomposes(a):
    u, d, v = smith_normal_form(a)
    assert lat.matmul(lat.matmul(u, a), v) == d
    assert lat.matmul(lat.matmul(unimodular_inverse(u), d), unimodular_inverse(v)) == a
    diag = [d[i][i] for i in range(min(len(a), len(a[0]))) if d[i][i]]
    assert all(x > 0 for x in diag)
    assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_strategies_agree(a):
    assert invariant_factors(a, "min") == invariant_factors(a, "first")
