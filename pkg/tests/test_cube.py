from thrlog import simplicial as S
from thrlog.cube import (PhiCell, build_phi_cube, chain_cube_1, identity_map, pn_invariance_check, total_cofiber,
                         total_fiber, zero_complex_like, zero_map)
from thrlog.homology import normalized_chains
from thrlog.report import FAIL, PASS


def test_identity_cube_is_acyclic():
    C = normalized_chains(S.two_gon(4))
    assert total_cofiber(chain_cube_1(C, C, identity_map(C))).table(3).is_zero()


def test_cofiber_of_map_to_zero_is_suspension():
    C = normalized_chains(S.two_gon(4))
    Z = zero_complex_like(C)
    cube = chain_cube_1(C, Z, zero_map(C, Z))
    assert total_cofiber(cube).table(3).betti() == [0, 1, 1, 0]
    fib = total_fiber(cube).table().to_dict()
    assert {q: v["betti"] for q, v in fib.items()} == {"-1": 0, "0": 1, "1": 1, "2": 0}


def test_phi_vertex_emptiness():
    assert PhiCell(frozenset({0}), (3,), 1).nonempty
    assert not PhiCell(frozenset({1}), (3,), 1).nonempty
    assert not PhiCell(frozenset(), (-1,), 1).nonempty


def test_phi_cube_functorial():
    assert build_phi_cube(1, (0,), 3).functoriality_violations() == []


def test_small_phi_checks():
    assert pn_invariance_check(1, 1, 3).status == PASS
    assert pn_invariance_check(1, 0, 3, negative_control=True).status == FAIL
