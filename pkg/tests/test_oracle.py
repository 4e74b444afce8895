"""The brute-force oracle checked against hand-derived facts, independent of the library's formulas."""

import numpy as np
import pytest

from conftest import gid
from stabforge.groups import make_group
from stabforge.oracle import brute_force_states, cocycles, maximal_isotropic_sets
from stabforge.weyl import shift_matrix


def test_z2_states_are_the_six_pauli_eigenstates():
    A = make_group([2])
    vecs = [s.vector for s in brute_force_states(A)]
    r = 1 / np.sqrt(2)
    known = [[1, 0], [0, 1], [r, r], [r, -r], [r, 1j * r], [r, -1j * r]]
    for k in known:
        assert sum(abs(abs(np.vdot(k, v)) - 1) < 1e-12 for v in vecs) == 1
    assert len(vecs) == 6


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_prime_cyclic_has_d_plus_1_lagrangians(d):
    # each line through the origin of Z_d^2
    A = make_group([d])
    assert len(maximal_isotropic_sets(A)) == d + 1
    for K in maximal_isotropic_sets(A):
        assert len(cocycles(A, K)) == d


def test_two_qubit_counts():
    A = make_group([2, 2])
    Ks = maximal_isotropic_sets(A)
    assert len(Ks) == 15
    assert sum(len(cocycles(A, K)) for K in Ks) == 60


@pytest.mark.parametrize("orders", [(2,), (3,), (4,), (2, 2)], ids=gid)
def test_oracle_vectors_are_stabilized(orders):
    A = make_group(orders)
    for s in brute_force_states(A):
        v = s.vector
        assert abs(np.linalg.norm(v) - 1) < 1e-12
        for z, a in s.alpha.items():
            assert np.allclose(A.phase(a) * shift_matrix(A, z) @ v, v)
