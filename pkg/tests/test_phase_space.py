import itertools

import pytest
from hypothesis import given

from conftest import UP_TO_8, UP_TO_16, gid, group_and_elements
from stabforge.errors import NotIsotropicError, NotMaximalError, NotSubgroupError
from stabforge.groups import Subgroup, cyclic_decompose, enumerate_subgroups, full_subgroup, make_group, trivial_subgroup
from stabforge.oracle import maximal_isotropic_sets
from stabforge.phase_space import (
    enumerate_maximal_isotropic,
    isotropic_from_pair,
    pair_from_isotropic,
    phase_points,
    pp_add,
    symplectic_form,
)
from stabforge.quadratic import SymHom, count_sym, enumerate_sym

Z2 = make_group([2])


def test_symplectic_examples():
    A = Z2
    for z in phase_points(A):
        assert symplectic_form(A, z, z) == 0
    # -1 is exponent 2 in units of exp(pi i / 2)
    assert symplectic_form(A, ((1,), (0,)), ((0,), (1,))) == 2
    V = make_group([2, 3])
    for x, y in itertools.product(V.elements, repeat=2):
        assert symplectic_form(V, (x, V.zero), (y, V.zero)) == 0


@given(group_and_elements(4))
def test_symplectic_is_alternating_bicharacter(data):
    A, x, xi, y, eta = data
    z, w = (x, xi), (y, eta)
    m = A.two_n
    assert (symplectic_form(A, z, w) + symplectic_form(A, w, z)) % m == 0
    u = (xi, y)
    lhs = symplectic_form(A, pp_add(A, z, u), w)
    assert lhs == (symplectic_form(A, z, w) + symplectic_form(A, u, w)) % m


def _sym(H, c):
    return SymHom(cyclic_decompose(H), c)


def test_isotropic_from_pair_examples():
    A = Z2
    K = isotropic_from_pair(trivial_subgroup(A), _sym(trivial_subgroup(A), ()))
    assert set(K.elements) == {((0,), (0,)), ((0,), (1,))}
    F = full_subgroup(A)
    assert set(isotropic_from_pair(F, _sym(F, ((0,),))).elements) == {((0,), (0,)), ((1,), (0,))}
    assert set(isotropic_from_pair(F, _sym(F, ((1,),))).elements) == {((0,), (0,)), ((1,), (1,))}


def test_isotropic_from_pair_rejects_foreign_beta():
    A = make_group([4])
    H = Subgroup(A, frozenset([(0,), (2,)]))
    with pytest.raises(ValueError):
        isotropic_from_pair(full_subgroup(A), _sym(H, ((1,),)))


def test_pair_from_isotropic_examples():
    A = Z2
    K = pair_from_isotropic(A, [((0,), (0,)), ((0,), (1,))])
    assert K.H.order == 1 and K.beta.matrix == ()
    K = pair_from_isotropic(A, [((0,), (0,)), ((1,), (1,))])
    assert K.H == full_subgroup(A) and K.beta.matrix == ((1,),)
    K = pair_from_isotropic(A, [((0,), (0,)), ((1,), (0,))])
    assert K.H == full_subgroup(A) and K.beta.matrix == ((0,),)


def test_pair_from_isotropic_errors():
    A = Z2
    with pytest.raises(NotSubgroupError):
        pair_from_isotropic(A, [((0,), (0,)), ((1,), (0,)), ((0,), (1,))])
    with pytest.raises(NotIsotropicError):
        pair_from_isotropic(A, phase_points(A))
    with pytest.raises(NotMaximalError):
        pair_from_isotropic(A, [((0,), (0,))])


@pytest.mark.parametrize("orders,n", [((2,), 3), ((3,), 4), ((2, 2), 15), ((4,), 7)])
def test_enumerate_maximal_isotropic_counts(orders, n):
    A = make_group(orders)
    Ks = enumerate_maximal_isotropic(A)
    assert len(Ks) == n == sum(count_sym(H) for H in enumerate_subgroups(A))


@pytest.mark.parametrize("orders", UP_TO_16, ids=gid)
def test_iso_sub_bijection(orders):
    A = make_group(orders)
    m = A.two_n
    Ks = enumerate_maximal_isotropic(A)
    assert len({K.element_set for K in Ks}) == len(Ks)
    pts = phase_points(A)
    for K in Ks:
        S = K.element_set
        assert len(S) == A.N
        assert (A.zero, A.zero) in S
        for z, w in itertools.product(K.elements, repeat=2):
            assert pp_add(A, z, w) in S
        assert pair_from_isotropic(A, K.elements) == K
        # fiber over each x is a coset of H-perp
        P = K.annihilator
        for x, fib in K.fibers.items():
            assert len(fib) == P.order
            assert {A.sub(xi, fib[0]) for xi in fib} == P.elements
        # membership law agrees with the element set
        for z in pts:
            assert (z in K) == (z in S)
    if A.N <= 8:
        for K in Ks:
            for z, w in itertools.product(K.elements, repeat=2):
                assert symplectic_form(A, z, w) % m == 0
            # maximality: any outside point breaks isotropy
            for z in pts:
                if z not in K:
                    assert any(symplectic_form(A, z, w) for w in K.elements)


@pytest.mark.parametrize("orders", UP_TO_8, ids=gid)
def test_maximal_isotropic_matches_oracle(orders):
    A = make_group(orders)
    mine = {K.element_set for K in enumerate_maximal_isotropic(A)}
    assert mine == set(maximal_isotropic_sets(A))


def test_isotropic_equality_uses_pair():
    A = make_group([2, 2])
    F = full_subgroup(A)
    syms = enumerate_sym(F)
    K1 = isotropic_from_pair(F, syms[3])
    K2 = pair_from_isotropic(A, list(K1.elements))
    assert K1 == K2 and hash(K1) == hash(K2)
    assert K1 != isotropic_from_pair(F, syms[4])
