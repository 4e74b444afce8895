"""Invariant suites run by ``stabforge selftest``.

Each suite takes a group, a seeded generator and a tolerance and raises
AssertionError on the first violated invariant.  Exhaustive suites skip
groups above their size limit.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EnumerationBoundError
from .groups import (
    Group,
    annihilator,
    cyclic_decompose,
    enumerate_subgroups,
    full_subgroup,
    generated_subgroup,
)
from .oracle import brute_force_count, maximal_isotropic_sets
from .phase_space import enumerate_maximal_isotropic, pair_from_isotropic, phase_points
from .quadratic import characters, count_sym, enumerate_ch2
from .stabilizer import (
    ModuliClass,
    _rebase,
    count_states,
    cst_criterion,
    descriptor_class,
    enumerate_states,
    fiber_identity,
    fiber_inverse,
    fiber_product,
    group_from_sstate,
    moduli_class,
    sstate_from_group,
    sstate_synthesize,
    verify_stabilized,
)
from .wehrl import BUILTIN, berezin_lieb, fourier_husimi, husimi, verify_max_bound, verify_min_bound
from .weyl import (
    clifford_conjugate,
    maximally_mixed,
    multiplication_matrix,
    pure,
    random_density,
    random_wavefunction,
    shift_apply,
    shift_compose_phase,
    shift_matrix,
)


class Skip(Exception):
    pass


@dataclass
class SuiteResult:
    suite: str
    group: str
    status: str  # "PASS", "FAIL" or "SKIP"
    seconds: float
    message: str = ""


def _limit(A: Group, n: int, what: str):
    if A.N > n:
        raise Skip(f"{what} is exhaustive and runs only for N <= {n}")


def suite_pairing(A: Group, rng, tol):
    _limit(A, 16, "pairing check")
    m = A.two_n
    for x, y, xi in itertools.product(A.elements, repeat=3):
        assert (A.pairing(A.add(x, y), xi) - A.pairing(x, xi) - A.pairing(y, xi)) % m == 0, "pairing not additive"
    for x, xi in itertools.product(A.elements, repeat=2):
        assert A.pairing(x, xi) == A.pairing(xi, x), "pairing not symmetric"
        assert A.pairing(x, xi) % 2 == 0, "pairing value is not an N-th root of unity"


def subgroups_by_generators(A: Group) -> set[frozenset]:
    """Every subgroup, as the span of rank(A) elements (closure oracle)."""
    return {
        generated_subgroup(A, gens).elements
        for gens in itertools.combinations_with_replacement(A.elements, A.rank)
    }


def suite_subgroups(A: Group, rng, tol):
    _limit(A, 16, "subgroup lattice check")
    subs = enumerate_subgroups(A)
    assert len({H.elements for H in subs}) == len(subs), "duplicate subgroups"
    assert {H.elements for H in subs} == subgroups_by_generators(A), "subgroup list differs from closure oracle"
    for H in subs:
        P = annihilator(H)
        assert H.order * P.order == A.N, "#H #H-perp != N"
        assert annihilator(P) == H, "H-perp-perp != H"
        dec = cyclic_decompose(H)
        assert sorted(dec.coords) == list(H.sorted), "decomposition is not onto H"
        for x, y in itertools.product(H.sorted, repeat=2):
            k = tuple((a + b) % e for a, b, e in zip(dec.coords[x], dec.coords[y], dec.orders))
            assert dec.coords[A.add(x, y)] == k, "decomposition coordinates are not additive"


def suite_ch2(A: Group, rng, tol):
    _limit(A, 16, "second-degree character check")
    for H in enumerate_subgroups(A):
        chs = enumerate_ch2(H)
        assert len(chs) == len(characters(H)) * count_sym(H), "#Ch2 != #chars * #Sym"
        assert len(set(chs)) == len(chs), "duplicate second-degree characters"
        for h in chs:
            assert h.relation_holds(), "h(x+y) != h(x) h(y) beta(x)(y)"


def suite_isotropic(A: Group, rng, tol):
    _limit(A, 16, "isotropic bijection check")
    Ks = enumerate_maximal_isotropic(A)
    assert len(set(Ks)) == len(Ks), "duplicate (H, beta) pairs"
    mine = {K.element_set for K in Ks}
    if A.N <= 8:
        assert mine == set(maximal_isotropic_sets(A)), "maximal isotropic subgroups differ from oracle"
    for K in Ks:
        assert len(K.elements) == A.N, "#K != N"
        back = pair_from_isotropic(A, K.elements)
        assert back == K, "(H, beta) -> K -> (H, beta) round trip failed"


def suite_weyl(A: Group, rng, tol):
    psi = random_wavefunction(A, rng)
    pts = phase_points(A)
    for _ in range(20):
        z, w = pts[rng.integers(len(pts))], pts[rng.integers(len(pts))]
        k, zw = shift_compose_phase(A, z, w)
        lhs = shift_apply(z, shift_apply(w, psi)).amplitudes
        rhs = A.phase(k) * shift_apply(zw, psi).amplitudes
        assert np.allclose(lhs, rhs, atol=tol), "shift composition law fails"
        assert abs(np.linalg.norm(lhs) - 1) < tol, "shift is not unitary"
    if A.N <= 8:
        for h in enumerate_ch2(full_subgroup(A)):
            C = multiplication_matrix(h)
            for z in pts:
                k, Sz = clifford_conjugate(h, z)
                assert np.allclose(
                    C @ shift_matrix(A, z) @ C.conj().T, A.phase(k) * shift_matrix(A, Sz), atol=tol
                ), "Clifford conjugation identity fails"


def suite_stabilizer(A: Group, rng, tol):
    _limit(A, 8, "stabilizer round-trip check")
    recs = enumerate_states(A)
    assert len({r.moduli.key() for r in recs}) == len(recs), "duplicate moduli classes"
    assert len({r.group for r in recs}) == len(recs), "duplicate stabilizer groups"
    for r in recs:
        G = r.group
        assert G.cocycle_holds(), "alpha violates the cocycle law"
        phi = sstate_synthesize(r.descriptor)
        assert verify_stabilized(G, phi, tol), "state not stabilized by its group"
        assert cst_criterion(G, phi, tol), "V_phi phi does not match alpha on K"
        d2 = sstate_from_group(G)
        assert descriptor_class(d2) == r.moduli, "group -> state lands in another moduli class"
        ov = abs(np.vdot(phi.amplitudes, sstate_synthesize(d2).amplitudes))
        assert abs(ov - 1) < 1e-12, "round trip changes the state"
        assert group_from_sstate(d2) == G, "state -> group round trip failed"


def suite_counting(A: Group, rng, tol):
    _limit(A, 12, "brute-force counting oracle")
    n = count_states(A)
    assert n == len(enumerate_states(A)), "count formula != enumeration length"
    assert n == brute_force_count(A), "count formula != brute-force oracle"


def suite_fibers(A: Group, rng, tol):
    _limit(A, 8, "fiber group axioms")
    by_fiber: dict = {}
    for r in enumerate_states(A):
        m = r.moduli
        by_fiber.setdefault((m.H, m.y), []).append(m)
    for (H, y), cls in by_fiber.items():
        e = fiber_identity(H, y)
        assert e in cls, "identity is not in its fiber"
        for a in cls:
            assert fiber_product(a, e) == a, "identity law fails"
            assert fiber_product(a, fiber_inverse(a)) == e, "inverse law fails"
        for a, b in itertools.product(cls, repeat=2):
            ab = fiber_product(a, b)
            assert ab in cls, "product leaves the fiber"
            assert ab == fiber_product(b, a), "fiber product is not commutative"
        for a, b, c in itertools.islice(itertools.product(cls, repeat=3), 200):
            assert fiber_product(fiber_product(a, b), c) == fiber_product(a, fiber_product(b, c)), "not associative"
        # the product does not depend on the representatives
        for a, b in itertools.product(cls[:4], repeat=2):
            for u in H.sorted:
                y2 = A.add(a.y, u)
                alt = ModuliClass(H, y2, _rebase(a.y, a.h, y2))
                assert moduli_class(y2, alt.h) == a, "rebasing leaves the class"
                assert fiber_product(alt, b) == fiber_product(a, b), "product depends on representatives"


def suite_wehrl(A: Group, rng, tol):
    Gs = [BUILTIN["-t*log(t)"], BUILTIN["t-t^2"]]
    for _ in range(10):
        phi = random_wavefunction(A, rng)
        rho = random_density(A, rng, rank=int(rng.integers(1, A.N + 1)))
        u = husimi(phi, rho)
        assert u.min() >= -tol and u.max() <= 1 + 1e-12, "Husimi out of range"
        assert abs(u.sum() / A.N - 1) < tol, "Husimi average != 1"
        fourier_husimi(phi, rho)
        for G in Gs:
            verify_min_bound(G, phi, rho, tol)
            berezin_lieb(G, phi, rho, tol)
            verify_max_bound(G, phi, pure(random_wavefunction(A, rng)), tol)
        assert berezin_lieb(Gs[0], phi, maximally_mixed(A), tol).is_equality, "I/N is not an equality case"
    if A.N > 8:
        return
    pts = phase_points(A)
    for r in enumerate_states(A):
        phi = sstate_synthesize(r.descriptor)
        zs = pts if A.N <= 4 else [pts[i] for i in rng.choice(len(pts), 4, replace=False)]
        for z in zs:
            rho = pure(shift_apply(z, phi))
            for G in Gs:
                rep = verify_min_bound(G, phi, rho, tol)
                assert rep.is_equality and rep.witness is not None, "stabilizer pair misses the minimum"


SUITES: dict[str, Callable] = {
    "pairing": suite_pairing,
    "subgroups": suite_subgroups,
    "ch2": suite_ch2,
    "isotropic": suite_isotropic,
    "weyl": suite_weyl,
    "stabilizer": suite_stabilizer,
    "counting": suite_counting,
    "fibers": suite_fibers,
    "wehrl": suite_wehrl,
}


def run_suite(name: str, A: Group, seed: int = 0, tol: float = 1e-9) -> SuiteResult:
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    try:
        SUITES[name](A, rng, tol)
    except (Skip, EnumerationBoundError) as exc:
        return SuiteResult(name, str(A), "SKIP", time.perf_counter() - t0, str(exc))
    except Exception as exc:  # any failure, including theory checks
        return SuiteResult(name, str(A), "FAIL", time.perf_counter() - t0, f"{type(exc).__name__}: {exc}")
    return SuiteResult(name, str(A), "PASS", time.perf_counter() - t0)


def run_all(groups: list[Group], seed: int = 0, tol: float = 1e-9) -> list[SuiteResult]:
    return [run_suite(name, A, seed, tol) for A in groups for name in SUITES]
