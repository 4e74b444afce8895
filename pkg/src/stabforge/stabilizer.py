"""Stabilizer groups, S-states and the moduli space of stabilizer states.

A stabilizer group is stored as (K, alpha) with K a maximal isotropic
subgroup and alpha: K -> <zeta> obeying the cocycle law

    alpha(z + w) = alpha(z) alpha(w) conj(eta(x)),   z = (x, xi), w = (y, eta).

An S-state is h0(x - y) / sqrt(#H) with h0 a character of second degree on H
extended by zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np

from .errors import FiberMismatchError, NotSecondDegreeError, NotStabilizerGroupError
from .groups import (
    Element,
    Group,
    Subgroup,
    annihilator,
    check_bound,
    cyclic_decompose,
    enumerate_subgroups,
    extend_character,
    is_subgroup,
)
from .phase_space import IsotropicSubgroup, PhasePoint, pp_add
from .quadratic import Char2, SubChar2, SymHom, count_sym, enumerate_ch2, make_char2
from .weyl import TOL, ExactForm, WaveFunction, cst, shift_apply


@dataclass(frozen=True)
class StabilizerGroup:
    K: IsotropicSubgroup
    alpha: tuple[int, ...]  # aligned with K.elements

    @property
    def group(self) -> Group:
        return self.K.group

    @cached_property
    def table(self) -> dict[PhasePoint, int]:
        return dict(zip(self.K.elements, self.alpha))

    def __call__(self, z: PhasePoint) -> int:
        return self.table[z]

    def cocycle_holds(self) -> bool:
        A = self.group
        m = A.two_n
        t = self.table
        for z in self.K.elements:
            for w in self.K.elements:
                if (t[pp_add(A, z, w)] - t[z] - t[w] + A.pairing(z[0], w[1])) % m:
                    return False
        return True

    def validate(self) -> None:
        if len(self.alpha) != len(self.K.elements):
            raise NotStabilizerGroupError("not a stabilizer group: alpha table has wrong size")
        if not self.cocycle_holds():
            raise NotStabilizerGroupError("not a stabilizer group: alpha violates the cocycle law")

    def __eq__(self, other):
        if not isinstance(other, StabilizerGroup):
            return NotImplemented
        return self.K == other.K and self.alpha == other.alpha

    def __hash__(self):
        return hash((self.K, self.alpha))


def stabilizer_group_from_table(K: IsotropicSubgroup, alpha: dict[PhasePoint, int]) -> StabilizerGroup:
    m = K.group.two_n
    try:
        vals = tuple(alpha[z] % m for z in K.elements)
    except KeyError as exc:
        raise NotStabilizerGroupError(f"not a stabilizer group: alpha missing at {exc}") from None
    G = StabilizerGroup(K, vals)
    G.validate()
    return G


@dataclass(frozen=True)
class SStateDescriptor:
    y: Element
    h0: SubChar2

    @property
    def H(self) -> Subgroup:
        return self.h0.support

    @property
    def h(self) -> Char2:
        return self.h0.restriction

    @property
    def normalization(self) -> float:
        return 1 / math.sqrt(self.H.order)


@dataclass(frozen=True)
class ModuliClass:
    """The class [(y, h)] in A x_H Ch2(H); construct via `moduli_class` for canonical form."""

    H: Subgroup
    y: Element
    h: Char2

    def key(self):
        return (self.H.sort_key(), self.y, self.h.values)


def _rebase(y: Element, h: Char2, new_y: Element) -> Char2:
    """The h' with (y, h) ~ (new_y, h'), i.e. h' = h * beta(new_y - y)."""
    A = h.subgroup.group
    m = A.two_n
    u = A.sub(new_y, y)
    if u == A.zero:
        return h
    vals = tuple((v + h.beta.pair(u, x)) % m for x, v in zip(h.subgroup.sorted, h.values))
    return Char2(h.subgroup, vals, h.beta)


@lru_cache(maxsize=65536)
def coset_min(H: Subgroup, y: Element) -> Element:
    A = H.group
    return min(A.add(y, u) for u in H.sorted)


def moduli_class(y: Element, h: Char2) -> ModuliClass:
    """Canonical representative: smallest y in its coset, h rebased to it."""
    y0 = coset_min(h.subgroup, y)
    return ModuliClass(h.subgroup, y0, _rebase(y, h, y0))


def equivalent(a: tuple[Element, Char2], b: tuple[Element, Char2]) -> bool:
    (y, h), (y2, h2) = a, b
    if h.subgroup != h2.subgroup:
        return False
    A = h.subgroup.group
    if A.sub(y, y2) not in h.subgroup:
        return False
    return _rebase(y2, h2, y).values == h.values


def descriptor_class(desc: SStateDescriptor) -> ModuliClass:
    return moduli_class(desc.y, desc.h)


def sstate_synthesize(desc: SStateDescriptor) -> WaveFunction:
    """phi(x) = h0(x - y) / sqrt(#H), in exact form."""
    return WaveFunction.from_exact(ExactForm(desc.y, desc.H, desc.h.values, desc.normalization))


def group_from_sstate(desc: SStateDescriptor) -> StabilizerGroup:
    """The unique stabilizer group: K from (H, beta), alpha(x, xi) = conj(h0(-x) xi(y))."""
    h = desc.h
    A = h.subgroup.group
    K = IsotropicSubgroup(desc.H, h.beta)
    m = A.two_n
    alpha = tuple(-(h(A.neg(x)) + A.pairing(desc.y, xi)) % m for x, xi in K.elements)
    return StabilizerGroup(K, alpha)


def sstate_from_group(G: StabilizerGroup) -> SStateDescriptor:
    """Constructive inverse: solve for y on H-perp, then read h off alpha."""
    G.validate()
    K = G.K
    A = K.group
    m = A.two_n
    H = K.H
    Hperp = annihilator(H)
    # (i) y with xi(y) = conj(alpha(0, xi)) on H-perp
    chi = {xi: -G((A.zero, xi)) % m for xi in Hperp.sorted}
    y = extend_character(Hperp, chi)
    # (ii) h(-x) = conj(alpha(x, xi) xi(y)), independent of the lift xi
    table = {}
    for x in H.sorted:
        lifts = K.fibers[x]
        vals = {-(G((x, xi)) + A.pairing(y, xi)) % m for xi in lifts[:2]}
        if len(vals) != 1:
            raise NotStabilizerGroupError("not a stabilizer group: h depends on the lift")
        table[A.neg(x)] = vals.pop()
    try:
        h = make_char2(H, table)
    except NotSecondDegreeError:
        raise NotStabilizerGroupError("not a stabilizer group: recovered h is not in Ch2(H)") from None
    if h.beta.matrix != K.beta.matrix:
        raise NotStabilizerGroupError("not a stabilizer group: beta mismatch")
    return SStateDescriptor(y, SubChar2(h))


def verify_stabilized(G: StabilizerGroup, phi: WaveFunction, tol: float = TOL) -> bool:
    """True iff alpha(z) pi(z) phi = phi for every z in K."""
    if abs(phi.norm() - 1) > tol:
        raise ValueError("verify_stabilized needs a normalized wave function")
    A = G.group
    v = phi.amplitudes
    for z, a in zip(G.K.elements, G.alpha):
        w = A.phase(a) * shift_apply(z, phi).amplitudes
        if np.linalg.norm(w - v) > tol:
            return False
    return True


def cst_criterion(G: StabilizerGroup, phi: WaveFunction, tol: float = TOL) -> bool:
    """V_phi phi equals alpha on K and vanishes off K."""
    A = G.group
    V = cst(phi, phi)
    expected = np.zeros((A.N, A.N), dtype=complex)
    for (x, xi), a in zip(G.K.elements, G.alpha):
        expected[A.index(x), A.index(xi)] = A.phase(a)
    return float(np.max(np.abs(V - expected))) <= tol


def is_sstate(phi: WaveFunction, tol: float = TOL) -> Optional[SStateDescriptor]:
    """Recognize an S-state; returns the canonical descriptor or None."""
    A = phi.group
    v = phi.amplitudes
    nrm = float(np.linalg.norm(v))
    if nrm == 0:
        raise ValueError("is_sstate needs a nonzero wave function")
    idx = np.nonzero(np.abs(v) > tol * nrm)[0]
    supp = [A.elements[i] for i in idx]
    y = supp[0]
    Hset = frozenset(A.sub(x, y) for x in supp)
    if not is_subgroup(A, Hset):
        return None
    H = Subgroup(A, Hset)
    mods = np.abs(v[idx])
    if np.max(mods) - np.min(mods) > tol * nrm:
        return None
    base = v[A.index(y)]
    table = {}
    for u in H.sorted:
        r = v[A.index(A.add(y, u))] / base
        k = int(round(np.angle(r) * A.N / np.pi)) % A.two_n
        if abs(r - A.roots[k]) > tol * 10:
            return None
        table[u] = k
    try:
        h = make_char2(H, table)
    except NotSecondDegreeError:
        return None
    return SStateDescriptor(y, SubChar2(h))


@dataclass(frozen=True)
class StateRecord:
    moduli: ModuliClass
    descriptor: SStateDescriptor
    group: StabilizerGroup


def enumerate_states(A: Group, bound: int | None = None) -> list[StateRecord]:
    """One record per moduli class, over all subgroups H of A."""
    check_bound(A, bound)
    out = []
    for H in enumerate_subgroups(A, bound):
        reps = [y for y in A.elements if coset_min(H, y) == y]
        chs = enumerate_ch2(H)
        for y in reps:
            for h in chs:
                desc = SStateDescriptor(y, SubChar2(h))
                out.append(StateRecord(ModuliClass(H, y, h), desc, group_from_sstate(desc)))
    return out


def count_states(A: Group, bound: int | None = None) -> int:
    """#A * sum over subgroups H of #Sym(H)."""
    return A.N * sum(count_sym(H) for H in enumerate_subgroups(A, bound))


def trivial_char2(H: Subgroup) -> Char2:
    dec = cyclic_decompose(H)
    m = len(dec.orders)
    return Char2(H, (0,) * H.order, SymHom(dec, tuple((0,) * m for _ in range(m))))


def fiber_identity(H: Subgroup, y: Element) -> ModuliClass:
    return moduli_class(y, trivial_char2(H))


def fiber_inverse(a: ModuliClass) -> ModuliClass:
    return moduli_class(a.y, a.h.conj())


def fiber_product(a: ModuliClass, b: ModuliClass) -> ModuliClass:
    """[(y, h)] . [(y', h')] = [(y, h h' beta'(y - y'))] on a common fiber."""
    if a.H != b.H:
        raise FiberMismatchError("not in the same fiber: different subgroups")
    A = a.H.group
    u = A.sub(a.y, b.y)
    if u not in a.H:
        raise FiberMismatchError("not in the same fiber")
    m = A.two_n
    prod = a.h * b.h
    if u == A.zero:
        return moduli_class(a.y, prod)
    vals = tuple((v + b.h.beta.pair(u, x)) % m for x, v in zip(a.H.sorted, prod.values))
    return moduli_class(a.y, Char2(a.H, vals, prod.beta))
