"""The doubled group A x A^, its symplectic bicharacter, and maximal isotropic subgroups.

A maximal isotropic subgroup K is identified with the pair (H, beta) through

    K = {(x, xi) : x in H, xi|_H = beta(x)},

and that pair is the canonical identity used for equality and hashing.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable

import numpy as np

from .errors import NotIsotropicError, NotMaximalError, NotSubgroupError
from .groups import (
    Element,
    Group,
    Subgroup,
    annihilator,
    check_bound,
    cyclic_decompose,
    enumerate_subgroups,
)
from .quadratic import SymHom, enumerate_sym

PhasePoint = tuple[Element, Element]


def pp_add(A: Group, z: PhasePoint, w: PhasePoint) -> PhasePoint:
    return (A.add(z[0], w[0]), A.add(z[1], w[1]))


def pp_neg(A: Group, z: PhasePoint) -> PhasePoint:
    return (A.neg(z[0]), A.neg(z[1]))


def pp_sub(A: Group, z: PhasePoint, w: PhasePoint) -> PhasePoint:
    return (A.sub(z[0], w[0]), A.sub(z[1], w[1]))


def phase_points(A: Group) -> list[PhasePoint]:
    """All (x, xi) in canonical order: x-major, then xi."""
    return [(x, xi) for x in A.elements for xi in A.elements]


def symplectic_form(A: Group, z: PhasePoint, w: PhasePoint) -> int:
    """sigma((x, xi), (y, eta)) = xi(y) * conj(eta(x)), as an exponent of zeta."""
    (x, xi), (y, eta) = z, w
    return (A.pairing(y, xi) - A.pairing(x, eta)) % A.two_n


def _restriction_signature(H: Subgroup, xi: Element) -> tuple[int, ...]:
    A = H.group
    return tuple(A.pairing(g, xi) for g in cyclic_decompose(H).basis)


def _beta_signature(beta: SymHom, x: Element) -> tuple[int, ...]:
    pos = beta.subgroup.position
    row = beta.pair_table[pos[x]]
    return tuple(int(row[pos[g]]) for g in beta.decomp.basis)


@lru_cache(maxsize=None)
def _dual_by_signature(H: Subgroup) -> dict[tuple[int, ...], tuple[Element, ...]]:
    """Dual elements grouped by their restriction to H (each group is a coset of H-perp)."""
    by_sig = defaultdict(list)
    for xi in H.group.elements:
        by_sig[_restriction_signature(H, xi)].append(xi)
    return {k: tuple(v) for k, v in by_sig.items()}


@dataclass(frozen=True)
class IsotropicSubgroup:
    H: Subgroup
    beta: SymHom

    @property
    def group(self) -> Group:
        return self.H.group

    @cached_property
    def annihilator(self) -> Subgroup:
        return annihilator(self.H)

    @cached_property
    def fibers(self) -> dict[Element, tuple[Element, ...]]:
        """x -> the coset of H-perp lying over x (sorted)."""
        by_sig = _dual_by_signature(self.H)
        return {x: by_sig[_beta_signature(self.beta, x)] for x in self.H.sorted}

    def lift(self, x: Element) -> Element:
        """Canonical fiber representative over x."""
        return self.fibers[x][0]

    @cached_property
    def elements(self) -> tuple[PhasePoint, ...]:
        return tuple((x, xi) for x in self.H.sorted for xi in self.fibers[x])

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, z: PhasePoint) -> bool:
        x, xi = z
        if x not in self.H:
            return False
        return _restriction_signature(self.H, xi) == _beta_signature(self.beta, x)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        if not isinstance(other, IsotropicSubgroup):
            return NotImplemented
        return self.H == other.H and self.beta.matrix == other.beta.matrix

    def __hash__(self):
        return hash((self.H, self.beta.matrix))


def isotropic_from_pair(H: Subgroup, beta: SymHom) -> IsotropicSubgroup:
    if beta.subgroup != H:
        raise ValueError("beta is not defined on H")
    if not beta.is_valid():
        raise ValueError("beta is not a symmetric homomorphism")
    return IsotropicSubgroup(H, beta)


def pair_from_isotropic(A: Group, points: Iterable[PhasePoint]) -> IsotropicSubgroup:
    """Recover (H, beta) from an explicit maximal isotropic subgroup.

    beta(x)(y) is read off as xi(y) for any (x, xi) in K.
    """
    K = {(A.element(x), A.element(xi)) for x, xi in points}
    pts = sorted(K)
    ix = np.array([A.index(x) for x, _ in pts], dtype=np.int64)
    ixi = np.array([A.index(xi) for _, xi in pts], dtype=np.int64)
    codes = ix * A.N + ixi
    # codes of z - w for every pair (sub_table[a, b] = index of b - a)
    diffs = A.sub_table[ix[None, :], ix[:, None]] * A.N + A.sub_table[ixi[None, :], ixi[:, None]]
    if (A.zero, A.zero) not in K or not np.isin(diffs, codes).all():
        raise NotSubgroupError("K is not a subgroup of the phase space")
    M = A.pairing_table[np.ix_(ix, ixi)]  # [w, z] = <x_w, xi_z>
    if ((M - M.T) % A.two_n).any():
        raise NotIsotropicError("K is not isotropic")
    if len(K) != A.N:
        raise NotMaximalError(f"K has {len(K)} elements, expected N={A.N}")
    H = Subgroup(A, frozenset(x for x, _ in K))
    dec = cyclic_decompose(H)
    lift = {}
    for x, xi in sorted(K):
        lift.setdefault(x, xi)
    two_n = A.two_n
    mat = []
    for j, gj in enumerate(dec.basis):
        row = []
        for gk in dec.basis:
            # beta(g_k)(g_j) = c_jk * 2N / e_j
            row.append(A.pairing(gj, lift[gk]) * dec.orders[j] // two_n)
        mat.append(tuple(row))
    out = IsotropicSubgroup(H, SymHom(dec, tuple(mat)))
    assert out.element_set == frozenset(K)
    return out


def enumerate_maximal_isotropic(A: Group, bound: int | None = None) -> list[IsotropicSubgroup]:
    """One K per pair (H, beta), in subgroup order then Sym order."""
    check_bound(A, bound)
    return [IsotropicSubgroup(H, beta) for H in enumerate_subgroups(A, bound) for beta in enumerate_sym(H)]
