"""Brute-force stabilizer-state oracle.

Independent of the (H, beta) parametrization and of the explicit
characters of second degree: maximal isotropic subgroups are found by
growing isotropic subgroups of the phase space one element at a time,
cocycles alpha are found by trying every value on a generating set, and the
stabilized state is the range of the projector (1/N) sum_z alpha(z) pi(z).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .groups import Group
from .phase_space import PhasePoint, phase_points, pp_add, symplectic_form
from .weyl import shift_matrix


def maximal_isotropic_sets(A: Group) -> list[frozenset]:
    """Every isotropic subgroup of A x A^ with N elements, as a set of points."""
    pts = phase_points(A)
    zero = (A.zero, A.zero)

    def join(S: frozenset, g: PhasePoint) -> frozenset:
        out = set(S)
        cur = g
        while cur not in S:
            out.update(pp_add(A, s, cur) for s in S)
            cur = pp_add(A, cur, g)
        return frozenset(out)

    start = frozenset([zero])
    seen = {start}
    frontier = [start]
    maximal = []
    while frontier:
        nxt = []
        for S in frontier:
            if len(S) == A.N:
                maximal.append(S)
                continue
            for g in pts:
                if g in S or any(symplectic_form(A, g, s) for s in S):
                    continue
                T = join(S, g)
                if T not in seen:
                    seen.add(T)
                    nxt.append(T)
        frontier = nxt
    return sorted(maximal, key=sorted)


def cocycles(A: Group, K: frozenset) -> list[dict]:
    """All alpha: K -> Z_{2N} with alpha(z+w) = alpha(z) + alpha(w) - <x, eta>."""
    m = A.two_n
    zero = (A.zero, A.zero)
    gens = []
    span = {zero}
    for g in sorted(K):
        if g not in span:
            gens.append(g)
            # closure of span + <g>
            new = set(span)
            frontier = list(span)
            while frontier:
                nxt = []
                for s in frontier:
                    t = pp_add(A, s, g)
                    if t not in new:
                        new.add(t)
                        nxt.append(t)
                frontier = nxt
            span = new

    def propagate(vals):
        alpha = {zero: 0}
        queue = [zero]
        while queue:
            z = queue.pop()
            for g, a in zip(gens, vals):
                w = pp_add(A, z, g)
                v = (alpha[z] + a - A.pairing(z[0], g[1])) % m
                if w in alpha:
                    if alpha[w] != v:
                        return None
                else:
                    alpha[w] = v
                    queue.append(w)
        return alpha

    def valid(alpha):
        return all(
            (alpha[pp_add(A, z, w)] - alpha[z] - alpha[w] + A.pairing(z[0], w[1])) % m == 0
            for z in K
            for w in K
        )

    # per-generator candidates consistent on its own cyclic subgroup
    cand = []
    for g in gens:
        ok = []
        for a in range(m):
            cur, val, good = zero, 0, True
            seen = {}
            while True:
                seen[cur] = val
                nxt = pp_add(A, cur, g)
                val = (val + a - A.pairing(cur[0], g[1])) % m
                cur = nxt
                if cur in seen:
                    good = seen[cur] == val
                    break
            if good:
                ok.append(a)
        cand.append(ok)
    out = []
    for vals in itertools.product(*cand):
        alpha = propagate(vals)
        if alpha is not None and valid(alpha):
            out.append(alpha)
    return out


@dataclass
class OracleState:
    K: frozenset
    alpha: dict
    vector: np.ndarray


def _state_key(v: np.ndarray) -> tuple:
    i = int(np.argmax(np.abs(v) > 1e-9))
    w = v * np.conj(v[i]) / abs(v[i])
    return tuple(np.round(np.concatenate([w.real, w.imag]), 8) + 0.0)


def brute_force_states(A: Group) -> list[OracleState]:
    """Every stabilizer state, with its (K, alpha), via projector averaging."""
    N = A.N
    mats = {z: shift_matrix(A, z) for z in phase_points(A)}
    out = []
    keys = set()
    for K in maximal_isotropic_sets(A):
        for alpha in cocycles(A, K):
            P = sum(A.phase(alpha[z]) * mats[z] for z in K) / N
            if not np.allclose(P @ P, P, atol=1e-10) or abs(np.trace(P) - 1) > 1e-10:
                raise AssertionError("projector average is not a rank-one projector")
            w, U = np.linalg.eigh((P + P.conj().T) / 2)
            v = U[:, -1]
            key = _state_key(v)
            if key in keys:
                raise AssertionError("two stabilizer groups share a state")
            keys.add(key)
            out.append(OracleState(K, alpha, v))
    return out


def brute_force_count(A: Group) -> int:
    return len(brute_force_states(A))
