"""Symmetric homomorphisms and characters of second degree on subgroups.

Everything is computed in the cyclic coordinates of the subgroup (see
`cyclic_decompose`) and stored as exponent tables over ambient elements,
so downstream code never sees the decomposition.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Mapping

import numpy as np

from .errors import NotSecondDegreeError
from .groups import (
    CyclicDecomposition,
    Element,
    Group,
    Subgroup,
    cyclic_decompose,
    full_subgroup,
)


@dataclass(frozen=True)
class SymHom:
    """beta(x)_j = sum_k matrix[j][k] * x_k mod e_j, in H-coordinates.

    The associated bicharacter is beta(x)(y) = exp(2 pi i sum_{j,k} c_jk x_k y_j / e_j).
    """

    decomp: CyclicDecomposition
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        e = self.decomp.orders
        m = tuple(tuple(int(v) % e[j] for v in row) for j, row in enumerate(self.matrix))
        object.__setattr__(self, "matrix", m)

    @property
    def subgroup(self) -> Subgroup:
        return self.decomp.subgroup

    @property
    def group(self) -> Group:
        return self.decomp.subgroup.group

    def is_valid(self) -> bool:
        e = self.decomp.orders
        c = self.matrix
        m = len(e)
        if len(c) != m or any(len(row) != m for row in c):
            return False
        for j in range(m):
            for k in range(m):
                if c[j][k] % (e[j] // math.gcd(e[j], e[k])):
                    return False
                # c_jk / e_j == c_kj / e_k  (mod 1)
                if (c[j][k] * e[k] - c[k][j] * e[j]) % (e[j] * e[k]):
                    return False
        return True

    def apply(self, x: Element) -> tuple[int, ...]:
        """beta(x) as coordinates in the dual of H (Z_{e_1} x ... x Z_{e_m})."""
        e = self.decomp.orders
        k = self.decomp.coords[x]
        return tuple(sum(c * kk for c, kk in zip(row, k)) % e[j] for j, row in enumerate(self.matrix))

    @cached_property
    def _weights(self) -> tuple[int, ...]:
        two_n = self.group.two_n
        return tuple(two_n // e for e in self.decomp.orders)

    def pair(self, x: Element, y: Element) -> int:
        """beta(x)(y) as an exponent of zeta."""
        coords = self.decomp.coords
        bx = self.apply(x)
        ky = coords[y]
        return sum(b * k * w for b, k, w in zip(bx, ky, self._weights)) % self.group.two_n

    @cached_property
    def pair_table(self) -> np.ndarray:
        """beta(x)(y) exponents indexed by positions in ``subgroup.sorted``."""
        dec = self.decomp
        H = dec.subgroup
        if not dec.orders:
            return np.zeros((H.order, H.order), dtype=np.int64)
        K = np.array([dec.coords[x] for x in H.sorted], dtype=np.int64)
        e = np.array(dec.orders, dtype=np.int64)
        BX = (K @ np.array(self.matrix, dtype=np.int64).T) % e
        return ((BX * (self.group.two_n // e)) @ K.T) % self.group.two_n

    def __add__(self, other: "SymHom") -> "SymHom":
        assert self.decomp == other.decomp
        return SymHom(
            self.decomp,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.matrix, other.matrix)),
        )

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.matrix for v in row)


def enumerate_sym(H: Subgroup) -> list[SymHom]:
    """All of Sym(H); there are prod e_j * prod_{j<k} gcd(e_j, e_k) of them."""
    dec = cyclic_decompose(H)
    e = dec.orders
    m = len(e)
    pairs = [(j, k) for j in range(m) for k in range(j + 1, m)]
    out = []
    for diag in itertools.product(*(range(ej) for ej in e)):
        for offs in itertools.product(*(range(math.gcd(e[j], e[k])) for j, k in pairs)):
            c = [[0] * m for _ in range(m)]
            for j in range(m):
                c[j][j] = diag[j]
            for (j, k), t in zip(pairs, offs):
                g = math.gcd(e[j], e[k])
                c[j][k] = t * (e[j] // g)
                c[k][j] = t * (e[k] // g)
            out.append(SymHom(dec, tuple(tuple(r) for r in c)))
    return out


def count_sym(H: Subgroup) -> int:
    e = cyclic_decompose(H).orders
    return math.prod(e) * math.prod(math.gcd(a, b) for a, b in itertools.combinations(e, 2))


@dataclass(frozen=True)
class Char2:
    """h: H -> U(1) with h(x+y) = h(x) h(y) beta(x)(y).

    ``values`` is aligned with ``subgroup.sorted`` and holds exponents of zeta.
    """

    subgroup: Subgroup
    values: tuple[int, ...]
    beta: SymHom

    def __call__(self, x: Element) -> int:
        return self.values[self.subgroup.position[x]]

    def table(self) -> dict[Element, int]:
        return dict(zip(self.subgroup.sorted, self.values))

    def __mul__(self, other: "Char2") -> "Char2":
        m = self.subgroup.group.two_n
        return Char2(
            self.subgroup,
            tuple((a + b) % m for a, b in zip(self.values, other.values)),
            self.beta + other.beta,
        )

    def conj(self) -> "Char2":
        m = self.subgroup.group.two_n
        neg = SymHom(self.beta.decomp, tuple(tuple(-v for v in row) for row in self.beta.matrix))
        return Char2(self.subgroup, tuple(-v % m for v in self.values), neg)

    def __eq__(self, other):
        if not isinstance(other, Char2):
            return NotImplemented
        return self.subgroup == other.subgroup and self.values == other.values

    def __hash__(self):
        return hash((self.subgroup, self.values))

    def relation_holds(self) -> bool:
        """Check h(x+y) = h(x) h(y) beta(x)(y) on every pair."""
        H = self.subgroup
        A = H.group
        pos = H.position
        v = np.array(self.values, dtype=np.int64)
        if v[pos[A.zero]] % A.two_n:
            return False
        S = _sum_index(H)
        return bool(((v[S] - v[:, None] - v[None, :] - self.beta.pair_table) % A.two_n == 0).all())


@lru_cache(maxsize=None)
def _sum_index(H: Subgroup) -> np.ndarray:
    """[i, j] = position of sorted[i] + sorted[j] in ``H.sorted``."""
    A, pos = H.group, H.position
    return np.array([[pos[A.add(x, y)] for y in H.sorted] for x in H.sorted], dtype=np.int64)


def _cyclic_exponent(e: int, p: int, x: int) -> int:
    """Exponent of exp(pi i / e) for exp(pi i p x^2 (e+1) / e)."""
    return p * x * x * (e + 1) % (2 * e)


def char2_product(beta: SymHom) -> Char2:
    """h(x) = prod_j h_j(x_j) prod_{j<k} beta(x_j, x_k)."""
    dec = beta.decomp
    A = dec.subgroup.group
    N, two_n = A.N, A.two_n
    e = dec.orders
    c = beta.matrix
    m = len(e)
    vals = []
    for x in dec.subgroup.sorted:
        k = dec.coords[x]
        v = 0
        for j in range(m):
            v += _cyclic_exponent(e[j], c[j][j], k[j]) * (N // e[j])
            for kk in range(j + 1, m):
                v += c[j][kk] * k[kk] * k[j] * (two_n // e[j])
        vals.append(v % two_n)
    return Char2(dec.subgroup, tuple(vals), beta)


def char2_cyclic(d: int, p: int) -> Char2:
    """The character of second degree of Z_d associated with x -> p x."""
    if not 0 <= p < d:
        raise ValueError(f"p must lie in [0, {d}), got {p}")
    A = Group((d,))
    dec = cyclic_decompose(full_subgroup(A))
    if not dec.orders:  # d == 1
        return char2_product(SymHom(dec, ()))
    return char2_product(SymHom(dec, ((p,),)))


def characters(H: Subgroup) -> list[tuple[int, ...]]:
    """Exponent tables (aligned with H.sorted) of every character of H."""
    dec = cyclic_decompose(H)
    two_n = H.group.two_n
    w = [two_n // e for e in dec.orders]
    coords = [dec.coords[x] for x in H.sorted]
    out = []
    for a in itertools.product(*(range(e) for e in dec.orders)):
        out.append(tuple(sum(ai * ki * wi for ai, ki, wi in zip(a, k, w)) % two_n for k in coords))
    return out


def enumerate_ch2(H: Subgroup) -> list[Char2]:
    """All of Ch2(H) as {chi * h_beta}; duplicates are dropped (none expected)."""
    return list(_enumerate_ch2(H))


@lru_cache(maxsize=None)
def _enumerate_ch2(H: Subgroup) -> tuple[Char2, ...]:
    two_n = H.group.two_n
    chars = characters(H)
    seen = set()
    out = []
    for beta in enumerate_sym(H):
        hb = char2_product(beta)
        for chi in chars:
            vals = tuple((a + b) % two_n for a, b in zip(hb.values, chi))
            if vals in seen:
                continue
            seen.add(vals)
            out.append(Char2(H, vals, beta))
    return tuple(out)


def beta_of(H: Subgroup, values: Mapping[Element, int] | Char2) -> SymHom:
    """Recover beta(x)(y) = h(x+y) / (h(x) h(y)) and validate it.

    Raises NotSecondDegreeError when the table is not a character of
    second degree of H.
    """
    if isinstance(values, Char2):
        values = values.table()
    A = H.group
    m = A.two_n
    if values[A.zero] % m:
        raise NotSecondDegreeError("not a character of second degree: h(0) != 1")
    pos = H.position
    v = np.array([values[x] for x in H.sorted], dtype=np.int64)
    S = _sum_index(H)
    # b[i, j] = beta(x_i)(x_j); must be a bicharacter
    b = (v[S] - v[:, None] - v[None, :]) % m
    if ((b[S] - b[:, None, :] - b[None, :, :]) % m).any():
        raise NotSecondDegreeError("not a character of second degree")
    dec = cyclic_decompose(H)
    e = dec.orders
    mat = []
    for j, gj in enumerate(dec.basis):
        row = []
        for gk in dec.basis:
            t = int(b[pos[gk], pos[gj]]) * e[j]
            if t % m:
                raise NotSecondDegreeError("not a character of second degree")
            row.append(t // m)
        mat.append(tuple(row))
    beta = SymHom(dec, tuple(mat))
    if not beta.is_valid() or not np.array_equal(beta.pair_table, b):
        raise NotSecondDegreeError("not a character of second degree")
    return beta


def make_char2(H: Subgroup, values: Mapping[Element, int]) -> Char2:
    """Validate a raw exponent table and wrap it as a Char2."""
    beta = beta_of(H, values)
    m = H.group.two_n
    return Char2(H, tuple(values[x] % m for x in H.sorted), beta)


@dataclass(frozen=True)
class SubChar2:
    """A character of second degree on H, extended by zero to the whole group."""

    restriction: Char2

    @property
    def support(self) -> Subgroup:
        return self.restriction.subgroup


def subchar_eval(h0: SubChar2, x: Element) -> int | None:
    """Exponent of h0(x), or None where h0 vanishes."""
    if x in h0.support:
        return h0.restriction(x)
    return None
