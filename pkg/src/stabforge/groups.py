"""Finite Abelian groups given as products of cyclic factors.

Elements and dual elements are both plain tuples of residues.  The dual is
identified with the group itself through the factor-wise pairing

    <x, xi> = exp(2 pi i sum_j x_j xi_j / d_j),

so a `Subgroup` of the dual is just a `Subgroup` of the same `Group`.

All unit-modulus values are represented by an integer exponent ``k`` mod
``2N`` standing for ``zeta**k`` with ``zeta = exp(pi i / N)``.  Characters
only ever produce even exponents; the odd ones are needed for characters of
second degree.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import EnumerationBoundError, GroupSpecError, NotACharacterError

Element = tuple[int, ...]

DEFAULT_ENUMERATION_BOUND = 64


@dataclass(frozen=True)
class Group:
    orders: tuple[int, ...]

    def __post_init__(self):
        if len(self.orders) == 0:
            raise GroupSpecError("empty group spec")
        if any(int(d) < 1 for d in self.orders):
            raise GroupSpecError(f"cyclic orders must be >= 1, got {self.orders}")
        object.__setattr__(self, "orders", tuple(int(d) for d in self.orders))

    @property
    def N(self) -> int:
        return math.prod(self.orders)

    @property
    def two_n(self) -> int:
        return 2 * self.N

    @property
    def rank(self) -> int:
        return len(self.orders)

    def __str__(self):
        return "x".join(f"Z{d}" for d in self.orders)

    # -- elements -------------------------------------------------------
    @cached_property
    def elements(self) -> tuple[Element, ...]:
        """All elements in canonical (lexicographic) order."""
        return tuple(itertools.product(*(range(d) for d in self.orders)))

    @cached_property
    def _index(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def index(self, x: Element) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise GroupSpecError(f"{x} is not a reduced element of {self}") from None

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def element(self, residues: Iterable[int]) -> Element:
        r = tuple(int(v) for v in residues)
        if len(r) != self.rank:
            raise GroupSpecError(f"element {r} has wrong length for {self}")
        return tuple(v % d for v, d in zip(r, self.orders))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple(-a % d for a, d in zip(x, self.orders))

    def mul(self, k: int, x: Element) -> Element:
        return tuple(k * a % d for a, d in zip(x, self.orders))

    def element_order(self, x: Element) -> int:
        return math.lcm(*(d // math.gcd(a, d) for a, d in zip(x, self.orders)))

    # -- pairing and phases ---------------------------------------------
    @cached_property
    def _pairing_weights(self) -> tuple[int, ...]:
        return tuple(self.two_n // d for d in self.orders)

    def pairing(self, x: Element, xi: Element) -> int:
        """Exponent of zeta for the canonical pairing <x, xi>; always even."""
        if len(x) != self.rank or len(xi) != self.rank:
            raise GroupSpecError("shape mismatch in pairing")
        return sum(a * b * w for a, b, w in zip(x, xi, self._pairing_weights)) % self.two_n

    def phase(self, k: int) -> complex:
        return complex(self.roots[k % self.two_n])

    @cached_property
    def roots(self) -> np.ndarray:
        """roots[k] = zeta**k for k in [0, 2N)."""
        return np.exp(1j * np.pi * np.arange(self.two_n) / self.N)

    # -- dense tables for the numeric paths ------------------------------
    @cached_property
    def add_table(self) -> np.ndarray:
        n = self.N
        t = np.empty((n, n), dtype=np.intp)
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                t[i, j] = self._index[self.add(x, y)]
        return t

    @cached_property
    def sub_table(self) -> np.ndarray:
        """sub_table[x, y] = index of y - x."""
        n = self.N
        t = np.empty((n, n), dtype=np.intp)
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                t[i, j] = self._index[self.sub(y, x)]
        return t

    @cached_property
    def neg_index(self) -> np.ndarray:
        return np.array([self._index[self.neg(x)] for x in self.elements], dtype=np.intp)

    @cached_property
    def pairing_table(self) -> np.ndarray:
        """pairing_table[i, j] = pairing exponent of elements i and j (symmetric)."""
        e = np.array(self.elements, dtype=np.int64).reshape(self.N, self.rank)
        w = np.array(self._pairing_weights, dtype=np.int64)
        return ((e * w) @ e.T) % self.two_n

    @cached_property
    def char_matrix(self) -> np.ndarray:
        """char_matrix[xi, y] = xi(y) as a complex number."""
        return self.roots[self.pairing_table]


def make_group(orders: Sequence[int]) -> Group:
    return Group(tuple(orders))


_FACTOR = re.compile(r"z(\d+)")


def parse_group(spec: str) -> Group:
    """Parse ``"Z4xZ2x Z3"`` (case-insensitive, whitespace ignored)."""
    s = re.sub(r"\s+", "", spec).lower()
    if not s:
        raise GroupSpecError("empty group spec")
    parts = s.split("x")
    orders = []
    for p in parts:
        m = _FACTOR.fullmatch(p)
        if m is None:
            raise GroupSpecError(f"cannot parse group factor {p!r} in {spec!r}")
        orders.append(int(m.group(1)))
    return make_group(orders)


def format_element(x: Element) -> str:
    return "(" + ",".join(str(v) for v in x) + ")"


def parse_element(group: Group, s) -> Element:
    if isinstance(s, (list, tuple)):
        return group.element(s)
    body = str(s).strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    try:
        vals = [int(v) for v in body.split(",")] if body.strip() else []
    except ValueError:
        raise GroupSpecError(f"cannot parse element {s!r}") from None
    return group.element(vals)


@dataclass(frozen=True)
class Subgroup:
    group: Group
    elements: frozenset

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.sorted)

    @cached_property
    def sorted(self) -> tuple[Element, ...]:
        return tuple(sorted(self.elements))

    @cached_property
    def position(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.sorted)}

    @cached_property
    def generators(self) -> tuple[Element, ...]:
        """Greedy generating set, scanning elements in canonical order."""
        gens: list[Element] = []
        span = {self.group.zero}
        for x in self.sorted:
            if x not in span:
                gens.append(x)
                span = set(_join_cyclic(self.group, span, x))
        return tuple(gens)

    def sort_key(self):
        return (self.order, self.sorted)

    def __repr__(self):
        return f"Subgroup({self.group}, order={self.order}, gens={[format_element(g) for g in self.generators]})"


def _join_cyclic(group: Group, span: Iterable[Element], g: Element) -> frozenset:
    """The subgroup generated by a subgroup ``span`` and one more element."""
    span = frozenset(span)
    out = set(span)
    cur = g
    while cur not in span:
        out.update(group.add(s, cur) for s in span)
        cur = group.add(cur, g)
    return frozenset(out)


def generated_subgroup(group: Group, gens: Iterable[Element]) -> Subgroup:
    span = frozenset([group.zero])
    for g in gens:
        span = _join_cyclic(group, span, group.element(g))
    return Subgroup(group, span)


def full_subgroup(group: Group) -> Subgroup:
    return Subgroup(group, frozenset(group.elements))


def trivial_subgroup(group: Group) -> Subgroup:
    return Subgroup(group, frozenset([group.zero]))


def is_subgroup(group: Group, elems: Iterable[Element]) -> bool:
    s = set(elems)
    if group.zero not in s:
        return False
    return all(group.sub(x, y) in s for x in s for y in s)


def check_bound(group: Group, bound: int | None) -> None:
    bound = DEFAULT_ENUMERATION_BOUND if bound is None else bound
    if group.N > bound:
        raise EnumerationBoundError(f"enumeration bound exceeded: N={group.N} > {bound}")


def enumerate_subgroups(group: Group, bound: int | None = None) -> list[Subgroup]:
    """Every subgroup exactly once, sorted by cardinality then element list.

    Cyclic subgroups are generated first; the lattice is then closed under
    joins with cyclic subgroups until no new subgroup appears.
    """
    check_bound(group, bound)
    return list(_enumerate_subgroups(group))


@lru_cache(maxsize=None)
def _enumerate_subgroups(group: Group) -> tuple[Subgroup, ...]:
    n = group.N
    add = group.add_table.tolist()
    cyclic = {}
    for i in range(n):
        cyc = {0}
        cur = i
        while cur != 0:
            cyc.add(cur)
            cur = add[cur][i]
        cyclic.setdefault(frozenset(cyc), i)
    gens = sorted(cyclic.items(), key=lambda kv: kv[1])

    def join(span: frozenset, gi: int) -> frozenset:
        out = set(span)
        cur = gi
        while cur not in span:
            out.update(add[s][cur] for s in span)
            cur = add[cur][gi]
        return frozenset(out)

    seen = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for s in frontier:
            for cyc, gi in gens:
                if gi in s:
                    continue
                j = join(s, gi)
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    elems = group.elements
    subs = [Subgroup(group, frozenset(elems[i] for i in s)) for s in seen]
    subs.sort(key=Subgroup.sort_key)
    return tuple(subs)


def annihilator(H: Subgroup) -> Subgroup:
    """H-perp: dual elements pairing trivially with every element of H."""
    A = H.group
    gens = H.generators
    return Subgroup(A, frozenset(xi for xi in A.elements if all(A.pairing(g, xi) == 0 for g in gens)))


@dataclass(frozen=True)
class CyclicDecomposition:
    """An isomorphism Z_{e_1} x ... x Z_{e_m} -> H given by a basis of H."""

    subgroup: Subgroup
    orders: tuple[int, ...]
    basis: tuple[Element, ...]

    @cached_property
    def coords(self) -> dict[Element, tuple[int, ...]]:
        A = self.subgroup.group
        out = {}
        for k in itertools.product(*(range(e) for e in self.orders)):
            x = A.zero
            for kj, g in zip(k, self.basis):
                x = A.add(x, A.mul(kj, g))
            out[x] = k
        return out

    def element(self, k: Sequence[int]) -> Element:
        A = self.subgroup.group
        x = A.zero
        for kj, g in zip(k, self.basis):
            x = A.add(x, A.mul(kj, g))
        return x


@lru_cache(maxsize=None)
def cyclic_decompose(H: Subgroup) -> CyclicDecomposition:
    """Split H into independent cyclic factors.

    Repeatedly picks an element of maximal order whose cyclic span meets the
    span built so far only in 0 (canonical order breaks ties), backtracking
    on the rare dead end.
    """
    A = H.group
    target = H.order
    cands = sorted(H.sorted, key=lambda x: (-A.element_order(x), x))
    cands = [x for x in cands if x != A.zero]

    def cyclic(g):
        out = [A.zero]
        cur = g
        while cur != A.zero:
            out.append(cur)
            cur = A.add(cur, g)
        return out

    def dfs(span: frozenset, basis: list):
        if len(span) == target:
            return list(basis)
        for g in cands:
            cg = cyclic(g)
            if any(c in span for c in cg[1:]):
                continue
            new = _join_cyclic(A, span, g)
            basis.append(g)
            found = dfs(new, basis)
            if found is not None:
                return found
            basis.pop()
        return None

    basis = dfs(frozenset([A.zero]), [])
    assert basis is not None, "finite Abelian groups always decompose"
    dec = CyclicDecomposition(H, tuple(A.element_order(g) for g in basis), tuple(basis))
    assert len(dec.coords) == target
    return dec


def _as_callable(chi) -> Callable[[Element], int]:
    if isinstance(chi, Mapping):
        return chi.__getitem__
    return chi


def is_character(H: Subgroup, chi) -> bool:
    f = _as_callable(chi)
    A = H.group
    m = A.two_n
    if f(A.zero) % m != 0:
        return False
    return all((f(A.add(x, y)) - f(x) - f(y)) % m == 0 for x in H.sorted for y in H.sorted)


def extend_character(H: Subgroup, chi) -> Element:
    """First dual element (canonical order) whose restriction to H is ``chi``.

    ``chi`` maps elements of H to exponents mod 2N (mapping or callable).
    """
    if not is_character(H, chi):
        raise NotACharacterError("not a character")
    f = _as_callable(chi)
    A = H.group
    m = A.two_n
    gens = H.generators
    want = [f(g) % m for g in gens]
    for xi in A.elements:
        if all(A.pairing(g, xi) == w for g, w in zip(gens, want)):
            return xi
    raise NotACharacterError("not a character")
