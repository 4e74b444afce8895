"""Phase-space shifts, the coherent state transform and related tables.

Fields over the phase space are dense ``(N, N)`` complex arrays indexed
``[index(x), index(xi)]``.  Wave functions carry an optional exact form
(coset support, phase exponents, positive scale) that survives shifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GroupSpecError
from .groups import Element, Group, Subgroup
from .phase_space import PhasePoint
from .quadratic import Char2

TOL = 1e-9


@dataclass(frozen=True)
class ExactForm:
    """psi(y + u) = scale * zeta**phases[i] for u = H.sorted[i], zero off y + H."""

    y: Element
    H: Subgroup
    phases: tuple[int, ...]
    scale: float

    def dense(self) -> np.ndarray:
        A = self.H.group
        out = np.zeros(A.N, dtype=complex)
        for u, k in zip(self.H.sorted, self.phases):
            out[A.index(A.add(self.y, u))] = self.scale * A.roots[k % A.two_n]
        return out


@dataclass(frozen=True, eq=False)
class WaveFunction:
    group: Group
    amplitudes: np.ndarray
    exact: Optional[ExactForm] = None

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.shape != (self.group.N,):
            raise GroupSpecError(f"wave function must have length {self.group.N}")
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def from_exact(cls, form: ExactForm) -> "WaveFunction":
        return cls(form.H.group, form.dense(), form)

    def norm(self) -> float:
        if self.exact is not None:
            return float(self.exact.scale * np.sqrt(self.exact.H.order))
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "WaveFunction":
        n = self.norm()
        if self.exact is not None:
            e = self.exact
            return WaveFunction.from_exact(ExactForm(e.y, e.H, e.phases, e.scale / n))
        return WaveFunction(self.group, self.amplitudes / n)

    def __getitem__(self, x: Element) -> complex:
        return complex(self.amplitudes[self.group.index(x)])


def basis_state(A: Group, x: Element) -> WaveFunction:
    v = np.zeros(A.N, dtype=complex)
    v[A.index(x)] = 1.0
    return WaveFunction(A, v)


def uniform_state(A: Group) -> WaveFunction:
    return WaveFunction(A, np.full(A.N, 1 / np.sqrt(A.N), dtype=complex))


def _check(A: Group, *waves: WaveFunction):
    for w in waves:
        if w.group != A:
            raise GroupSpecError("shape mismatch between group and wave function")


def shift_apply(z: PhasePoint, psi: WaveFunction) -> WaveFunction:
    """(pi(x, xi) psi)(y) = xi(y) psi(y - x)."""
    A = psi.group
    x, xi = z
    ix, ixi = A.index(x), A.index(xi)
    amps = A.char_matrix[ixi] * psi.amplitudes[A.sub_table[ix]]
    exact = None
    if psi.exact is not None:
        e = psi.exact
        y = A.add(e.y, x)
        # value at y + u is xi(y + u) * old value at (y - x) + u
        phases = tuple((k + A.pairing(A.add(y, u), xi)) % A.two_n for u, k in zip(e.H.sorted, e.phases))
        exact = ExactForm(y, e.H, phases, e.scale)
    return WaveFunction(A, amps, exact)


def shift_compose_phase(A: Group, z: PhasePoint, w: PhasePoint) -> tuple[int, PhasePoint]:
    """pi(z) pi(w) = conj(eta(x)) pi(z + w), returned as (exponent, z + w)."""
    (x, xi), (y, eta) = z, w
    return (-A.pairing(x, eta) % A.two_n, (A.add(x, y), A.add(xi, eta)))


def shift_matrix(A: Group, z: PhasePoint) -> np.ndarray:
    """Dense matrix of pi(z); for test oracles and small diagnostics only."""
    x, xi = z
    M = np.zeros((A.N, A.N), dtype=complex)
    ix, ixi = A.index(x), A.index(xi)
    for j in range(A.N):
        i = A.add_table[j, ix]
        M[i, j] = A.char_matrix[ixi, i]
    return M


def _shift_stack(phi: WaveFunction) -> np.ndarray:
    """Rows are pi(z) phi for z in canonical order (x-major)."""
    A = phi.group
    n = A.N
    shifted = phi.amplitudes[A.sub_table]  # [x, y] = phi(y - x)
    return (shifted[:, None, :] * A.char_matrix[None, :, :]).reshape(n * n, n)


def cst(phi: WaveFunction, psi: WaveFunction) -> np.ndarray:
    """V_phi psi(x, xi) = <pi(x, xi) phi, psi>, as an (N, N) table."""
    A = phi.group
    _check(A, psi)
    f = np.conj(phi.amplitudes[A.sub_table]) * psi.amplitudes[None, :]
    return f @ np.conj(A.char_matrix).T


def characteristic_fn(rho: "DensityOperator | np.ndarray", A: Group | None = None) -> np.ndarray:
    """rho~(x, xi) = Tr(rho pi(x, xi))."""
    if isinstance(rho, DensityOperator):
        A, M = rho.group, rho.matrix
    else:
        M = np.asarray(rho)
    # Tr(rho pi(x, xi)) = sum_a rho[a - x, a] xi(a)
    n = A.N
    cols = np.broadcast_to(np.arange(n), (n, n))
    G = M[A.sub_table, cols]
    return G @ A.char_matrix.T


def clifford_conjugate(h: Char2, z: PhasePoint) -> tuple[int, PhasePoint]:
    """C_h pi(z) C_h^dagger = conj(h(-x)) pi(x, xi + beta(x))."""
    A = h.subgroup.group
    if h.subgroup.order != A.N:
        raise ValueError("h must be defined on the whole group")
    x, xi = z
    bx = beta_as_dual(h, x)
    return (-h(A.neg(x)) % A.two_n, (x, A.add(xi, bx)))


def beta_as_dual(h: Char2, x: Element) -> Element:
    """The dual element eta with eta(y) = beta(x)(y) for all y (h total)."""
    A = h.subgroup.group
    dec = h.beta.decomp
    want = tuple(h.beta.pair(x, g) for g in dec.basis)
    for eta in A.elements:
        if tuple(A.pairing(g, eta) for g in dec.basis) == want:
            return eta
    raise AssertionError("beta(x) has no extension")


def multiplication_matrix(h: Char2) -> np.ndarray:
    A = h.subgroup.group
    return np.diag([A.phase(h(x)) for x in A.elements])


def match_shift(phi: WaveFunction, psi: WaveFunction, tol: float = TOL) -> Optional[tuple[float, PhasePoint]]:
    """Find (theta, z) with psi proportional to e^{i theta} pi(z) phi.

    Scans all N^2 shifts and returns the first (canonical order) whose overlap
    saturates Cauchy-Schwarz; theta is the argument of that overlap.
    """
    A = phi.group
    na, nb = phi.norm(), psi.norm()
    if na == 0 or nb == 0:
        raise ValueError("match_shift needs nonzero inputs")
    V = cst(phi, psi).ravel()
    hits = np.nonzero(np.abs(V) >= na * nb * (1 - tol))[0]
    if len(hits) == 0:
        return None
    k = int(hits[0])
    x, xi = A.elements[k // A.N], A.elements[k % A.N]
    theta = float(np.angle(V[k]))
    if abs(theta) < 1e-15:
        theta = 0.0
    return theta, (x, xi)


def support(field: np.ndarray, scale: float = 1.0, tol: float = TOL) -> np.ndarray:
    """Boolean mask of entries with |value| > tol * scale."""
    return np.abs(field) > tol * scale


@dataclass(frozen=True, eq=False)
class DensityOperator:
    group: Group
    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=complex)
        if M.shape != (self.group.N, self.group.N):
            raise GroupSpecError("density matrix has wrong shape")
        object.__setattr__(self, "matrix", M)

    def validate(self, tol: float = TOL) -> None:
        M = self.matrix
        if np.max(np.abs(M - M.conj().T)) > tol:
            raise ValueError("density operator is not Hermitian")
        if abs(np.trace(M).real - 1) > tol or abs(np.trace(M).imag) > tol:
            raise ValueError("density operator does not have trace 1")
        if np.linalg.eigvalsh((M + M.conj().T) / 2).min() < -tol:
            raise ValueError("density operator is not positive semidefinite")

    def spectrum(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues (clamped at 0, ascending) and eigenvectors as columns."""
        M = (self.matrix + self.matrix.conj().T) / 2
        p, U = np.linalg.eigh(M)
        return np.clip(p, 0.0, None), U


def pure(psi: WaveFunction) -> DensityOperator:
    v = psi.amplitudes / np.linalg.norm(psi.amplitudes)
    return DensityOperator(psi.group, np.outer(v, v.conj()))


def maximally_mixed(A: Group) -> DensityOperator:
    return DensityOperator(A, np.eye(A.N, dtype=complex) / A.N)


def mixture(weights, states) -> DensityOperator:
    A = states[0].group
    M = sum(w * pure(s).matrix for w, s in zip(weights, states))
    return DensityOperator(A, M)


def random_wavefunction(A: Group, rng: np.random.Generator) -> WaveFunction:
    """Haar-random unit vector."""
    v = rng.normal(size=A.N) + 1j * rng.normal(size=A.N)
    return WaveFunction(A, v / np.linalg.norm(v))


def random_density(A: Group, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Random density operator of the given rank (full rank by default)."""
    r = A.N if rank is None else rank
    X = rng.normal(size=(A.N, r)) + 1j * rng.normal(size=(A.N, r))
    M = X @ X.conj().T
    return DensityOperator(A, M / np.trace(M).real)
