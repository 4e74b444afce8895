"""Husimi functions, generalized Wehrl entropy and checks of its bounds.

With counting measure on A and counting/N on the dual, the entropy of a
density operator rho against a unit window phi is

    E_G(phi, rho) = (1/N) sum_z G(u(z)),   u(z) = <pi(z) phi, rho pi(z) phi>.

Each ``verify_*`` function raises `TheoryViolation` when a proven bound or
equality characterization fails, which can only mean broken arithmetic.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import TheoryViolation
from .groups import Group
from .phase_space import PhasePoint, pp_sub
from .stabilizer import is_sstate
from .weyl import (
    TOL,
    DensityOperator,
    WaveFunction,
    _shift_stack,
    characteristic_fn,
    cst,
    match_shift,
)


@dataclass(frozen=True)
class ConcaveFn:
    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    linear: bool = False
    strictly_concave: bool = False

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))

    def validate(self, grid: int = 201) -> None:
        if abs(float(self(0.0))) > 1e-12:
            raise ValueError(f"{self.name}: G(0) must be 0")
        s = np.linspace(0, 1, grid)
        S, T = np.meshgrid(s, s)
        mid = self((S + T) / 2)
        if np.any(mid < (self(S) + self(T)) / 2 - 1e-12):
            raise ValueError(f"{self.name}: not concave on [0, 1]")


def _xlogx(t):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(t > 0, t * np.log(np.where(t > 0, t, 1.0)), 0.0)


BUILTIN = {
    "-t*log(t)": ConcaveFn("-t*log(t)", lambda t: -_xlogx(t), strictly_concave=True),
    "t-t^2": ConcaveFn("t-t^2", lambda t: t - t * t, strictly_concave=True),
    # smooth strictly concave stand-in for min(t, 1 - t), same slopes at the ends
    "sin(pi*t)/pi": ConcaveFn("sin(pi*t)/pi", lambda t: np.sin(np.pi * t) / np.pi, strictly_concave=True),
    "t": ConcaveFn("t", lambda t: np.asarray(t, dtype=float), linear=True),
}
BUILTIN["entropy"] = BUILTIN["-t*log(t)"]
BUILTIN["linear-entropy"] = BUILTIN["t-t^2"]


_ALLOWED_FUNCS = {"log": np.log, "sqrt": np.sqrt, "sin": np.sin}
_ALLOWED_CONSTS = {"pi": np.pi}


def _compile(expr: str) -> Callable[[np.ndarray], np.ndarray]:
    tree = ast.parse(expr.replace("^", "**"), mode="eval")
    called = {id(n.func) for n in ast.walk(tree) if isinstance(n, ast.Call)}
    for node in ast.walk(tree):
        if isinstance(node, ast.Name):
            ok = _ALLOWED_FUNCS if id(node) in called else {"t": None, **_ALLOWED_CONSTS}
            if node.id not in ok:
                raise ValueError(f"unknown name {node.id!r} in G-spec")
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _ALLOWED_FUNCS or node.keywords:
                raise ValueError("only log, sqrt and sin calls are allowed in G-spec")
        elif isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float)):
                raise ValueError("only numeric constants are allowed in G-spec")
        elif not isinstance(
            node,
            (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Load, ast.Add, ast.Sub, ast.Mult, ast.Div,
             ast.Pow, ast.USub, ast.UAdd),
        ):
            raise ValueError(f"disallowed syntax in G-spec: {type(node).__name__}")
    code = compile(tree, "<G-spec>", "eval")

    def fn(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            val = eval(code, {"__builtins__": {}}, {"t": t, **_ALLOWED_FUNCS, **_ALLOWED_CONSTS})
            # continuous extension to t = 0 (e.g. t*log(t) -> 0)
            at0 = eval(code, {"__builtins__": {}}, {"t": np.float64(1e-300), **_ALLOWED_FUNCS, **_ALLOWED_CONSTS})
        val = np.broadcast_to(np.asarray(val, dtype=float), t.shape)
        return np.where(t > 0, val, float(at0))

    return fn


def parse_g(spec: str) -> ConcaveFn:
    """Built-in name or an arithmetic expression in t using log, sqrt, sin and pi."""
    key = spec.replace(" ", "")
    if key in BUILTIN:
        return BUILTIN[key]
    fn = _compile(spec)
    s = np.linspace(0, 1, 401)
    vals = fn(s)
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"G-spec {spec!r} is not finite on [0, 1]")
    g1 = float(fn(1.0))
    linear = bool(np.max(np.abs(vals - g1 * s)) <= 1e-12)
    mids = fn((s[:-2] + s[2:]) / 2)
    strict = (not linear) and bool(np.all(mids - (vals[:-2] + vals[2:]) / 2 > 0))
    G = ConcaveFn(spec, fn, linear=linear, strictly_concave=strict)
    G.validate()
    return G


def husimi(phi: WaveFunction, rho: DensityOperator, tol: float = TOL) -> np.ndarray:
    """u(z) = <phi_z, rho phi_z> as an (N, N) real table."""
    if abs(phi.norm() - 1) > tol:
        raise ValueError("husimi needs a normalized window")
    A = phi.group
    P = _shift_stack(phi)
    u = np.einsum("ij,ij->i", P.conj(), P @ rho.matrix.T).real
    return u.reshape(A.N, A.N)


def entropy(G: ConcaveFn, u: np.ndarray) -> float:
    N = u.shape[0]
    return float(np.sum(G(np.clip(u, 0.0, 1.0))) / N)


def _is_equal(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


@dataclass
class MinBoundReport:
    entropy: float
    bound: float
    is_equality: bool
    witness: Optional[dict] = None


def verify_min_bound(G: ConcaveFn, phi: WaveFunction, rho: DensityOperator, tol: float = TOL) -> MinBoundReport:
    """E_G(phi, rho) >= G(1); on equality, produce the shift witness."""
    A = phi.group
    u = husimi(phi, rho)
    E = entropy(G, u)
    bound = float(G(1.0)) + 0.0
    if E < bound - tol * max(1.0, abs(bound)):
        raise TheoryViolation(f"entropy {E} below G(1) = {bound}")
    eq = _is_equal(E, bound, tol)
    report = MinBoundReport(E, bound, eq)
    if not eq or G.linear:
        return report
    desc = is_sstate(phi, tol)
    p, U = rho.spectrum()
    if desc is None or p[-1] < 1 - tol:
        raise TheoryViolation("minimal entropy reached by a non-stabilizer pair")
    psi = WaveFunction(A, U[:, -1])
    m = match_shift(phi, psi)
    if m is None:
        raise TheoryViolation("minimal entropy reached but psi is not a shift of phi")
    theta, z = m
    support = u > tol
    report.witness = {
        "window": desc,
        "theta": theta,
        "z": z,
        "support_size": int(np.count_nonzero(support)),
    }
    return report


@dataclass
class BerezinLiebReport:
    entropy: float
    trace_g: float
    gap: float
    is_equality: bool
    shifts: Optional[list] = None  # list of (p_j, theta_j, z_j) when diagnosed


def stabilizer_subgroup_of(phi: WaveFunction, tol: float = TOL) -> set[PhasePoint]:
    """K = {z : V_phi phi(z) != 0} with the scale-aware threshold."""
    A = phi.group
    V = cst(phi, phi)
    n2 = phi.norm() ** 2
    return {(A.elements[i], A.elements[j]) for i, j in zip(*np.nonzero(np.abs(V) > tol * n2))}


def berezin_lieb(G: ConcaveFn, phi: WaveFunction, rho: DensityOperator, tol: float = TOL) -> BerezinLiebReport:
    """E_G(phi, rho) >= Tr G(rho), with the shift-basis diagnosis on equality."""
    A = phi.group
    u = husimi(phi, rho)
    E = entropy(G, u)
    p, U = rho.spectrum()
    trg = float(np.sum(G(p)))
    gap = E - trg
    if gap < -tol * max(1.0, abs(trg)):
        raise TheoryViolation(f"Berezin-Lieb gap {gap} is negative")
    eq = _is_equal(E, trg, tol)
    report = BerezinLiebReport(E, trg, gap, eq)
    distinct = len(p) == 1 or float(np.min(np.diff(p))) > 1e-6
    if not (eq and G.strictly_concave and distinct):
        return report
    K = stabilizer_subgroup_of(phi, tol)
    if is_sstate(phi, tol) is None or len(K) != A.N:
        raise TheoryViolation("Berezin-Lieb equality with a non-stabilizer window")
    shifts = []
    for j in range(A.N):
        m = match_shift(phi, WaveFunction(A, U[:, j]))
        if m is None:
            raise TheoryViolation("Berezin-Lieb equality but an eigenvector is not a shift of phi")
        shifts.append((float(p[j]), m[0], m[1]))
    for a in range(len(shifts)):
        for b in range(a + 1, len(shifts)):
            if pp_sub(A, shifts[a][2], shifts[b][2]) in K:
                raise TheoryViolation("Berezin-Lieb equality but two shifts share a coset of K")
    report.shifts = shifts
    return report


@dataclass
class MaxBoundReport:
    entropy: float
    bound: float
    is_equality: bool
    support_overlap: list = field(default_factory=list)


def verify_max_bound(G: ConcaveFn, phi: WaveFunction, rho: DensityOperator, tol: float = TOL) -> MaxBoundReport:
    """E_G(phi, rho) <= N G(1/N); equality iff supp phi~ and supp rho~ meet only at 0."""
    A = phi.group
    N = A.N
    u = husimi(phi, rho)
    E = entropy(G, u)
    bound = N * float(G(1.0 / N))
    if E > bound + tol * max(1.0, abs(bound)):
        raise TheoryViolation(f"entropy {E} above N G(1/N) = {bound}")
    eq = _is_equal(E, bound, tol)
    overlap_mask = (np.abs(characteristic_fn(rho)) > tol) & (
        np.abs(characteristic_fn(np.outer(phi.amplitudes, phi.amplitudes.conj()), A)) > tol
    )
    overlap = [(A.elements[i], A.elements[j]) for i, j in zip(*np.nonzero(overlap_mask))]
    report = MaxBoundReport(E, bound, eq, overlap)
    if G.strictly_concave and eq != (overlap == [(A.zero, A.zero)]):
        raise TheoryViolation("maximal-entropy equality does not match the support criterion")
    return report


def fourier_phase_space(A: Group, f: np.ndarray) -> np.ndarray:
    """F f(xi', x') = (1/N) sum_{x, xi} conj(xi'(x) xi(x')) f(x, xi), indexed [xi', x']."""
    C = np.conj(A.char_matrix)
    return C @ f @ C / A.N


def fourier_husimi(phi: WaveFunction, rho: DensityOperator, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of F u(xi, -x) = phi~(x, xi) conj(rho~(x, xi)), indexed [x, xi]."""
    A = phi.group
    u = husimi(phi, rho)
    Fu = fourier_phase_space(A, u)
    lhs = Fu.T[A.neg_index, :]
    phi_t = characteristic_fn(np.outer(phi.amplitudes, phi.amplitudes.conj()), A)
    rhs = phi_t * np.conj(characteristic_fn(rho))
    resid = float(np.max(np.abs(lhs - rhs)))
    if resid > tol:
        raise TheoryViolation(f"Husimi Fourier identity residual {resid}")
    return lhs, rhs


def simplex_objective(G: ConcaveFn, t: np.ndarray, N: int) -> float:
    """f(t) = (1/N) sum_j G(t_j) on {t in [0,1]^{N^2}: sum t = N}."""
    return float(np.sum(G(t)) / N)
