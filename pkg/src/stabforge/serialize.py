"""JSON/CSV serialization for groups, states, stabilizer groups and reports.

Elements are written as residue-tuple strings such as ``"(1,0)"``; readers
also accept plain integer lists.  Complex numbers are ``[re, im]`` pairs.
"""

from __future__ import annotations

import csv
import io as _io
import json
from typing import Any, Iterable

import numpy as np

from .errors import GroupSpecError, NotStabilizerGroupError
from .groups import Group, Subgroup, format_element, generated_subgroup, parse_element, parse_group
from .phase_space import IsotropicSubgroup, pair_from_isotropic
from .quadratic import Char2
from .stabilizer import (
    ModuliClass,
    SStateDescriptor,
    StabilizerGroup,
    StateRecord,
    sstate_synthesize,
    stabilizer_group_from_table,
)
from .wehrl import BerezinLiebReport, MaxBoundReport, MinBoundReport
from .weyl import DensityOperator, ExactForm, WaveFunction, pure


def _f(v: float) -> float:
    # normalizes -0.0 so json output is byte-stable
    return float(v) + 0.0


def _c(z: complex) -> list[float]:
    return [_f(z.real), _f(z.imag)]


def _elems(xs: Iterable) -> list[str]:
    return [format_element(x) for x in xs]


def _point(z) -> list[str]:
    return [format_element(z[0]), format_element(z[1])]


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=False, separators=(", ", ": "))


# -- writers -----------------------------------------------------------


def subgroup_to_json(H: Subgroup) -> list[str]:
    return _elems(H.sorted)


def char2_to_json(h: Char2) -> dict:
    return {"support": _elems(h.subgroup.sorted), "values": list(h.values)}


def isotropic_to_json(K: IsotropicSubgroup) -> dict:
    dec = K.beta.decomp
    return {
        "H": _elems(K.H.generators),
        "beta": [list(r) for r in K.beta.matrix],
        "basis": _elems(dec.basis),
        "orders": list(dec.orders),
        "elements": [_point(z) for z in K.elements],
    }


def stabilizer_group_to_json(G: StabilizerGroup) -> dict:
    return {"group": str(G.group), "K": isotropic_to_json(G.K), "alpha": list(G.alpha)}


def wavefunction_to_json(phi: WaveFunction) -> dict:
    out: dict = {"group": str(phi.group)}
    if phi.exact is not None:
        e = phi.exact
        out["coset"] = {"y": format_element(e.y), "H": _elems(e.H.sorted)}
        out["phases"] = list(e.phases)
        out["scale"] = _f(e.scale)
    else:
        out["amplitudes"] = [_c(a) for a in phi.amplitudes]
    return out


def descriptor_to_json(desc: SStateDescriptor) -> dict:
    return {"y": format_element(desc.y), "H": subgroup_to_json(desc.H), "h": char2_to_json(desc.h)}


def moduli_to_json(m: ModuliClass) -> dict:
    return {"H": subgroup_to_json(m.H), "y": format_element(m.y), "h": char2_to_json(m.h)}


def state_to_json(rec: StateRecord) -> dict:
    return {
        "moduli": moduli_to_json(rec.moduli),
        "group": stabilizer_group_to_json(rec.group),
        "wavefunction": wavefunction_to_json(sstate_synthesize(rec.descriptor)),
    }


def density_to_json(rho: DensityOperator) -> dict:
    return {"group": str(rho.group), "matrix": [[_c(v) for v in row] for row in rho.matrix]}


def min_report_to_json(r: MinBoundReport) -> dict:
    w = None
    if r.witness is not None:
        w = {
            "window": descriptor_to_json(r.witness["window"]),
            "theta": _f(r.witness["theta"]),
            "z": _point(r.witness["z"]),
            "support_size": r.witness["support_size"],
        }
    return {"entropy": _f(r.entropy), "bound": _f(r.bound), "equality": r.is_equality, "witness": w}


def berezin_report_to_json(r: BerezinLiebReport) -> dict:
    shifts = None
    if r.shifts is not None:
        shifts = [{"p": _f(p), "theta": _f(t), "z": _point(z)} for p, t, z in r.shifts]
    return {
        "entropy": _f(r.entropy),
        "bound": _f(r.trace_g),
        "gap": _f(r.gap),
        "equality": r.is_equality,
        "shifts": shifts,
    }


def max_report_to_json(r: MaxBoundReport) -> dict:
    return {
        "entropy": _f(r.entropy),
        "bound": _f(r.bound),
        "equality": r.is_equality,
        "support_overlap": [_point(z) for z in r.support_overlap],
    }


SWEEP_COLUMNS = ["state-id", "G-id", "entropy", "gap"]


def sweep_to_csv(rows: Iterable[dict]) -> str:
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(_f(r[k])) if isinstance(r[k], float) else r[k]) for k in SWEEP_COLUMNS})
    return buf.getvalue()


# -- readers -----------------------------------------------------------


def _group_of(data: dict) -> Group:
    if "group" not in data:
        raise GroupSpecError("missing 'group' field")
    return parse_group(str(data["group"]))


def _complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise GroupSpecError(f"cannot read complex number from {v!r}")


def wavefunction_from_json(data: dict, group: Group | None = None) -> WaveFunction:
    A = _group_of(data) if "group" in data or group is None else group
    if "amplitudes" in data:
        amps = np.array([_complex(v) for v in data["amplitudes"]], dtype=complex)
        return WaveFunction(A, amps)
    if "coset" in data:
        y = parse_element(A, data["coset"]["y"])
        elems = [parse_element(A, x) for x in data["coset"]["H"]]
        H = generated_subgroup(A, elems)
        if H.elements != frozenset(elems):
            raise GroupSpecError("coset 'H' is not a subgroup")
        phases = [int(k) for k in data["phases"]]
        if len(phases) != H.order:
            raise GroupSpecError("'phases' must have one entry per element of H")
        # phases are given in the order of the listed elements
        by_elem = dict(zip(elems, phases))
        aligned = tuple(by_elem[u] % A.two_n for u in H.sorted)
        return WaveFunction.from_exact(ExactForm(y, H, aligned, float(data["scale"])))
    raise GroupSpecError("wave function needs 'amplitudes' or an exact 'coset' form")


def density_from_json(data: dict, group: Group | None = None) -> DensityOperator:
    """Density-matrix JSON, or a wave function JSON read as a pure state."""
    if "matrix" not in data:
        return pure(wavefunction_from_json(data, group))
    A = _group_of(data) if "group" in data or group is None else group
    M = np.array([[_complex(v) for v in row] for row in data["matrix"]], dtype=complex)
    return DensityOperator(A, M)


def stabilizer_group_from_json(data: dict) -> StabilizerGroup:
    """{"group", "K": {"elements": [[x, xi], ...]}, "alpha": [...]} with alpha aligned to elements."""
    A = _group_of(data)
    try:
        pts = [(parse_element(A, x), parse_element(A, xi)) for x, xi in data["K"]["elements"]]
        alpha = [int(a) for a in data["alpha"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise NotStabilizerGroupError(f"not a stabilizer group: malformed input ({exc})") from None
    if len(set(pts)) != len(pts):
        raise NotStabilizerGroupError("not a stabilizer group: repeated elements in 'K.elements'")
    if len(pts) != len(alpha):
        raise NotStabilizerGroupError("not a stabilizer group: 'alpha' and 'K.elements' differ in length")
    K = pair_from_isotropic(A, pts)
    return stabilizer_group_from_table(K, dict(zip(pts, alpha)))


def load_json(path: str) -> Any:
    with open(path) as fh:
        return json.load(fh)
