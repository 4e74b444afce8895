"""Command-line interface: ``stabforge <command> ...``.

Exit codes: 0 ok, 1 selftest failure, 2 parse/usage, 3 enumeration bound,
4 not a stabilizer state, 5 invalid stabilizer-group input, 6 theory check
violated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, TextIO

import numpy as np

from . import serialize as ser
from .errors import (
    EnumerationBoundError,
    GroupSpecError,
    IsotropicError,
    NotStabilizerGroupError,
    NotStabilizerStateError,
    TheoryViolation,
)
from .groups import (
    DEFAULT_ENUMERATION_BOUND,
    Group,
    annihilator,
    check_bound,
    enumerate_subgroups,
    format_element,
    parse_element,
    parse_group,
)
from .quadratic import characters, count_sym
from .selftest import SUITES, run_suite
from .stabilizer import (
    count_states,
    enumerate_states,
    group_from_sstate,
    is_sstate,
    sstate_from_group,
    sstate_synthesize,
    verify_stabilized,
)
from .wehrl import (
    BUILTIN,
    ConcaveFn,
    berezin_lieb,
    entropy,
    fourier_husimi,
    husimi,
    parse_g,
    verify_max_bound,
    verify_min_bound,
)
from .weyl import (
    DensityOperator,
    WaveFunction,
    basis_state,
    maximally_mixed,
    pure,
    random_wavefunction,
    uniform_state,
)

EXIT_OK, EXIT_SELFTEST, EXIT_PARSE, EXIT_BOUND, EXIT_NOT_STAB, EXIT_BAD_GROUP, EXIT_THEORY = range(7)

DEFAULT_SELFTEST_GROUPS = ["Z2", "Z3", "Z4", "Z2xZ2"]


class UsageError(Exception):
    pass


def _threads_from_env() -> int:
    cap = os.environ.get("STABFORGE_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise UsageError(f"STABFORGE_THREADS must be an integer, got {cap!r}") from None
    return n


@dataclass
class Config:
    float_tolerance: float = 1e-9
    enumeration_bound: int = DEFAULT_ENUMERATION_BOUND
    output_format: str = "human"
    seed: int = 0
    threads: int = field(default_factory=_threads_from_env)

    def __post_init__(self):
        if not self.float_tolerance > 0:
            raise UsageError("tolerance must be > 0")
        if self.enumeration_bound < 1:
            raise UsageError("bound must be >= 1")
        if self.output_format not in ("human", "json", "csv"):
            raise UsageError(f"unknown format {self.output_format!r}")

    def map(self, fn: Callable, items: Iterable) -> list:
        """Ordered parallel map; results come back in input order."""
        items = list(items)
        if self.threads <= 1 or len(items) < 2:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(max_workers=self.threads) as ex:
            return list(ex.map(fn, items))


# -- input helpers ------------------------------------------------------


def _group_arg(args) -> Group:
    spec = getattr(args, "group_pos", None)
    if isinstance(spec, list):
        spec = "".join(spec)
    spec = spec or args.group
    if not spec:
        raise UsageError("a group spec is required (positional or --group)")
    return parse_group(spec)


def _load(path: str):
    try:
        return ser.load_json(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _named_state(A: Group, spec: str) -> WaveFunction | None:
    """Shortcuts: ``delta(1,0)``, ``delta:(1,0)``, ``uniform``."""
    s = spec.replace(" ", "").lower()
    if s == "uniform":
        return uniform_state(A)
    if s.startswith("delta"):
        return basis_state(A, parse_element(A, s[5:].lstrip(":")))
    return None


def _wave(A: Group | None, spec: str) -> WaveFunction:
    if A is not None and not os.path.exists(spec):
        named = _named_state(A, spec)
        if named is not None:
            return named
    return ser.wavefunction_from_json(_load(spec), A)


def _density(A: Group | None, spec: str) -> DensityOperator:
    if A is not None and not os.path.exists(spec):
        if spec.replace(" ", "").lower() in ("mixed", "maximally-mixed"):
            return maximally_mixed(A)
        named = _named_state(A, spec)
        if named is not None:
            return pure(named)
    return ser.density_from_json(_load(spec), A)


def _window(args, tol: float) -> tuple[WaveFunction, Group]:
    A = parse_group(args.group) if args.group else None
    if not args.phi:
        raise UsageError("--phi is required")
    phi = _wave(A, args.phi)
    if A is not None and phi.group != A:
        raise GroupSpecError("window group does not match --group")
    if abs(phi.norm() - 1) > tol:
        raise UsageError("window must be normalized")
    return phi, phi.group


def _check_density(rho: DensityOperator, A: Group, tol: float):
    if rho.group != A:
        raise GroupSpecError("density operator group does not match the window")
    try:
        rho.validate(tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- output -------------------------------------------------------------


class Writer:
    """Single ordered writer for all command output."""

    def __init__(self, stream: TextIO):
        self.stream = stream

    def line(self, s: str = ""):
        self.stream.write(s + "\n")

    def json(self, obj):
        self.line(ser.dumps(obj))


# -- commands -----------------------------------------------------------


def cmd_subgroups(args, cfg: Config, out: Writer) -> int:
    A = _group_arg(args)
    rows = []
    for H in enumerate_subgroups(A, cfg.enumeration_bound):
        rows.append(
            {
                "order": H.order,
                "generators": [format_element(g) for g in H.generators],
                "elements": [format_element(x) for x in H.sorted],
                "annihilator": [format_element(x) for x in annihilator(H).sorted],
                "sym": count_sym(H),
                "ch2": count_sym(H) * len(characters(H)),
            }
        )
    if cfg.output_format == "json":
        for r in rows:
            out.json(r)
    elif cfg.output_format == "csv":
        out.line("order,generators,annihilator_order,sym,ch2")
        for r in rows:
            out.line(f"{r['order']},\"{' '.join(r['generators'])}\",{len(r['annihilator'])},{r['sym']},{r['ch2']}")
    else:
        out.line(f"{'#H':>4}  {'#H-perp':>7}  {'#Sym':>5}  {'#Ch2':>6}  generators")
        for r in rows:
            gens = " ".join(r["generators"]) or "-"
            out.line(f"{r['order']:>4}  {len(r['annihilator']):>7}  {r['sym']:>5}  {r['ch2']:>6}  {gens}")
    return EXIT_OK


def cmd_states(args, cfg: Config, out: Writer) -> int:
    pos = list(args.items)
    actions = [p for p in pos if p in ("count", "enumerate")]
    if len(actions) != 1:
        raise UsageError("states needs exactly one of 'count' or 'enumerate'")
    rest = [p for p in pos if p not in ("count", "enumerate")]
    # "Z2x Z2" arrives as two tokens; whitespace is not significant in specs
    args.group_pos = "".join(rest) or None
    A = _group_arg(args)
    if actions[0] == "count":
        n = count_states(A, cfg.enumeration_bound)
        if cfg.output_format == "json":
            out.json({"group": str(A), "count": n})
        else:
            out.line(str(n))
        return EXIT_OK
    check_bound(A, cfg.enumeration_bound)
    # json lines regardless of format: one record per state, streamed in order
    for rec in enumerate_states(A, cfg.enumeration_bound):
        out.json(ser.state_to_json(rec))
    return EXIT_OK


def cmd_stab(args, cfg: Config, out: Writer) -> int:
    data = _load(args.file)
    if not isinstance(data, dict):
        raise UsageError("input must be a JSON object")
    if args.direction == "to-group":
        phi = ser.wavefunction_from_json(data)
        if not np.any(np.abs(phi.amplitudes) > 0):
            raise UsageError("wave function is zero")
        phi = phi.normalized()
        desc = is_sstate(phi, cfg.float_tolerance)
        if desc is None:
            raise NotStabilizerStateError("not a stabilizer state")
        G = group_from_sstate(desc)
        if not verify_stabilized(G, phi, cfg.float_tolerance):
            raise TheoryViolation("recognized state is not stabilized by its group")
        obj = ser.stabilizer_group_to_json(G)
        obj["state"] = ser.descriptor_to_json(desc)
    else:
        G = ser.stabilizer_group_from_json(data)
        desc = sstate_from_group(G)
        phi = sstate_synthesize(desc)
        if not verify_stabilized(G, phi, cfg.float_tolerance):
            raise TheoryViolation("synthesized state is not stabilized by the input group")
        obj = ser.wavefunction_to_json(phi)
        obj["amplitudes"] = ser.wavefunction_to_json(WaveFunction(phi.group, phi.amplitudes))["amplitudes"]
        obj["state"] = ser.descriptor_to_json(desc)
    out.json(obj)
    return EXIT_OK


def _g_list(args) -> list[ConcaveFn]:
    specs = args.G or ["-t*log(t)"]
    try:
        return [parse_g(s) for s in specs]
    except (ValueError, SyntaxError) as exc:
        raise UsageError(f"bad G-spec: {exc}") from None


def _emit_reports(reports: list[dict], cfg: Config, out: Writer, human: Callable[[dict], str]):
    for r in reports:
        if cfg.output_format == "json":
            out.json(r)
        else:
            out.line(human(r))


def cmd_wehrl(args, cfg: Config, out: Writer) -> int:
    tol = cfg.float_tolerance
    if args.mode == "sweep":
        return _wehrl_sweep(args, cfg, out)
    phi, A = _window(args, tol)
    Gs = _g_list(args)
    if args.mode == "fourier":
        rho = _density(A, args.rho or "mixed")
        _check_density(rho, A, tol)
        lhs, rhs = fourier_husimi(phi, rho)
        r = {"max_residual": float(np.max(np.abs(lhs - rhs))) + 0.0, "zero_frequency": ser._c(complex(lhs[0, 0]))}
        _emit_reports([r], cfg, out, lambda r: f"max residual {r['max_residual']:.3e}")
        return EXIT_OK
    if args.mode == "max":
        src = args.psi or args.rho
        if not src:
            raise UsageError("max needs --psi (or a pure --rho)")
        rho = _density(A, src)
    else:
        if not args.rho:
            raise UsageError(f"{args.mode} needs --rho")
        rho = _density(A, args.rho)
    _check_density(rho, A, tol)
    reports = []
    for G in Gs:
        if args.mode == "min":
            r = ser.min_report_to_json(verify_min_bound(G, phi, rho, tol))
        elif args.mode == "berezin":
            r = ser.berezin_report_to_json(berezin_lieb(G, phi, rho, tol))
        else:
            r = ser.max_report_to_json(verify_max_bound(G, phi, rho, tol))
        r = {"G": G.name, **r}
        reports.append(r)

    def human(r):
        s = f"G={r['G']}  entropy={r['entropy']:.12g}  bound={r['bound']:.12g}  equality={r['equality']}"
        if r.get("gap") is not None:
            s += f"  gap={r['gap']:.3e}"
        if r.get("witness"):
            s += f"  witness z=({r['witness']['z'][0]},{r['witness']['z'][1]})"
        if "support_overlap" in r:
            s += "  overlap=" + " ".join(f"({x},{xi})" for x, xi in r["support_overlap"])
        return s

    _emit_reports(reports, cfg, out, human)
    return EXIT_OK


def _wehrl_sweep(args, cfg: Config, out: Writer) -> int:
    """Min-bound gaps over all stabilizer windows plus seeded random states."""
    A = _group_arg(args)
    Gs = _g_list(args)
    tol = cfg.float_tolerance
    wins = [(f"stab-{i}", sstate_synthesize(r.descriptor)) for i, r in enumerate(enumerate_states(A, cfg.enumeration_bound))]
    rng = np.random.default_rng(cfg.seed)
    wins += [(f"random-{j}", random_wavefunction(A, rng)) for j in range(args.samples)]

    def job(item):
        sid, phi = item
        rho = pure(phi)
        u = husimi(phi, rho, tol)
        rows = []
        for G in Gs:
            E = entropy(G, u)
            verify_min_bound(G, phi, rho, tol)
            rows.append({"state-id": sid, "G-id": G.name, "entropy": E, "gap": E - float(G(1.0))})
        return rows

    rows = [r for batch in cfg.map(job, wins) for r in batch]
    if cfg.output_format == "csv":
        out.stream.write(ser.sweep_to_csv(rows))
    elif cfg.output_format == "json":
        for r in rows:
            out.json({k: (v + 0.0 if isinstance(v, float) else v) for k, v in r.items()})
    else:
        for r in rows:
            out.line(f"{r['state-id']:<12} {r['G-id']:<14} {r['entropy']:.12f} {r['gap']:.3e}")
    return EXIT_OK


def cmd_selftest(args, cfg: Config, out: Writer) -> int:
    specs = list(args.groups) or ([args.group] if args.group else DEFAULT_SELFTEST_GROUPS)
    groups = [parse_group(s) for s in specs]
    jobs = [(name, A) for A in groups for name in SUITES]
    results = cfg.map(lambda j: run_suite(j[0], j[1], cfg.seed, cfg.float_tolerance), jobs)
    failed = 0
    for r in results:
        failed += r.status == "FAIL"
        if cfg.output_format == "json":
            # no timings here so reruns stay byte-identical
            out.json({"suite": r.suite, "group": r.group, "status": r.status, "message": r.message})
        else:
            msg = f"  ({r.message})" if r.message else ""
            out.line(f"{r.status:<4}  {r.group:<10} {r.suite:<11} {r.seconds:8.3f}s{msg}")
    total = sum(r.seconds for r in results)
    summary = "FAIL" if failed else "PASS"
    if cfg.output_format != "json":
        out.line(f"{summary}: {len(results) - failed}/{len(results)} suites ok in {total:.2f}s")
    return EXIT_SELFTEST if failed else EXIT_OK


# -- parser ---------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    # defaults are suppressed so flags work before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--group", default=S, help="group spec such as Z4xZ2")
    p.add_argument("--format", dest="format", choices=["human", "json", "csv"], default=S)
    p.add_argument("--tolerance", type=float, default=S)
    p.add_argument("--bound", type=int, default=S, help="enumeration bound on N")
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--output", default=S, help="write output to this file")
    return p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# applied after parsing: set_defaults would also rewrite the shared parent actions
# and let the subcommand parser clobber flags given before the subcommand
_DEFAULTS = dict(group=None, format="human", tolerance=1e-9, bound=DEFAULT_ENUMERATION_BOUND, seed=0, output=None)


def _fuse_g_values(argv: list[str]) -> list[str]:
    """Turn ``-G -t*log(t)`` into ``-G=-t*log(t)`` so argparse does not read the value as a flag."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "-G" and i + 1 < len(argv):
            out.append("-G=" + argv[i + 1])
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_fuse_g_values(argv))
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    return args


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = _Parser(prog="stabforge", description="Stabilizer states over finite Abelian groups.", parents=[common])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("subgroups", parents=[common], help="list subgroups with #H-perp, #Sym, #Ch2")
    s.add_argument("group_pos", nargs="*", metavar="GROUP")
    s.set_defaults(func=cmd_subgroups)

    s = sub.add_parser("states", parents=[common], help="count or enumerate stabilizer states")
    s.add_argument("items", nargs="+", metavar="{count,enumerate} [GROUP]")
    s.set_defaults(func=cmd_states)

    s = sub.add_parser("stab", parents=[common], help="convert between states and stabilizer groups")
    s.add_argument("direction", choices=["to-group", "to-state"])
    s.add_argument("file")
    s.set_defaults(func=cmd_stab)

    s = sub.add_parser("wehrl", parents=[common], help="Wehrl entropy bounds")
    s.add_argument("mode", choices=["min", "max", "berezin", "fourier", "sweep"])
    s.add_argument("group_pos", nargs="?", metavar="GROUP", help="group for sweep")
    s.add_argument("--phi", help="window: JSON file, delta(x) or uniform")
    s.add_argument("--rho", help="density: JSON file, mixed, delta(x) or uniform")
    s.add_argument("--psi", help="pure state for max: JSON file, delta(x) or uniform")
    s.add_argument("-G", action="append", help=f"concave G; built-ins: {', '.join(sorted(BUILTIN))}")
    s.add_argument("--samples", type=int, default=10, help="random states in a sweep")
    s.set_defaults(func=cmd_wehrl)

    s = sub.add_parser("selftest", parents=[common], help="run the invariant suites")
    s.add_argument("groups", nargs="*", metavar="GROUP")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    stream = None
    try:
        args = parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a command is required: subgroups, states, stab, wehrl or selftest")
        cfg = Config(args.tolerance, args.bound, args.format, args.seed)
        stream = open(args.output, "w") if args.output else sys.stdout
        return args.func(args, cfg, Writer(stream))
    except (UsageError, GroupSpecError) as exc:
        print(f"stabforge: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EnumerationBoundError as exc:
        print(f"stabforge: error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except NotStabilizerStateError as exc:
        print(f"stabforge: error: {exc}", file=sys.stderr)
        return EXIT_NOT_STAB
    except (NotStabilizerGroupError, IsotropicError) as exc:
        print(f"stabforge: error: {exc}", file=sys.stderr)
        return EXIT_BAD_GROUP
    except TheoryViolation as exc:
        print(f"stabforge: theory check violated: {exc}", file=sys.stderr)
        return EXIT_THEORY
    finally:
        if stream is not None and stream is not sys.stdout:
            stream.close()


if __name__ == "__main__":
    sys.exit(main())
