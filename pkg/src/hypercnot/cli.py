"""Command-line frontend: truth tables, gate runs, cluster preparation,
Bell-state analysis, parameter sweeps, and benchmark checks.

Exit codes: 0 success, 1 validation failure (a mismatch or an out-of-
tolerance value), 2 usage error. Output is deterministic for a fixed
(config, seed); sweeps rerun byte-identical.

A flat key=value config file can seed any option; command-line flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .analysis import (
    REFERENCE_TOLERANCE,
    reference_check,
    simulated_performance,
    sweep,
)
from .cavity import CavityParams, ReflectionPair
from .hilbert import fidelity_up_to_global_phase, tensor_product
from .protocols import (
    HyperBellState,
    analyze_hyper_bell,
    hyper_cnot_state,
    photon_state,
    prepare_cluster_stages,
    truth_table,
    uniform_two_photon_state,
)

_CONFIG_KEYS = {
    "mode",
    "g",
    "kappa_s",
    "gamma",
    "detuning",
    "seed",
    "out",
    "format",
    "tolerance",
    "input",
    "g_min",
    "g_max",
    "kappa_s_min",
    "kappa_s_max",
    "resolution",
    "pol",
    "spatial",
}

_FLOAT_KEYS = {
    "g", "kappa_s", "gamma", "detuning", "tolerance",
    "g_min", "g_max", "kappa_s_min", "kappa_s_max",
}
_INT_KEYS = {"seed", "resolution", "pol", "spatial"}


def load_config(path: str) -> dict:
    """Parse a flat key = value file; '#' starts a comment."""
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value, got {raw!r}")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            value = value.strip()
            if key in _FLOAT_KEYS:
                values[key] = float(value)
            elif key in _INT_KEYS:
                values[key] = int(value)
            else:
                values[key] = value
    return values


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Fill in options the command line left unset from the config file."""
    if not getattr(args, "config", None):
        return args
    try:
        values = load_config(args.config)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    for key, value in values.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _cavity_params(args: argparse.Namespace, parser: argparse.ArgumentParser) -> CavityParams:
    if args.g is None:
        parser.error("physical mode requires --g (or g in the config file)")
    return CavityParams(
        g=args.g,
        kappa_s=args.kappa_s if args.kappa_s is not None else 0.0,
        gamma=args.gamma if args.gamma is not None else 0.1,
        detuning=args.detuning if args.detuning is not None else 0.5,
    )


def _reflection(args: argparse.Namespace, parser: argparse.ArgumentParser) -> ReflectionPair | None:
    mode = args.mode or "ideal"
    if mode == "ideal":
        return None
    return ReflectionPair.from_params(_cavity_params(args, parser))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_amplitude_pair(raw: str, flag: str, parser: argparse.ArgumentParser):
    parts = raw.split(",")
    if len(parts) != 2:
        parser.error(f"{flag} expects two comma-separated amplitudes, got {raw!r}")
    try:
        pair = np.array([complex(p.strip()) for p in parts])
    except ValueError:
        parser.error(f"{flag}: could not parse {raw!r} as complex amplitudes")
    norm = float(np.linalg.norm(pair))
    if norm <= 0:
        parser.error(f"{flag}: zero amplitudes")
    if abs(norm - 1.0) > 1e-6:
        print(
            f"warning: {flag} renormalized (norm was {norm:.9g})",
            file=sys.stderr,
        )
    return pair / norm


def _input_state(args: argparse.Namespace, parser: argparse.ArgumentParser):
    pairs = {}
    for flag, attr in (
        ("--a-pol", "a_pol"),
        ("--a-spatial", "a_spatial"),
        ("--b-pol", "b_pol"),
        ("--b-spatial", "b_spatial"),
    ):
        raw = getattr(args, attr, None)
        if raw is not None:
            pairs[attr] = _parse_amplitude_pair(raw, flag, parser)
    preset = args.input or "uniform"
    if pairs:
        s2 = 1 / np.sqrt(2.0)
        default = np.array([s2, s2])
        a = photon_state("a", pairs.get("a_pol", default), pairs.get("a_spatial", default))
        b = photon_state("b", pairs.get("b_pol", default), pairs.get("b_spatial", default))
        return tensor_product(a, b)
    if preset == "uniform":
        return uniform_two_photon_state()
    if preset.startswith("basis:"):
        names = [n.strip() for n in preset[len("basis:"):].split(",")]
        if len(names) != 4:
            parser.error("basis preset needs four names, e.g. basis:L,a2,R,b1")
        try:
            a = photon_state("a", _unit_pair(("R", "L"), names[0]), _unit_pair(("a1", "a2"), names[1]))
            b = photon_state("b", _unit_pair(("R", "L"), names[2]), _unit_pair(("b1", "b2"), names[3]))
        except ValueError as exc:
            parser.error(str(exc))
        return tensor_product(a, b)
    parser.error(f"unknown input preset {preset!r}")


def _unit_pair(names: tuple[str, str], chosen: str):
    if chosen not in names:
        raise ValueError(f"basis name {chosen!r} not in {names}")
    return (1.0, 0.0) if chosen == names[0] else (0.0, 1.0)


# -- commands ------------------------------------------------------------


def cmd_truth_table(args, parser) -> int:
    reflection = _reflection(args, parser)
    rows = truth_table(reflection)
    lines = [f"{'input':<16} {'expected':<16} {'observed':<16} {'fidelity':>10}  result"]
    for row in rows:
        lines.append(
            f"{','.join(row.input_names):<16} {','.join(row.expected_names):<16} "
            f"{','.join(row.observed_names):<16} {row.min_fidelity:>10.6f}  "
            f"{'PASS' if row.ok else 'FAIL'}"
        )
    passed = sum(row.ok for row in rows)
    lines.append(f"{passed}/16 PASS")
    payload = {
        "rows": [
            {
                "input": list(r.input_names),
                "expected": list(r.expected_names),
                "observed": list(r.observed_names),
                "min_fidelity": r.min_fidelity,
                "ok": r.ok,
            }
            for r in rows
        ],
        "passed": passed,
    }
    _emit(_render(lines, payload, args.format), args.out)
    return 0 if passed == 16 else 1


def cmd_gate(args, parser) -> int:
    reflection = _reflection(args, parser)
    joint = _input_state(args, parser)
    ideal_final = hyper_cnot_state(joint, None)[0].final_state
    if args.seed is not None:
        runs = [hyper_cnot_state(joint, reflection, branch_mode="sample", seed=args.seed)]
    else:
        runs = hyper_cnot_state(joint, reflection)
    lines = [
        f"mode={runs[0].mode} survival={runs[0].survival_probability:.9f}",
        f"{'e1':>4} {'e2':>4} {'p(branch)':>10} {'fidelity':>10}  feed-forward",
    ]
    branch_rows = []
    for run in runs:
        fid = fidelity_up_to_global_phase(run.final_state, ideal_final)
        ff = ",".join(run.feed_forward_ops) or "-"
        names = ("up", "down")
        lines.append(
            f"{names[run.spin_outcomes[0]]:>4} {names[run.spin_outcomes[1]]:>4} "
            f"{run.branch_probability:>10.6f} {fid:>10.6f}  {ff}"
        )
        branch_rows.append(
            {
                "spin_outcomes": list(run.spin_outcomes),
                "branch_probability": run.branch_probability,
                "fidelity_vs_ideal": fid,
                "feed_forward_ops": list(run.feed_forward_ops),
            }
        )
    lines.append(f"final state ({runs[-1].mode}, last branch): {runs[-1].final_state.terms()}")
    payload = {
        "mode": runs[0].mode,
        "survival_probability": runs[0].survival_probability,
        "branches": branch_rows,
    }
    _emit(_render(lines, payload, args.format), args.out)
    return 0


def cmd_cluster(args, parser) -> int:
    reflection = _reflection(args, parser)
    stages = prepare_cluster_stages(reflection)
    ideal = prepare_cluster_stages(None)
    pairs = [
        ("hyperentangled bell", stages.hyper_bell, ideal.hyper_bell),
        ("after control hadamards", stages.after_control_hadamards, ideal.after_control_hadamards),
        ("after conditional flip", stages.after_conditional_flip, ideal.after_conditional_flip),
        ("cluster", stages.cluster, ideal.cluster),
    ]
    lines = []
    payload = {"stages": []}
    for name, got, want in pairs:
        fid = fidelity_up_to_global_phase(got, want)
        lines.append(f"{name:<26} fidelity vs ideal target: {fid:.9f}")
        payload["stages"].append({"stage": name, "fidelity_vs_ideal": fid})
    lines.append(f"cluster state: {stages.cluster.terms()}")
    _emit(_render(lines, payload, args.format), args.out)
    return 0


def cmd_bell_analyze(args, parser) -> int:
    reflection = _reflection(args, parser)
    if args.pol is not None or args.spatial is not None:
        if args.pol is None or args.spatial is None:
            parser.error("--pol and --spatial must be given together")
        requests = [(args.pol, args.spatial)]
    else:
        requests = [(p, s) for p in range(4) for s in range(4)]
    names = ("phi+", "phi-", "psi+", "psi-")
    lines = [f"{'input':<14} {'pattern':<22} {'decoded':<14} {'deterministic':<13} min-prob"]
    payload = {"rows": []}
    patterns = []
    ok = True
    for pol, spatial in requests:
        result = analyze_hyper_bell(HyperBellState(pol, spatial), reflection)
        decoded_ok = (result.pol_index, result.spatial_index) == (pol, spatial)
        ok = ok and decoded_ok
        patterns.append(result.pattern)
        decoded = (
            f"{names[result.pol_index]},{names[result.spatial_index]}"
            if result.pol_index is not None
            else "?"
        )
        lines.append(
            f"{names[pol]},{names[spatial]:<9} {','.join(result.pattern):<22} "
            f"{decoded:<14} {str(result.deterministic):<13} {result.min_outcome_probability:.6f}"
        )
        payload["rows"].append(
            {
                "input": [pol, spatial],
                "pattern": list(result.pattern),
                "decoded": [result.pol_index, result.spatial_index],
                "deterministic": result.deterministic,
                "min_outcome_probability": result.min_outcome_probability,
            }
        )
    distinct = len(set(patterns)) == len(patterns)
    ok = ok and distinct
    lines.append(
        f"{len(set(patterns))}/{len(patterns)} distinct patterns: "
        f"{'PASS' if ok else 'FAIL'}"
    )
    payload["distinct"] = distinct
    _emit(_render(lines, payload, args.format), args.out)
    return 0 if ok else 1


def cmd_sweep(args, parser) -> int:
    g_range = (
        args.g_min if args.g_min is not None else 0.0,
        args.g_max if args.g_max is not None else 3.0,
    )
    ks_range = (
        args.kappa_s_min if args.kappa_s_min is not None else 0.0,
        args.kappa_s_max if args.kappa_s_max is not None else 2.0,
    )
    resolution = args.resolution if args.resolution is not None else 101
    gamma = args.gamma if args.gamma is not None else 0.1
    try:
        result = sweep(g_range, ks_range, resolution, gamma)
    except ValueError as exc:
        parser.error(str(exc))
    lines = ["g_over_kappa,kappa_s_over_kappa,gamma_over_kappa,F,eta"]
    for point in result.grid:
        lines.append(
            f"{point.g_over_kappa:.10g},{point.kappa_s_over_kappa:.10g},"
            f"{point.gamma_over_kappa:.10g},{point.F_formula:.10g},{point.eta_formula:.10g}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_paper_check(args, parser) -> int:
    tolerance = args.tolerance if args.tolerance is not None else REFERENCE_TOLERANCE
    gamma = args.gamma if args.gamma is not None else 0.1
    rows = reference_check(gamma)
    lines = [
        f"{'g/k':>6} {'ks/k':>5} {'F ref':>7} {'F calc':>8} {'|dF|':>8} "
        f"{'eta ref':>8} {'eta calc':>9} {'|deta|':>8}  result"
    ]
    payload = {"tolerance": tolerance, "rows": []}
    all_ok = True
    for row in rows:
        ok = row.within(tolerance)
        all_ok = all_ok and ok
        lines.append(
            f"{row.point.g_over_kappa:>6.2f} {row.point.kappa_s_over_kappa:>5.2f} "
            f"{row.point.fidelity:>7.3f} {row.fidelity_computed:>8.4f} {row.fidelity_delta:>8.5f} "
            f"{row.point.efficiency:>8.3f} {row.efficiency_computed:>9.4f} {row.efficiency_delta:>8.5f}"
            f"  {'PASS' if ok else 'FAIL'}"
        )
        payload["rows"].append(
            {
                "g_over_kappa": row.point.g_over_kappa,
                "kappa_s_over_kappa": row.point.kappa_s_over_kappa,
                "fidelity_reference": row.point.fidelity,
                "fidelity_computed": row.fidelity_computed,
                "efficiency_reference": row.point.efficiency,
                "efficiency_computed": row.efficiency_computed,
                "ok": ok,
            }
        )
    if args.simulate:
        lines.append("")
        lines.append("circuit-level cross-check (uniform input, complex reflections):")
        payload["simulated"] = []
        for row in rows:
            params = CavityParams(
                g=row.point.g_over_kappa, kappa_s=row.point.kappa_s_over_kappa, gamma=gamma
            )
            f_sim, eta_sim = simulated_performance(params)
            lines.append(
                f"  g={row.point.g_over_kappa:.2f} ks={row.point.kappa_s_over_kappa:.2f}: "
                f"F_sim={f_sim:.4f} (formula {row.fidelity_computed:.4f}), "
                f"eta_sim={eta_sim:.6f} (formula {row.efficiency_computed:.6f})"
            )
            payload["simulated"].append(
                {
                    "g_over_kappa": row.point.g_over_kappa,
                    "kappa_s_over_kappa": row.point.kappa_s_over_kappa,
                    "F_sim": f_sim,
                    "eta_sim": eta_sim,
                }
            )
    lines.append(f"{'all within' if all_ok else 'out of'} tolerance {tolerance:g}")
    _emit(_render(lines, payload, args.format), args.out)
    return 0 if all_ok else 1


def _render(lines: list[str], payload: dict, fmt: str | None) -> str:
    if (fmt or "text") == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    return "\n".join(lines) + "\n"


# -- parser ---------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser, formats=("text", "json")) -> None:
    sub.add_argument("--config", help="flat key=value config file; flags override it")
    sub.add_argument("--mode", choices=["ideal", "physical"], default=None)
    sub.add_argument("--g", type=float, default=None, help="coupling strength, units of kappa")
    sub.add_argument("--kappa-s", type=float, default=None, help="side leakage rate, units of kappa")
    sub.add_argument("--gamma", type=float, default=None, help="dipole decay rate, units of kappa")
    sub.add_argument("--detuning", type=float, default=None, help="probe minus cavity frequency")
    sub.add_argument("--out", default=None, help="write output to a file instead of stdout")
    sub.add_argument("--format", choices=list(formats), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypercnot",
        description="Simulate the two-photon spatial-polarization hyper-CNOT gate",
    )
    parser.add_argument("--version", action="version", version=f"hypercnot {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("truth-table", help="run all 16 basis inputs and verify the logic")
    _add_common(p)
    p.set_defaults(func=cmd_truth_table)

    p = commands.add_parser("gate", help="run the gate on a configurable input state")
    _add_common(p)
    p.add_argument("--input", default=None, help="'uniform' or 'basis:R,a1,R,b1'")
    p.add_argument("--a-pol", default=None, help="control polarization amplitudes 'c0,c1'")
    p.add_argument("--a-spatial", default=None, help="control spatial amplitudes 'c0,c1'")
    p.add_argument("--b-pol", default=None, help="target polarization amplitudes 'c0,c1'")
    p.add_argument("--b-spatial", default=None, help="target spatial amplitudes 'c0,c1'")
    p.add_argument("--seed", type=int, default=None, help="sample one spin branch with this seed")
    p.set_defaults(func=cmd_gate)

    p = commands.add_parser("cluster", help="prepare the two-photon four-qubit cluster state")
    _add_common(p)
    p.set_defaults(func=cmd_cluster)

    p = commands.add_parser("bell-analyze", help="decode hyperentangled Bell states")
    _add_common(p)
    p.add_argument("--pol", type=int, default=None, help="analyze a single state: pol index 0..3")
    p.add_argument("--spatial", type=int, default=None, help="spatial index 0..3")
    p.set_defaults(func=cmd_bell_analyze)

    p = commands.add_parser("sweep", help="grid of closed-form performance figures as CSV")
    _add_common(p, formats=("csv",))
    p.add_argument("--g-min", type=float, default=None)
    p.add_argument("--g-max", type=float, default=None)
    p.add_argument("--kappa-s-min", type=float, default=None)
    p.add_argument("--kappa-s-max", type=float, default=None)
    p.add_argument("--resolution", type=int, default=None, help="lattice points per axis (default 101)")
    p.set_defaults(func=cmd_sweep)

    p = commands.add_parser("paper-check", help="compare against the published benchmark values")
    _add_common(p)
    p.add_argument("--tolerance", type=float, default=None, help=f"default {REFERENCE_TOLERANCE}")
    p.add_argument("--simulate", action="store_true", help="also report circuit-level figures")
    p.set_defaults(func=cmd_paper_check)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _merge_config(args, parser)
    try:
        return args.func(args, parser)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
