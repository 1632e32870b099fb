"""Command-line entry point: compile, verify, sweep and fit."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Sequence

from . import baseline, compiler, cost, sim
from .circuit import Circuit, resource_report, serialize
from .parity import dump

TOLERANCE = 1e-9


class UsageError(Exception):
    pass


def _load_instance(args: argparse.Namespace) -> tuple[compiler.QAOAInstance, int | None]:
    if args.instance:
        try:
            inst = compiler.QAOAInstance.from_json(Path(args.instance).read_text())
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad instance file {args.instance}: {exc}") from None
        if args.n is not None and args.n != inst.n:
            raise UsageError(f"--n {args.n} disagrees with instance n={inst.n}")
        return inst, None
    if args.n is None:
        raise UsageError("--n is required without --instance")
    return compiler.QAOAInstance.random(args.n, seed=args.seed, p=args.p), args.seed


def _compile(algorithm: str, method: str, n: int, inst: compiler.QAOAInstance | None, keep_zero: bool):
    if algorithm == "qaoa":
        if method == "lpc":
            return compiler.compile_qaoa(inst, keep_zero_rotations=keep_zero)
        return baseline.compile_baseline_qaoa(inst)
    return compiler.compile_qft(n) if method == "lpc" else baseline.route_qft(n)


def _lower(circuit: Circuit) -> Circuit:
    return baseline.fixed_angle_lowering(compiler.lower_cnot_to_rzz(circuit))


def cmd_compile(args: argparse.Namespace) -> int:
    inst, seed = (None, None)
    if args.algorithm == "qaoa":
        inst, seed = _load_instance(args)
        if inst.n < 2:
            raise UsageError("QAOA needs n >= 2")
        n = inst.n
    else:
        if args.n is None or args.n < 1:
            raise UsageError("QFT needs --n >= 1")
        n = args.n
    try:
        result = _compile(args.algorithm, args.method, n, inst, args.keep_zero_rotations)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    circuit = _lower(result.circuit) if args.fixed_angle else result.circuit
    report = {
        "algorithm": args.algorithm,
        "method": args.method,
        "n": n,
        "fixed_angle": args.fixed_angle,
        "seed": seed,
        "resources": resource_report(circuit).as_dict(),
        "final_labels": [list(s) for s in result.final_flow.as_sets()],
    }
    if args.method == "lpc" and args.algorithm == "qaoa":
        report["phase_separator_cnots"] = result.phase_separator_cnots
    if args.output:
        out = Path(args.output)
        out.write_text(serialize(circuit))
        Path(f"{out}.report.json").write_text(json.dumps(report, indent=2) + "\n")
        if args.trace:
            blocks = [f"# state {t}\n{dump(s)}" for t, s in enumerate(result.trace)]
            Path(f"{out}.trace.txt").write_text("\n".join(blocks) + "\n")
    elif args.trace:
        raise UsageError("--trace needs -o")
    print(json.dumps(report, indent=2))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    limit = sim.max_qubits()
    if args.n > limit:
        raise UsageError(f"n={args.n} exceeds the simulation limit of {limit} qubits (LPC_SIM_MAX_QUBITS)")
    if args.algorithm == "qaoa":
        if args.n < 2:
            raise UsageError("QAOA needs n >= 2")
        inst = compiler.QAOAInstance.random(args.n, seed=args.seed, p=args.p)
        reference = sim.qaoa_reference(inst)
    else:
        inst = None
        # Logical frame: the textbook QFT without its closing reversal.
        reference = sim.bit_reversal(args.n) @ sim.dft_matrix(args.n)
    ok = True
    for method in ("lpc", "baseline"):
        result = _compile(args.algorithm, method, args.n, inst, keep_zero=False)
        fid = sim.logical_equiv(result, reference)
        passed = fid >= 1 - TOLERANCE
        ok &= passed
        print(f"{args.algorithm} n={args.n} seed={args.seed} {method}: fidelity={fid:.15f} {'PASS' if passed else 'FAIL'}")
    return 0 if ok else 1


def _write_csv(path: str | None, header: list[str], rows: list[dict]) -> None:
    fh = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if path:
            fh.close()


def resource_rows(algorithm: str, n_min: int, n_max: int, seed: int = 0) -> list[dict]:
    rows = []
    for n in range(n_min, n_max + 1):
        inst = compiler.QAOAInstance.random(n, seed=seed) if algorithm == "qaoa" else None
        for method in ("lpc", "baseline"):
            result = _compile(algorithm, method, n, inst, keep_zero=False)
            rep = resource_report(compiler.lower_cnot_to_rzz(result.circuit))
            rows.append(
                {
                    "n": n,
                    "method": method,
                    "n_swap": rep.n_swap,
                    "n_rzz": rep.n_rzz,
                    "n_2q_total": rep.n2q,
                    "two_qubit_depth": rep.two_qubit_depth,
                }
            )
    return rows


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.n_min > args.n_max:
        raise UsageError("--n-min must not exceed --n-max")
    if args.kind == "resources":
        if args.n_min < 2:
            raise UsageError("resource sweeps start at n >= 2")
        header = ["n", "method", "n_swap", "n_rzz", "n_2q_total", "two_qubit_depth"]
        rows = resource_rows(args.algorithm, args.n_min, args.n_max, args.seed)
    else:
        if args.n_min < 1:
            raise UsageError("runtime sweeps start at n >= 1")
        params = cost.CostParams()
        if args.cost_params:
            try:
                params = cost.CostParams.from_json(Path(args.cost_params).read_text())
            except (OSError, ValueError, TypeError) as exc:
                raise UsageError(f"bad cost parameters {args.cost_params}: {exc}") from None
        header = ["n", "t_run_standard_s", "t_transp_s", "t_cool_s", "t_run_lpc_s"]
        rows = cost.runtime_rows(params, args.n_min, args.n_max)
    _write_csv(args.output, header, rows)
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    try:
        points = cost.load_fit_csv(args.csv)
        fit = cost.fit_power_law(points)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    print(json.dumps({"a": fit.a, "b": fit.b, "a_err": fit.a_err, "b_err": fit.b_err, "points": len(points)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpc", description="SWAP-free linear parity compilation tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a QAOA or QFT circuit")
    p.add_argument("algorithm", choices=["qaoa", "qft"])
    p.add_argument("--n", type=int)
    p.add_argument("--instance", help="QAOA instance JSON")
    p.add_argument("--method", choices=["lpc", "baseline"], default="lpc")
    p.add_argument("--fixed-angle", action="store_true", help="express all entanglers as RZZ(pi/2)")
    p.add_argument("--trace", action="store_true", help="also write the label-state trace")
    p.add_argument("--keep-zero-rotations", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="seed for the random QAOA instance")
    p.add_argument("--p", type=int, default=1, help="QAOA rounds for the random instance")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="check compiled circuits against dense references")
    p.add_argument("algorithm", choices=["qaoa", "qft"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="write resource or runtime CSVs over a range of n")
    p.add_argument("kind", choices=["resources", "runtime"])
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--algorithm", choices=["qaoa", "qft"], default="qaoa", help="resources only")
    p.add_argument("--seed", type=int, default=0, help="resources only: QAOA instance seed")
    p.add_argument("--cost-params", help="runtime only: CostParams JSON")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="fit cooling = a * transport^b to a CSV")
    p.add_argument("csv")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lpc {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
