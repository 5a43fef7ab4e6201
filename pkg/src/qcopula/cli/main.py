"""Command-line entry point: build, simulate, sample, verify, var, cqep, unitary."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .. import circuits as C
from ..copula import (
    ArchimedeanParams,
    CopulaGrid,
    FabricParams,
    MarginError,
    Mb11Spec,
    SetPartition,
    canonical_grid,
    discretize_cdf,
    fabric_spearman,
    grid_spearman,
    mb11_weights_from_taildep,
    mixture_grid,
    to_number,
)
from ..qsim import Circuit, circuit_unitary, grid_distribution, msb_distribution, run, sample
from ..riskq import (
    AEConfig,
    LossModel,
    classical_cdf,
    classical_cqep,
    estimate_cdf,
    estimate_cqep,
    estimate_var,
)
from .io import (
    circuit_from_json,
    circuit_to_json,
    counts_to_csv,
    density_pgm,
    grid_from_csv,
    grid_to_csv,
    unitary_pgm,
)
from .qasm import from_qasm, to_qasm

MAX_SIM_QUBITS = 24
FAMILIES = (
    "m2", "w2", "pi", "canonical", "b11-pure", "b11-mixed", "mn-pin", "mb11-mixed",
    "mb11-pure3", "frechet3-pure", "frechet2", "benchmark4", "generic-gumbel",
    "generic-clayton", "fabric",
)


class CliError(Exception):
    pass


@dataclass
class Instance:
    circuit: Circuit
    oracle: np.ndarray | None = None
    notes: dict = field(default_factory=dict)


def _num(text):
    return None if text is None else to_number(text)


def _spec(args) -> Mb11Spec:
    if args.weights:
        pairs = [item.split("=") for item in args.weights.split(",")]
        return Mb11Spec.from_codes({code.strip(): w.strip() for code, w in pairs})
    if args.lambda_:
        vals = [to_number(v) for v in args.lambda_.split(",")]
        if len(vals) != 4:
            raise CliError("--lambda takes l12,l13,l23,l123")
        return mb11_weights_from_taildep(*vals)
    raise CliError("give mixture weights with --weights or tail coefficients with --lambda")


def _fabric_params(args) -> FabricParams:
    if args.p:
        return FabricParams(np.array([[float(v) for v in row.split(",")] for row in args.p.split(";")]))
    rng = np.random.default_rng(args.seed)
    return FabricParams.random(args.n or 2, args.k, rng)


def make_instance(args) -> Instance:
    fam, k = args.family, args.k
    alpha = _num(args.alpha)
    if fam in ("m2", "w2", "pi"):
        n = args.n or 2
        circ = C.build_fundamental(fam, k, n)
        part = {"m2": C.FUNDAMENTAL["M2"], "w2": C.FUNDAMENTAL["W2"]}.get(fam)
        part = part or SetPartition(tuple((i,) for i in range(1, n + 1)))
        return Instance(circ, canonical_grid(part, k).cells)
    if fam == "canonical":
        part = SetPartition.parse(args.partition or "12")
        return Instance(C.build_canonical(part, k), canonical_grid(part, k).cells)
    if fam in ("b11-pure", "b11-mixed"):
        a = Fraction(1, 2) if alpha is None else alpha
        build = C.build_b11_pure if fam == "b11-pure" else C.build_b11_mixed
        spec = Mb11Spec.frechet(max(a, 0), max(-a, 0))
        return Instance(build(a, k), mixture_grid(spec, k).cells)
    if fam == "mn-pin":
        a = Fraction(1, 2) if alpha is None else alpha
        n = args.n or 3
        spec = Mb11Spec(n, {SetPartition((tuple(range(1, n + 1)),)): a,
                            SetPartition(tuple((i,) for i in range(1, n + 1))): 1 - a})
        return Instance(C.build_mn_pin(a, n), mixture_grid(spec, 1).cells)
    if fam in ("mb11-mixed", "mb11-pure3", "frechet3-pure"):
        spec = _spec(args)
        build = {"mb11-mixed": C.build_mb11_mixed, "mb11-pure3": C.build_mb11_pure3,
                 "frechet3-pure": C.build_frechet3_pure}[fam]
        return Instance(build(spec, k), mixture_grid(spec, k).cells)
    if fam == "frechet2":
        a = Fraction(1, 2) if alpha is None else alpha
        b = _num(args.beta) or Fraction(0)
        grid = mixture_grid(Mb11Spec.frechet(a, b), k)
        return Instance(C.build_generic(grid), grid.cells)
    if fam == "benchmark4":
        circ = C.build_benchmark4(k)
        return Instance(circ, mixture_grid(C.benchmark4_spec(), k).cells, {"controls": [0, 1]})
    if fam in ("generic-gumbel", "generic-clayton"):
        theta = float(args.theta) if args.theta is not None else 2.0
        params = ArchimedeanParams(fam.split("-")[1], theta)
        grid = discretize_cdf(params.cdf, k)
        return Instance(C.build_generic(grid), grid.cells, {"synthesizers": len(C.level_loads(grid))})
    if fam == "fabric":
        params = _fabric_params(args)
        return Instance(C.build_fabric(params), None, {"fabric": params})
    raise CliError(f"unknown family {fam!r}")


def load_circuit(path: str) -> Circuit:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return circuit_from_json(text)
    return from_qasm(text)


def _circuit(args) -> Circuit:
    if getattr(args, "circuit", None):
        return load_circuit(args.circuit)
    if not args.family:
        raise CliError("name a family or pass --circuit")
    return make_instance(args).circuit


def _write(path, data, binary=False):
    if path in (None, "-"):
        if binary:
            sys.stdout.buffer.write(data)
        else:
            sys.stdout.write(data)
        return
    Path(path).write_bytes(data) if binary else Path(path).write_text(data)


def _cells(circ: Circuit) -> np.ndarray:
    if circ.num_qubits > MAX_SIM_QUBITS:
        raise CliError(f"{circ.num_qubits} qubits exceed the simulation budget of {MAX_SIM_QUBITS}")
    return grid_distribution(run(circ), circ.layout)


def _pair(cells: np.ndarray) -> np.ndarray:
    return cells.sum(axis=tuple(range(2, cells.ndim))) if cells.ndim > 2 else cells


# -- subcommands -----------------------------------------------------------

def cmd_build(args) -> int:
    circ = make_instance(args).circuit
    _write(args.out, to_qasm(circ) if args.format == "qasm" else circuit_to_json(circ) + "\n")
    return 0


def cmd_simulate(args) -> int:
    circ = _circuit(args)
    cells = _cells(circ)
    if args.format == "pgm":
        _write(args.out, density_pgm(_pair(cells)), binary=True)
    else:
        _write(args.out, grid_to_csv(cells))
    if args.pgm:
        _write(args.pgm, density_pgm(_pair(cells)), binary=True)
    return 0


def cmd_sample(args) -> int:
    circ = _circuit(args)
    state = run(circ)
    keep = list(reversed(circ.layout.copula_qubits()))
    counts = sample(state, args.shots, args.seed, keep=keep)
    _write(args.out, counts_to_csv(counts, circ.layout.n, circ.layout.k))
    return 0


def _check(lines, name, ok, detail):
    lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return ok


def cmd_verify(args) -> int:
    lines: list[str] = []
    ok = True
    tol = args.tol
    if args.grid:
        cells = grid_from_csv(Path(args.grid).read_text())
        grid = CopulaGrid.from_array(cells)
        dev = grid.margin_deviation()
        ok &= _check(lines, "margins", dev <= 1e-9, f"max margin deviation {dev:.3e}")
        if ok:
            try:
                circ = C.build_generic(grid)
            except MarginError as exc:  # pragma: no cover - caught above
                ok &= _check(lines, "build", False, str(exc))
            else:
                err = float(np.abs(_cells(circ) - cells).max())
                ok &= _check(lines, "oracle", err <= tol, f"max cell error {err:.3e}")
                lines.append(f"INFO qubits: {circ.num_qubits}")
    else:
        inst = make_instance(args)
        circ = inst.circuit
        cells = _cells(circ)
        lines.append(f"INFO qubits: {circ.num_qubits} (copula {len(circ.layout.copula_qubits())}, "
                     f"control {len(circ.layout.controls)})")
        if inst.oracle is not None:
            err = float(np.abs(cells - inst.oracle).max())
            ok &= _check(lines, "oracle", err <= tol, f"max cell error {err:.3e}")
        dev = CopulaGrid.from_array(cells).margin_deviation()
        ok &= _check(lines, "margins", dev <= 1e-9, f"max margin deviation {dev:.3e}")
        if "controls" in inst.notes:
            ctrl = msb_distribution(run(circ), inst.notes["controls"])
            want = np.array([1 / 3, 1 / 3, 1 / 3, 0.0])
            ok &= _check(lines, "control distribution", np.abs(ctrl - want).max() <= 1e-12,
                         "(" + ", ".join(f"{p:.6f}" for p in ctrl) + ")")
        if "synthesizers" in inst.notes:
            want = C.synthesizer_count(2, args.k)
            got = inst.notes["synthesizers"]
            ok &= _check(lines, "synthesizer count", got == want, f"{got} (formula {want})")
        if "fabric" in inst.notes:
            grid = CopulaGrid.from_array(cells)
            n = grid.n
            rho = fabric_spearman(inst.notes["fabric"])
            err = max(abs(grid_spearman(grid, i, j) - rho[i - 1, j - 1])
                      for i in range(1, n + 1) for j in range(i + 1, n + 1))
            ok &= _check(lines, "spearman", err <= 1e-9, f"max deviation from closed form {err:.3e}")
    lines.append("RESULT " + ("PASS" if ok else "FAIL"))
    _write(args.out, "\n".join(lines) + "\n")
    return 0 if ok else 1


def _risk_instance(args):
    a = Fraction(1, 2) if args.alpha is None else to_number(args.alpha)
    k = args.k
    circ = C.build_b11_pure(a, k)
    cells = grid_distribution(run(circ), circ.layout)
    return circ, cells


def cmd_var(args) -> int:
    circ, cells = _risk_instance(args)
    model = LossModel(tuple(int(c) for c in args.coefficients.split(",")), args.k)
    cfg = AEConfig(args.m, args.shots, args.seed)
    truth = [float(t) for t in classical_cdf(model, cells)]
    rows = ["v,true,estimate,grid_step,within"]
    for v in model.support:
        est = estimate_cdf(model, circ, v, cfg)
        step = cfg.step_around(truth[v])
        rows.append(f"{v},{truth[v]!r},{est!r},{step!r},{int(abs(est - truth[v]) <= step + 1e-12)}")
    for level in args.levels or []:
        rows.append(f"# var level={level} estimate={estimate_var(model, circ, float(level), cfg)} "
                    f"true={int(np.argmax(np.array(truth) >= float(level) - 1e-15))}")
    _write(args.out, "\n".join(rows) + "\n")
    return 0


def cmd_cqep(args) -> int:
    circ, cells = _risk_instance(args)
    cfg = AEConfig(args.m, args.shots, args.seed)
    size = 2**args.k
    qs = [int(q) for q in args.q.split(",")] if args.q else list(range(size))
    rows = ["q_index,true,estimate,tolerance,within"]
    for q in qs:
        true = classical_cqep(cells, q)
        est = estimate_cqep(circ, q, cfg)
        tol = cfg.step_around(true * (1 - q / size)) / (1 - q / size)
        rows.append(f"{q},{true!r},{est!r},{tol!r},{int(abs(est - true) <= tol + 1e-12)}")
    _write(args.out, "\n".join(rows) + "\n")
    return 0


def cmd_unitary(args) -> int:
    circ = _circuit(args)
    u = circuit_unitary(circ)
    if args.format == "csv":
        rows = [",".join(repr(float(v)) for v in row) for row in np.real(u)]
        _write(args.out, "\n".join(rows) + "\n")
    else:
        _write(args.out, unitary_pgm(u), binary=True)
    return 0


# -- argument parsing --------------------------------------------------------

def _family_args(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("family", nargs="?" if not required else None, choices=FAMILIES)
    p.add_argument("--family", dest="family_opt", choices=FAMILIES, help=argparse.SUPPRESS)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", help="mixing weight; fractions like 1/3 stay exact")
    p.add_argument("--beta")
    p.add_argument("--lambda", dest="lambda_", help="l12,l13,l23,l123")
    p.add_argument("--weights", help="partition=weight list, e.g. 111=1/2,112=1/2")
    p.add_argument("--partition", help="partition code such as 1-12")
    p.add_argument("--theta")
    p.add_argument("--p", help="fabric probabilities, rows separated by ';'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcopula", description="Quantum circuits for discretized copulas.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a circuit as JSON or OpenQASM")
    _family_args(p, required=False)
    p.add_argument("--format", choices=("json", "qasm"), default="json")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("simulate", help="exact cell probabilities (CSV or PGM)")
    _family_args(p, required=False)
    p.add_argument("--circuit", help="JSON or QASM circuit file")
    p.add_argument("--format", choices=("csv", "pgm"), default="csv")
    p.add_argument("--pgm", help="also write a heatmap here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sample", help="seeded measurement counts")
    _family_args(p, required=False)
    p.add_argument("--circuit")
    p.add_argument("--shots", type=int, default=1000)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="compare a circuit with its classical grid")
    _family_args(p, required=False)
    p.add_argument("--grid", help="CSV grid to load exactly")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify)

    for name, func in (("var", cmd_var), ("cqep", cmd_cqep)):
        p = sub.add_parser(name, help="amplitude-estimation risk sweep on a B11 instance")
        p.add_argument("--alpha")
        p.add_argument("--k", type=int, default=2)
        p.add_argument("--m", type=int, default=7)
        p.add_argument("--shots", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", "-o")
        if name == "var":
            p.add_argument("--coefficients", default="16,4")
            p.add_argument("--levels", type=float, nargs="*")
        else:
            p.add_argument("--q", help="comma-separated q indices (default: all)")
        p.set_defaults(func=func)

    p = sub.add_parser("unitary", help="sign/magnitude raster of the circuit unitary")
    _family_args(p, required=False)
    p.add_argument("--circuit")
    p.add_argument("--format", choices=("pgm", "csv"), default="pgm")
    p.set_defaults(func=cmd_unitary)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "family_opt", None) and not args.family:
        args.family = args.family_opt
    try:
        if args.command in ("build", "verify") and not args.family and not getattr(args, "grid", None):
            raise CliError("name a circuit family")
        return args.func(args)
    except (CliError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
