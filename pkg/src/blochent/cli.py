"""Command-line entry point: ``blochent <command> ...``.

Exit codes: 0 ok, 1 verification failure, 2 usage error or unknown name,
3 violated precondition, 4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import families as fam
from .export import write_binary, write_csv
from .grover import grover_run, peak_alignment
from .measure import e_t, e_t_dicke, r_n
from .monotonicity import diagonal_kraus_pair, povm_experiment
from .roof import RoofConfig, roof_estimate
from .state import ContractViolation, DensityMatrix, NumericalIntegrityError, ZeroProbabilityOutcome
from .tensor import GENERIC_CAP, NotSymmetricError, ResourceLimitError, correlation_tensor
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION, EXIT_IO = 0, 1, 2, 3, 4

PARAMS = ("p", "s", "phi", "qubits", "m")

# values printed in the worked single-qubit measurement example
POVM_REFERENCE = {
    "input_e_t_normalized": 0.7802,
    "p1": 0.5533,
    "p2": 0.4467,
    "p1_e_t1_normalized": 0.0725,
    "p2_e_t2_normalized": 0.0436,
    "gap_normalized": 0.6641,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: Optional[str] = None
    params: dict = field(default_factory=dict)
    param: Optional[str] = None
    grid: Optional[list] = None
    out: Optional[str] = None
    fmt: Optional[str] = None
    normalize: bool = False
    seed: int = 0
    max_qubits: int = GENERIC_CAP
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        params = {k: getattr(ns, k) for k in PARAMS if getattr(ns, k, None) is not None}
        if getattr(ns, "lambdas", None) is not None:
            params["lambdas"] = tuple(ns.lambdas)
        known = {"command", "family", "param", "grid", "out", "format", "normalize", "seed", "max_qubits", "lambdas", *PARAMS}
        return cls(
            command=ns.command,
            family=getattr(ns, "family", None),
            params=params,
            param=getattr(ns, "param", None),
            grid=parse_grid(ns.grid) if getattr(ns, "grid", None) else None,
            out=ns.out,
            fmt=ns.format,
            normalize=ns.normalize,
            seed=ns.seed,
            max_qubits=ns.max_qubits,
            extra={k: v for k, v in vars(ns).items() if k not in known},
        )


def parse_grid(text: str) -> list[float]:
    """``start:stop:count`` (inclusive linspace) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            vals = np.linspace(float(start), float(stop), int(count)).tolist()
        else:
            vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}") from None
    if not vals:
        raise ContractViolation("empty grid")
    diffs = np.diff(vals)
    if not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ContractViolation("grid must be strictly monotone")
    return vals


def fmt_num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(rows[0]))
    for r in rows:
        w.writerow([fmt_num(v) if not isinstance(v, str) else v for v in r.values()])
    return buf.getvalue()


def emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text)


# ---------------------------------------------------------------------------
# symmetric families in the Dicke basis, for sizes past the generic cap


def _dicke_coeffs(family: str, params: dict) -> Optional[np.ndarray]:
    n = int(params.get("qubits", fam.DEFAULTS["qubits"]))
    if family == "dicke":
        s = params.get("s", fam.DEFAULTS["s"])
        if float(s) != int(s):
            raise ContractViolation(f"Dicke excitation number must be an integer, got {s}")
        return fam.dicke_coefficients(n, int(s))
    if family == "w":
        return fam.dicke_coefficients(n, 1)
    if family == "wtilde":
        return fam.dicke_coefficients(n, n - 1)
    return None


def measure_family(family: str, params: dict, normalize: bool, max_qubits: int):
    if family not in fam.FAMILIES:
        raise KeyError(f"unknown family {family!r}; known: {', '.join(fam.FAMILIES)}")
    n = int(params.get("qubits", fam.DEFAULTS["qubits"]))
    if fam.FAMILIES[family].symmetric and n > min(max_qubits, 8):
        return e_t_dicke(_dicke_coeffs(family, params), normalize=normalize)
    state = fam.build(family, **params)
    return e_t(state, normalize=normalize, max_qubits=max_qubits)


def cmd_measure(cfg: RunConfig) -> int:
    rep = measure_family(cfg.family, cfg.params, cfg.normalize, cfg.max_qubits)
    d = rep.to_dict()
    if cfg.out is not None:
        d["elapsed_ms"] = None  # files stay byte-identical across runs
    emit(json.dumps(d, indent=2) + "\n", cfg.out)
    tensor_out = cfg.extra.get("tensor_out")
    if tensor_out:
        t = correlation_tensor(fam.build(cfg.family, **cfg.params), max_qubits=cfg.max_qubits)
        (write_binary if Path(tensor_out).suffix in (".ctns", ".bin") else write_csv)(t, tensor_out)
    return EXIT_OK


def _dicke_ratio_rows(grid) -> list[dict]:
    rows = []
    for n in grid:
        if n != int(n) or int(n) % 2 or n < 2:
            raise ContractViolation(f"dicke-ratio needs even N >= 2, got {n}")
        n = int(n)
        rep = e_t_dicke(fam.dicke_coefficients(n, n // 2), normalize=True)
        rows.append({"param": n, "e_t": rep.e_t, "e_t_normalized": rep.normalized})
    return rows


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.grid is None:
        raise UsageError("sweep needs --grid")
    if cfg.family == "dicke-ratio":
        rows = _dicke_ratio_rows(cfg.grid)
    else:
        if cfg.param is None:
            raise UsageError("sweep needs --param")
        if cfg.param not in PARAMS:
            raise UsageError(f"cannot sweep {cfg.param!r}; choose from {', '.join(PARAMS)}")
        rows = []
        for v in cfg.grid:
            params = {**cfg.params, cfg.param: v}
            rep = measure_family(cfg.family, params, True, cfg.max_qubits)
            rows.append({"param": v, "e_t": rep.e_t, "e_t_normalized": rep.normalized})
    emit(render(rows, cfg.fmt or "csv"), cfg.out)
    return EXIT_OK


def cmd_grover(cfg: RunConfig) -> int:
    n = int(cfg.params.get("qubits", 6))
    trace = grover_run(n, cfg.extra["target"], cfg.extra["iters"], max_qubits=cfg.max_qubits)
    norm = trace.normalized_e_t()
    rows = [
        {"iteration": k, "e_t": e, "success_prob": p, "e_t_normalized": float(z)}
        for (k, e, p), z in zip(trace.rows, norm)
    ]
    emit(render(rows, cfg.fmt or "csv"), cfg.out)
    align = peak_alignment(trace)
    print(
        f"success peaks {align['success_peaks']}, E_T dips {align['e_t_dips']}, aligned: {align['aligned']}",
        file=sys.stderr,
    )
    return EXIT_OK


def povm_demo_rows() -> list[dict]:
    state = fam.bai_state()
    kraus = diagonal_kraus_pair(1, 0.9, 0.2)
    rep = povm_experiment(state, kraus)
    r4 = r_n(4)
    (p1, e1), (p2, e2) = rep.outcomes
    values = {
        "input_e_t_normalized": rep.input_e_t / r4,
        "p1": p1,
        "p2": p2,
        "p1_e_t1_normalized": p1 * e1 / r4,
        "p2_e_t2_normalized": p2 * e2 / r4,
        "gap_normalized": rep.gap / r4,
    }
    unnormalized = dict(zip(("p1_e_t1_normalized", "p2_e_t2_normalized"), (x / r4 for x in rep.unnormalized_residual_e_t)))
    unnormalized["gap_normalized"] = (rep.input_e_t - sum(rep.unnormalized_residual_e_t)) / r4
    return [
        {
            "quantity": k,
            "computed": v,
            "reference": POVM_REFERENCE[k],
            "unnormalized_vector": unnormalized.get(k),
        }
        for k, v in values.items()
    ]


def cmd_povm_demo(cfg: RunConfig) -> int:
    emit(render(povm_demo_rows(), cfg.fmt or "csv"), cfg.out)
    return EXIT_OK


def read_density_matrix(path: str) -> DensityMatrix:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = data.get("rho", data.get("matrix"))
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise ContractViolation("density matrix must be a square array of [re, im] pairs") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ContractViolation("density matrix must be a square array of [re, im] pairs")
    return DensityMatrix.from_matrix(arr[..., 0] + 1j * arr[..., 1])


def cmd_roof(cfg: RunConfig) -> int:
    rho = read_density_matrix(cfg.extra["input"])
    config = RoofConfig(ensemble_size=cfg.extra["ensemble_size"], restarts=cfg.extra["restarts"], seed=cfg.seed)
    est = roof_estimate(rho, config)
    emit(json.dumps(est.to_dict(), indent=2) + "\n", cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    suite = cfg.extra["suite"]
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; known: {', '.join(SUITES)}")
    kw = {"trials": cfg.extra["trials"]} if cfg.extra.get("trials") is not None else {}
    if suite == "closed-forms":
        kw = {}
    manifest = run_suite(suite, seed=cfg.seed, **kw)
    emit(json.dumps(manifest, indent=2) + "\n", cfg.out)
    if not manifest["passed"]:
        print(f"{suite}: {len(manifest['failures'])} failing checks", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


COMMANDS = {
    "measure": cmd_measure,
    "sweep": cmd_sweep,
    "grover": cmd_grover,
    "povm-demo": cmd_povm_demo,
    "roof": cmd_roof,
    "verify": cmd_verify,
}


def _family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--qubits", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--lambdas", type=float, nargs=5, metavar="L")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--normalize", action="store_true", help="also report E_T / R_N")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-qubits", type=int, default=GENERIC_CAP)
    common.add_argument("--out", help="write here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"))

    parser = argparse.ArgumentParser(prog="blochent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", parents=[common], help="E_T of one family member")
    p.add_argument("family")
    _family_flags(p)
    p.add_argument("--tensor-out", help="also dump T^(N): .ctns/.bin binary, otherwise CSV")

    p = sub.add_parser("sweep", parents=[common], help="E_T over a parameter grid")
    p.add_argument("family", help="a family name or dicke-ratio (grid over even N)")
    p.add_argument("--param")
    p.add_argument("--grid", required=True, help="start:stop:count or a comma list")
    _family_flags(p)

    p = sub.add_parser("grover", parents=[common], help="E_T along Grover iterations")
    p.add_argument("--qubits", type=int, default=6)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--iters", type=int, default=25)

    sub.add_parser("povm-demo", parents=[common], help="worked single-qubit measurement example")

    p = sub.add_parser("roof", parents=[common], help="convex-roof upper bound for a density matrix")
    p.add_argument("--input", required=True, help="JSON matrix of [re, im] pairs")
    p.add_argument("--ensemble-size", type=int)
    p.add_argument("--restarts", type=int, default=32)

    p = sub.add_parser("verify", parents=[common], help="run a property suite")
    p.add_argument("suite", help=", ".join(SUITES))
    p.add_argument("--trials", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, KeyError) as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ContractViolation, ResourceLimitError, NotSymmetricError, ZeroProbabilityOutcome, NumericalIntegrityError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
