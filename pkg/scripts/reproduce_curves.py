"""Write every E_T curve as CSV: family sweeps, the Dicke ratio and a Grover trace."""
import argparse
from pathlib import Path

from blochent.cli import main

SWEEPS = {
    "ghz_p_n3": ["sweep", "ghz", "--param", "p", "--grid", "0:1:101", "--qubits", "3"],
    "ghz_n": ["sweep", "ghz", "--param", "qubits", "--grid", "2:12:11"],
    "w_n": ["sweep", "w", "--param", "qubits", "--grid", "3:12:10"],
    "wsup_s_n3": ["sweep", "wsup", "--param", "s", "--grid", "0:1:101", "--qubits", "3"],
    "ghzw_s": ["sweep", "ghzw", "--param", "s", "--grid", "0:1:101"],
    "dicke_s_n8": ["sweep", "dicke", "--param", "s", "--grid", "0:8:9", "--qubits", "8"],
    "dicke_s_n20": ["sweep", "dicke", "--param", "s", "--grid", "0:20:21", "--qubits", "20"],
    "dicke_s_n100": ["sweep", "dicke", "--param", "s", "--grid", "0:100:101", "--qubits", "100"],
    "dicke_ratio": ["sweep", "dicke-ratio", "--grid", ",".join(str(n) for n in range(2, 101, 2))],
    "grover_n6": ["grover", "--qubits", "6", "--target", "5", "--iters", "26"],
    "povm_table": ["povm-demo"],
}


def run(outdir: Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name, argv in SWEEPS.items():
        path = outdir / f"{name}.csv"
        code = main(argv + ["--out", str(path)])
        print(f"{name}: exit {code} -> {path}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    raise SystemExit(run(ap.parse_args().outdir))
