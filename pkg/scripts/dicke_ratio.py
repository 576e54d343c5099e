"""Exact E_T(psi_N(N/2)) / R_N next to the closed-form norm estimate, for even N."""
import argparse
import math

from blochent import families as fam
from blochent.measure import e_t_dicke, heisenberg_norm_formula, r_n


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=100)
    ap.add_argument("--step", type=int, default=2)
    args = ap.parse_args()
    print("n,exact_ratio,formula_ratio,formula_exceeds_purity_bound")
    for n in range(2, args.max_n + 1, max(2, args.step - args.step % 2)):
        exact = e_t_dicke(fam.dicke_coefficients(n, n // 2)).e_t / r_n(n)
        norm_sq = heisenberg_norm_formula(n, n // 2)
        formula = (math.sqrt(norm_sq) - 1) / r_n(n)
        over = norm_sq > 2.0**n
        print(f"{n},{exact:.10g},{formula:.10g},{over}")


if __name__ == "__main__":
    main()
