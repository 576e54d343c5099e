"""Run every property suite and print a one-line verdict per suite."""
import argparse
import json
import time

from blochent.verify import SUITES, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="dump full manifests")
    args = ap.parse_args()
    ok = True
    for name in SUITES:
        t0 = time.perf_counter()
        man = run_suite(name, seed=args.seed)
        ok &= man["passed"]
        print(f"{name:16s} {'ok' if man['passed'] else 'FAIL':4s} checks={man['checks']} "
              f"failures={len(man['failures'])} {time.perf_counter() - t0:.1f}s")
        if args.json:
            print(json.dumps(man, indent=2, default=str))
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
