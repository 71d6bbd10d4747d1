"""Run the acceptance criteria and write a JSON table.

    python3 scripts/run_acceptance.py [--quick] [--criteria 1,2] [--out acceptance.json]
"""
import argparse
import json
import sys

from holoset.acceptance import run_all


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--quick", action="store_true", help="5%% of the sample counts (smoke run)")
    ap.add_argument("--criteria", default=None)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    nums = [int(x) for x in args.criteria.split(",")] if args.criteria else None
    results = run_all(nums, args.seed, 0.05 if args.quick else 1.0, progress=lambda r: print(r.line(), flush=True))
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} criteria passed")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump([r.to_dict() for r in results], fh, indent=2)
    return 0 if n_pass == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
