"""Fiber areas of {z1^a1 z2^a2 = w} over a log grid of |w|, printed as a table.

    python3 scripts/fiber_sweep.py --exponents 1,2 --samples 1e6
"""
import argparse
import math

import numpy as np

from holoset import closed_form as cf
from holoset.estimator import SamplerConfig, mc_graph_fiber_volume
from holoset.exponents import fit_power_law


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--exponents", default="1,2")
    ap.add_argument("--samples", type=float, default=1e6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--decades", type=int, default=6)
    args = ap.parse_args()
    a = [int(x) for x in args.exponents.split(",")]
    cfg = SamplerConfig(seed=args.seed, n_samples=int(args.samples))
    ws = np.logspace(-1, -args.decades, args.decades)
    print(f"{'|w|':>10} {'area':>12} {'std_err':>10} {'exact':>12}")
    vals = []
    for w in ws:
        r = mc_graph_fiber_volume(a, w, cfg)
        vals.append(r.value)
        exact = f"{cf.fiber_volume_z1z2_exact(w):12.6f}" if a == [1, 1] else f"{'-':>12}"
        print(f"{w:10.1e} {r.value:12.6f} {r.std_error:10.2e} {exact}")
    slope = fit_power_law(list(zip(ws, vals))).exponent
    print(f"max {max(vals):.6f}  max/min {max(vals) / min(vals):.4f}  log-log slope {slope:+.4f}")
    print(f"w -> 0 limit (sheets over the z1 disc plus the z2 disc): {(a[1] + 1) * math.pi:.6f}"
          if a[0] == 1 else "")


if __name__ == "__main__":
    main()
