"""Curve-probe Lojasiewicz exponents for z1^k1 z2^k2 and z1^p - z2^q against 1 - 1/(k1+k2), 1 - 1/q.

    python3 scripts/exponent_table.py --max-degree 6
"""
import argparse

from holoset.exponents import exponent_report, lojasiewicz_curve_probe
from holoset.poly import SparsePolynomial, cusp


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-degree", type=int, default=6)
    ap.add_argument("--amax", type=int, default=6)
    args = ap.parse_args()
    print(f"{'f':>16} {'alpha':>8} {'expected':>9} {'gamma':>7} {'tau':>7} best")
    rows = []
    for k1 in range(1, args.max_degree + 1):
        for k2 in range(k1, args.max_degree + 1):
            rows.append((SparsePolynomial.monomial((k1, k2)), 1 - 1 / (k1 + k2)))
    for p in range(2, args.max_degree + 1):
        for q in range(p + 1, args.max_degree + 1):
            rows.append((cusp(p, q), 1 - 1 / q))
    for f, want in rows:
        est = lojasiewicz_curve_probe(f, args.amax)
        g, t, _ = exponent_report(est.alpha)
        print(f"{str(f):>16} {est.alpha:8.4f} {want:9.4f} {g:7.4f} {t:7.4f} {est.best_direction}")


if __name__ == "__main__":
    main()
