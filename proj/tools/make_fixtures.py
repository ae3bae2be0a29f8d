#!/usr/bin/env python3
"""Writes synthetic per-bank balance sheets whose included-record means,
sample standard deviations and counts equal the published country/year
aggregates. Individual rows carry no real-bank information."""

import argparse
import csv
import math
from statistics import NormalDist

AGGREGATES = {
    # (country, year): (mu_A, std_A, mu_E, std_E, n)
    ("UK", 2007): (2.0287e11, 4.7503e11, 6.3032e9, 1.3785e10, 26),
    ("UK", 2012): (1.8307e11, 4.2912e11, 8.1836e9, 2.0298e10, 38),
    ("US", 2007): (1.8505e10, 1.3592e11, 1.0615e9, 6.6785e9, 666),
    ("US", 2012): (2.0247e10, 1.5234e11, 1.5829e9, 1.1102e10, 779),
}


def skewed_sample(n, shape, shift):
    nd = NormalDist()
    zs = [nd.inv_cdf((i + 0.5) / n) for i in range(n)]
    # Rotate so assets and capital are not perfectly rank-aligned.
    zs = zs[shift % n:] + zs[: shift % n]
    return [math.exp(shape * z) for z in zs]


def rescale(xs, mean, std):
    n = len(xs)
    m = sum(xs) / n
    s = math.sqrt(sum((x - m) ** 2 for x in xs) / (n - 1))
    return [mean + std * (x - m) / s for x in xs]


def positive_rescaled(n, shift, mean, std):
    # Heavier skew until the affine map keeps every value positive.
    shape = 2.0
    while True:
        xs = rescale(skewed_sample(n, shape, shift), mean, std)
        if min(xs) > 0:
            return xs
        shape += 0.25


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    rows = []
    for (country, year), (mu_a, sd_a, mu_e, sd_e, n) in AGGREGATES.items():
        assets = positive_rescaled(n, 0, mu_a, sd_a)
        capital = positive_rescaled(n, 1, mu_e, sd_e)
        for k, (a, e) in enumerate(zip(assets, capital)):
            rows.append((f"{country}{year}-{k:04d}", country, year, repr(a), repr(e)))
        # Rows without positive tier 1 capital are kept in the file but excluded.
        rows.append((f"{country}{year}-x0", country, year, repr(mu_a), "0"))
        rows.append((f"{country}{year}-x1", country, year, repr(mu_a), ""))
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bank_id", "country", "year", "total_assets", "tier1_capital"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
