"""Fraction of layer-2 trees within [target/8, 8*target] under smooth x."""
import argparse
import json

from mlrtree.experiments import bucket_concentration


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x-base", default="piecewise", choices=["uniform", "piecewise"])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for rep in bucket_concentration(seed=args.seed, x_base=args.x_base):
        print(json.dumps({"n": rep.n, "target": rep.target, "trees": len(rep.sizes),
                          "min": min(rep.sizes), "max": max(rep.sizes),
                          "fraction_within": rep.fraction_within}))


if __name__ == "__main__":
    main()
