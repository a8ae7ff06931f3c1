"""Mean violations per epoch for smooth-x / zipf-y insertion streams."""
import argparse
import json
import math

from mlrtree.experiments import violation_trend


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--min-exp", type=int, default=12)
    ap.add_argument("--max-exp", type=int, default=16)
    ap.add_argument("--zipf-s", type=float, default=1.2)
    ap.add_argument("--r", type=float, default=0.5)
    args = ap.parse_args()
    ns = [1 << e for e in range(args.min_exp, args.max_exp + 1)]
    vt = violation_trend(ns, args.seeds, s=args.zipf_s, r=args.r)
    for n in vt.ns:
        print(json.dumps({"n": n, "mean_per_epoch": vt.mean_per_epoch[n],
                          "mean_over_ln_n": vt.mean_per_epoch[n] / math.log(n),
                          "mean_over_n": vt.per_n_ratio[n],
                          "violations": vt.total_violations[n], "epochs": vt.epochs[n]}))
    print(json.dumps({"c": vt.c, "log_bound_holds": vt.log_bound_holds,
                      "ratio_strictly_decreasing": vt.ratio_strictly_decreasing}))


if __name__ == "__main__":
    main()
