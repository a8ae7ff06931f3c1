"""Cold-cache block transfers for query pairs with answer sizes t and 2t."""
import argparse
import json

from mlrtree.experiments import io_trend
from mlrtree.iomodel import IoConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--block-size", type=int, default=64)
    ap.add_argument("--frames", type=int, default=32)
    ap.add_argument("--pairs", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = IoConfig(args.block_size, args.block_size * args.frames)
    for name in ("static", "layered"):
        t = io_trend(name, pairs=args.pairs, cfg=cfg, seed=args.seed)
        print(json.dumps({"structure": name, "median_ratio": t.median,
                          "min_ratio": min(t.ratios), "max_ratio": max(t.ratios)}))


if __name__ == "__main__":
    main()
