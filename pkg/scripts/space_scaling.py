"""Auxiliary entry counts of the layered and static trees across doubling N."""
import json

from mlrtree.experiments import space_scaling


def main():
    rep = space_scaling()
    for i, n in enumerate(rep.ns):
        print(json.dumps({"n": n, "layered": rep.layered[i], "static": rep.static[i],
                          "layered_per_point": rep.per_point[n]}))
    print(json.dumps({"layered_r2": rep.layered_r2, "static_sse_nlog2n": rep.static_sse_nlog2n,
                      "static_sse_linear": rep.static_sse_linear}))


if __name__ == "__main__":
    main()
