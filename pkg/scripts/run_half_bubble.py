#!/usr/bin/env python3
"""Half-bubble stability runs for the six named schemes.

Each scheme integrates the two-fluid anomaly with the diffusive
mass-exchange closure; diagnostics track the total-energy drift and the
minimum masses. Field dumps are on by default so the results can be
mapped.
"""

import argparse

from multifluid import cases


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/half_bubble")
    ap.add_argument("--preset", choices=("desk", "paper"), default="desk")
    ap.add_argument("--t-end", type=float, default=1000.0)
    ap.add_argument("--dump-every", type=int, default=25)
    args = ap.parse_args()

    rc = 0
    for num in range(1, 7):
        cfg = cases.RunConfig(case="half_bubble", scheme=str(num),
                              preset=args.preset, t_end=args.t_end,
                              out=args.out, dump_every=args.dump_every)
        rc |= cases.run(cfg)
    return rc


if __name__ == "__main__":
    raise SystemExit(main())
