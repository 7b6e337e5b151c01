#!/usr/bin/env python3
"""Generate the CSV inputs consumed by the plotting package.

Produces, under the target directory:
  envelope.csv                  full 20-scheme sweep envelopes
  full_bubble/...               scheme-4 desk run vs the reference
  half_bubble/...               scheme-4 desk run with field dumps
"""

import argparse
import os

from multifluid import cases


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="frontend/testdata")
    ap.add_argument("--points-per-axis", type=int, default=50)
    args = ap.parse_args()

    rc = cases.run(cases.RunConfig(
        case="sweep", scheme="all20", t_end=0.0, out=args.out,
        points_per_axis=args.points_per_axis))
    rc |= cases.run(cases.RunConfig(
        case="full_bubble", scheme="4", preset="desk", t_end=1000.0,
        out=os.path.join(args.out, "full_bubble")))
    rc |= cases.run(cases.RunConfig(
        case="half_bubble", scheme="4", preset="desk", t_end=1000.0,
        dump_every=125, out=os.path.join(args.out, "half_bubble")))
    return rc


if __name__ == "__main__":
    raise SystemExit(main())
