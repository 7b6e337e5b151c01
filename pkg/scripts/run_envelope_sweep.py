#!/usr/bin/env python3
"""Full 0-D transfer sweep over all 20 schemes.

Writes the per-(scheme, dt) min/max envelope CSV and the empirical
property table. Takes a couple of minutes at the default 50 points per
axis.
"""

import argparse

from multifluid import cases


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/sweep")
    ap.add_argument("--points-per-axis", type=int, default=50)
    args = ap.parse_args()

    cfg = cases.RunConfig(case="sweep", scheme="all20", t_end=0.0,
                          out=args.out, points_per_axis=args.points_per_axis)
    rc = cases.run(cfg)
    table = cases.classify(cfg)
    for label, props in table.items():
        print(f"{label}: eta>=0 {props.positive_eta}  bounded {props.bounded}  "
              f"momentum/IE {props.momentum_ie}  KE-dec {props.ke_decreases}")
    return rc


if __name__ == "__main__":
    raise SystemExit(main())
