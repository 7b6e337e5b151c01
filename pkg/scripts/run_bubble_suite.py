#!/usr/bin/env python3
"""Full-bubble scheme comparison at desk or paper scale.

Runs the single-fluid reference plus every requested scheme from a
fresh initial state and writes per-run diagnostics and the
scheme-comparison table (energy departure from the reference at step 1
and at t_end, blow-up flags).
"""

import argparse

from multifluid import cases


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/full_bubble")
    ap.add_argument("--scheme", default="all20")
    ap.add_argument("--preset", choices=("desk", "paper"), default="desk")
    ap.add_argument("--t-end", type=float, default=1000.0)
    ap.add_argument("--dump-every", type=int, default=0)
    args = ap.parse_args()

    cfg = cases.RunConfig(case="full_bubble", scheme=args.scheme,
                          preset=args.preset, t_end=args.t_end,
                          out=args.out, dump_every=args.dump_every)
    return cases.run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
