#!/usr/bin/env python3
"""Run the full analysis pipeline on the three built-in demo systems.

Prints one JSON report per system: positivity (with the shifted matrix),
accessibility (Kalman rank), and the reachability decision with its
certificate (Gram spec, Gram matrix, synthesised controls and residuals).
"""

import argparse

from chronos import analyze_system, demo_systems
from chronos.descriptors import analysis_to_obj, jdumps


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument(
        "names", nargs="*", default=["integer", "hybrid", "irregular"],
        help="subset of demo systems to run",
    )
    args = parser.parse_args()
    demos = demo_systems()
    for name in args.names:
        d = demos[name]
        rep = analyze_system(d.system, d.window, tol=args.tol)
        print(f"=== {name}: {d.description} ===")
        print(jdumps(analysis_to_obj(d.system, rep)))
        print()


if __name__ == "__main__":
    main()
