#!/usr/bin/env python3
"""Generate the (coupling, side-leakage) performance surface as CSV.

Writes the standard 101x101 lattice over g/kappa in [0, 3] and
kappa_s/kappa in [0, 2] at gamma = 0.1 kappa, ready for any plotting tool:

    python3 scripts/performance_surface.py performance.csv
"""

import sys

from hypercnot.cli import main


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "performance.csv"
    sys.exit(main(["sweep", "--out", out]))
