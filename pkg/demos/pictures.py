"""Draw covering pictures for two imaginary quadratic orders.

Z[sqrt(-3)] is covered exactly (every point of the plane lies within
distance 1 of the order); Z[(1+sqrt(-15))/2] leaves small grey gaps.

    python3 demos/pictures.py [outdir]
"""

import sys
from pathlib import Path

from semieuclid.geometry import RenderSpec, render_figures, uncovered_area
from semieuclid.orderfile import parse_order_file

HERE = Path(__file__).resolve().parent


def main(outdir="pictures"):
    for name in ("z_sqrt-3", "z_omega15"):
        O = parse_order_file(HERE / "orders" / f"{name}.json")
        render_figures(O, RenderSpec(outdir=outdir, stem=name))
        area = uncovered_area(O)
        verdict = "covered" if area.exact_zero else f"uncovered area about {area.lo:.6f}"
        print(f"{name}: {verdict}; wrote {outdir}/{name}_cover.svg and {outdir}/{name}_floor.svg")


if __name__ == "__main__":
    main(*sys.argv[1:2])
