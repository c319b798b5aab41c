"""Render the standard diagrams used in the counting arguments (TSV + SVG)."""

import argparse

from capkit.diagram import DiagramLine, DiagramSpec, infeasible_by_line, render

FIGURES = {
    "n4_s17": (4, 17, [(9, 8, 0), (9, 7, 1), (8, 8, 1), (8, 7, 2), (7, 7, 3)], DiagramLine(2, 9, -260)),
    "n5_s46": (5, 46, [(20, 20, 6), (20, 19, 7), (19, 19, 8), (20, 18, 8)], DiagramLine(10, 133, -29190)),
    "n5_s45": (5, 45, [(20, 20, 5), (20, 19, 6), (19, 19, 7), (20, 18, 7), (19, 18, 8)], DiagramLine(1, 13, -2730)),
    "n5_s41": (5, 41, [], DiagramLine(8, 95, -16588)),
}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="figures")
    args = p.parse_args()
    for stem, (n, s, forbid, line) in FIGURES.items():
        spec = DiagramSpec(n, s, forbid, line)
        tsv, svg = render(spec, args.out, stem)
        print(f"{stem}: {infeasible_by_line(spec) if spec.allowed else 'no points'} -> {svg}")


if __name__ == "__main__":
    main()
