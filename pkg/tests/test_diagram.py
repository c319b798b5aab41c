from fractions import Fraction

import pytest
from hypothesis import given, settings

from capkit.caps import direction_triples
from capkit.diagram import (
    DiagramLine,
    DiagramSpec,
    centroid,
    diagram_point,
    diagram_xy,
    infeasible_by_line,
    render,
    solve_distribution,
)
from helpers import caps

FIG1 = DiagramLine(2, 9, -260)
FIG11 = DiagramLine(10, 133, -29190)
FIG12 = DiagramLine(1, 13, -2730)
FIG14 = DiagramLine(8, 95, -16588)
THM1_FORBID = [(20, 20, 6), (20, 19, 7), (19, 19, 8), (20, 18, 8)]
PROP2_FORBID = [(20, 20, 5), (20, 19, 6), (19, 19, 7), (20, 18, 7), (19, 18, 8)]


def test_binomial_mapping():
    assert diagram_xy((18, 18, 9)) == (342, 1716)
    assert diagram_xy((19, 18, 9)) == (360, 1869)
    assert diagram_xy((0, 0, 0)) == (0, 0)
    assert diagram_xy((9, 6, 2)) == (52, 104)


@pytest.mark.parametrize(
    "line, triples",
    [
        (FIG1, [(9, 6, 2), (8, 6, 3), (7, 6, 4), (6, 6, 5)]),
        (FIG11, [(19, 18, 9), (16, 15, 15)]),
        (FIG12, [(18, 18, 9), (15, 15, 15)]),
        (FIG14, [(16, 16, 9), (14, 14, 13)]),
    ],
)
def test_caption_lines_pass_through_points(line, triples):
    for t in triples:
        assert diagram_point(t, line).d == 0


def test_centroid():
    assert centroid(5, 45) == (Fraction(39600, 121), Fraction(184470, 121))
    x, y = centroid(5, 45)
    assert FIG12.d(x, y) == 0
    x, y = centroid(4, 17)
    assert (x, y) == (Fraction(136 * 13, 40), Fraction(680, 10))
    assert FIG1.d(x, y) < 0


@settings(max_examples=40, deadline=None)
@given(caps(2, 5))
def test_centroid_is_average_of_real_points(S):
    pts = [diagram_xy(t) for t in direction_triples(S)]
    D = len(pts)
    assert (Fraction(sum(p[0] for p in pts), D), Fraction(sum(p[1] for p in pts), D)) == centroid(S.n, S.size)


def test_line_certificates():
    cert = infeasible_by_line(DiagramSpec(5, 46, THM1_FORBID), FIG11)
    assert cert != "inconclusive" and "INFEASIBLE" in str(cert)
    cert = infeasible_by_line(DiagramSpec(4, 17, [(9, 8, 0), (9, 7, 1), (8, 8, 1), (8, 7, 2), (7, 7, 3)]), FIG1)
    assert cert != "inconclusive" and cert.centroid_d < 0 <= cert.min_point_d
    assert infeasible_by_line(DiagramSpec(5, 45, PROP2_FORBID), FIG12) == "inconclusive"


def test_line_is_sound_for_real_caps():
    # the 20-cap exists, so no line may certify (4, 20) with nothing forbidden
    spec = DiagramSpec(4, 20)
    for line in (FIG1, DiagramLine.through(diagram_xy((10, 10, 0)), diagram_xy((9, 9, 2)))):
        assert infeasible_by_line(spec, line) == "inconclusive"


def test_distributions():
    sols = solve_distribution(DiagramSpec(5, 45, PROP2_FORBID))
    assert sols == [{(18, 18, 9): 55, (15, 15, 15): 66}]
    assert solve_distribution(DiagramSpec(3, 0)) == [{(0, 0, 0): 13}]


def test_render(tmp_path):
    tsv, svg = render(DiagramSpec(4, 17, line=FIG1), tmp_path)
    rows = tsv.read_text().splitlines()
    assert rows[0] == "a\tb\tc\tx\ty\td"
    assert "9\t6\t2\t52\t104\t0" in rows
    assert svg.read_text().lstrip().startswith("<?xml")
    tsv, _ = render(DiagramSpec(5, 46, THM1_FORBID, FIG11), tmp_path)
    ds = [Fraction(r.split("\t")[5]) for r in tsv.read_text().splitlines()[1:]]
    assert min(ds) >= 0
    render(DiagramSpec(2, 4), tmp_path)
