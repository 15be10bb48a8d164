"""Boustrophedon sweeps: line placement, lengths, turns, endpoint pairs."""
import math

import pytest

from coverplan.errors import PreconditionError
from coverplan.geometry import Polygon
from coverplan.sweep import boustrophedon, endpoint_pairs, path_length, turn_count


class TestPathLength:
    def test_345(self):
        assert path_length([(0, 0), (3, 4)]) == pytest.approx(5.0)

    def test_closed_square_tour(self):
        assert path_length([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]) == pytest.approx(4.0)

    def test_too_few(self):
        with pytest.raises(PreconditionError):
            path_length([(0, 0)])


class TestBoustrophedon:
    def test_rect_10x2_r05(self, rect_10x2):
        sw = boustrophedon(rect_10x2, 0.5)
        assert sw.sweep_count == 4
        assert sw.turn_count == 3
        assert all(L == pytest.approx(10.0) for L in sw.line_lengths)
        # 4 passes of 10 m plus 3 connectors of 0.5 m
        assert sw.length == pytest.approx(41.5)
        assert not sw.degenerate

    def test_rect_offsets(self, rect_10x2):
        sw = boustrophedon(rect_10x2, 0.5)
        ys = sorted({lo[1] for lo, hi in sw.lines} | {hi[1] for lo, hi in sw.lines})
        assert ys == pytest.approx([0.25, 0.75, 1.25, 1.75])

    def test_rect_degenerate(self, rect_10x2):
        sw = boustrophedon(rect_10x2, 2.5)
        assert sw.sweep_count == 1
        assert sw.turn_count == 0
        assert sw.degenerate
        # midline pass
        assert sw.lines[0][0][1] == pytest.approx(1.0)

    def test_unit_square_r025(self, unit_square):
        sw = boustrophedon(unit_square, 0.25)
        assert sw.sweep_count == 4
        assert all(L == pytest.approx(1.0) for L in sw.line_lengths)

    def test_offset_past_span_dropped(self):
        # span 1.0 with r = 0.4: offsets 0.2, 0.6 fit, (2+0.5)*0.4 = 1.0 fits
        sw = boustrophedon(Polygon([(0, 0), (3, 0), (3, 1), (0, 1)]), 0.4)
        assert sw.sweep_count == 3
        # span 1.0 with r = 0.45: (2+0.5)*0.45 = 1.125 > span, dropped
        sw = boustrophedon(Polygon([(0, 0), (3, 0), (3, 1), (0, 1)]), 0.45)
        assert sw.sweep_count == 2
        offs = [lo[1] for lo, _ in sw.lines]
        assert offs == pytest.approx([0.225, 0.675])

    def test_bad_radius(self, unit_square):
        with pytest.raises(PreconditionError):
            boustrophedon(unit_square, -1.0)

    def test_waypoints_match_pair0(self, rect_10x2):
        sw = boustrophedon(rect_10x2, 0.5)
        assert sw.waypoints[0] == sw.endpoint_pairs[0][0]
        assert sw.waypoints[-1] == sw.endpoint_pairs[0][1]
        assert sw.length == pytest.approx(path_length(sw.waypoints))


class TestTurnCount:
    def test_rect(self, rect_10x2):
        assert turn_count(boustrophedon(rect_10x2, 0.5)) == 3

    def test_degenerate(self, rect_10x2):
        assert turn_count(boustrophedon(rect_10x2, 2.5)) == 0

    def test_l_shape_cells(self, l_shape):
        from coverplan.decompose import decompose_msa
        cells = decompose_msa(l_shape, (0, 0), 0.25)
        counts = sorted(turn_count(boustrophedon(c, 0.25)) for c in cells)
        # two rectangular cells whose line counts follow from their spans
        expected = sorted(boustrophedon(c, 0.25).sweep_count - 1 for c in cells)
        assert counts == expected
        total_lines = sum(boustrophedon(c, 0.25).sweep_count for c in cells)
        assert sum(counts) == total_lines - len(cells)


class TestEndpointPairs:
    def test_rect_corner_starts(self, rect_10x2):
        pairs = endpoint_pairs(rect_10x2, 0.5)
        starts = {p[0] for p in pairs}
        assert starts == {(0.0, 0.25), (10.0, 0.25), (0.0, 1.75), (10.0, 1.75)}

    def test_pair_paths_consistent(self, rect_10x2):
        sw = boustrophedon(rect_10x2, 0.5)
        for a in range(4):
            wp = sw.waypoints_for_pair(a)
            assert wp[0] == sw.endpoint_pairs[a][0]
            assert wp[-1] == sw.endpoint_pairs[a][1]

    def test_reversal_symmetry(self, rect_10x2):
        """Reversing a pair's path reproduces another pair with the same
        length and turn count."""
        sw = boustrophedon(rect_10x2, 0.5)
        rev_of_0 = 2 if sw.sweep_count % 2 == 0 else 3
        wp0 = sw.waypoints_for_pair(0)
        assert list(reversed(wp0)) == sw.waypoints_for_pair(rev_of_0)
        assert path_length(wp0) == pytest.approx(
            path_length(sw.waypoints_for_pair(rev_of_0)))

    def test_degenerate_pairs_duplicate(self, rect_10x2):
        sw = boustrophedon(rect_10x2, 2.5)
        pairs = set(sw.endpoint_pairs)
        assert len(pairs) == 2

    def test_square_symmetry(self, unit_square):
        pairs = endpoint_pairs(unit_square, 0.25)
        starts = sorted(p[0] for p in pairs)
        mirrored = sorted((1 - x, y) for x, y in starts)
        assert all(a == pytest.approx(b) for a, b in zip(starts, mirrored))


class TestMsaOptimality:
    def test_sweep_count_minimal_over_edges(self, corpus_small):
        from coverplan.decompose import decompose_msa
        from coverplan.geometry import edge_span
        for poly in corpus_small[:8]:
            cells = decompose_msa(poly, poly.vertices[0], 0.5)
            for cell in cells:
                n_msa = boustrophedon(cell, 0.5).sweep_count
                for e in range(len(cell.polygon.vertices)):
                    d = edge_span(cell.polygon, e).direction
                    n_e = boustrophedon(cell.polygon, 0.5, direction=d).sweep_count
                    assert n_msa <= n_e


class TestCoverageInvariant:
    def test_full_coverage_of_cell(self):
        from coverplan.covergrid import CoverageGrid
        r = 0.5
        poly = Polygon([(0, 0), (6, 0), (7, 4), (1, 5)])
        sw = boustrophedon(poly, r)
        grid = CoverageGrid.from_polygon(poly, r / 5)
        # stamp densely along the sweep polyline
        wp = sw.waypoints
        for a, b in zip(wp, wp[1:]):
            steps = max(2, int(math.dist(a, b) / (r / 4)) + 1)
            for k in range(steps + 1):
                t = k / steps
                grid.stamp((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])), r)
        assert grid.coverage_ratio() >= 0.98
