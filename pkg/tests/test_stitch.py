"""Stitching: greedy pair chaining, centroid-tour baseline, comparisons."""
import itertools
import math

import pytest

from coverplan.decompose import ConvexCell, decompose_msa
from coverplan.errors import PreconditionError
from coverplan.geometry import Polygon, msa_direction
from coverplan.stitch import (
    compare,
    pair_distance_matrix,
    stitch_classic,
    stitch_modified,
)
from coverplan.sweep import boustrophedon, path_length


def make_cells(polys, r):
    cells = [ConvexCell(polygon=p, source_triangles=frozenset({i}),
                        msa=msa_direction(p)) for i, p in enumerate(polys)]
    sweeps = [boustrophedon(c, r) for c in cells]
    return cells, sweeps


class TestPairDistanceMatrix:
    def test_shape_and_diagonal_blocks(self, unit_square):
        cells, sweeps = make_cells([unit_square], 0.25)
        mat = pair_distance_matrix(sweeps)
        assert len(mat) == 4 and all(len(row) == 4 for row in mat)
        for a in range(4):
            for b in range(4):
                end = sweeps[0].endpoint_pairs[a][1]
                start = sweeps[0].endpoint_pairs[b][0]
                assert mat[a][b] == pytest.approx(math.dist(end, start))


class TestStitchModified:
    def test_empty_rejected(self):
        with pytest.raises(PreconditionError):
            stitch_modified([], [], (0, 0))

    def test_single_cell_equals_sweep(self, rect_10x2):
        cells, sweeps = make_cells([rect_10x2], 0.5)
        plan = stitch_modified(cells, sweeps, (0, 0))
        assert plan.transition_length == 0.0
        assert plan.total_length == pytest.approx(sweeps[0].length)
        assert plan.cell_order == (0,)

    def test_two_squares_connector_is_local(self):
        r = 0.5
        a = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
        b = Polygon([(1, 0), (2, 0), (2, 1), (1, 1)])
        cells, sweeps = make_cells([a, b], r)
        plan = stitch_modified(cells, sweeps, (0, 0))
        # the hop between the squares is a footprint-scale gap, bounded by
        # the sweep spacing, not a detour through cell interiors
        assert plan.transition_length <= 2 * r + 1e-9
        # the first pair anchors to the start point: its start is the
        # admissible start nearest p0
        d0 = math.dist((0, 0), plan.waypoints[0])
        assert d0 == pytest.approx(
            min(math.dist((0, 0), p[0]) for p in sweeps[0].endpoint_pairs))
        # oracle: given that first pair, enumerating the remaining cell's
        # four pairs confirms the greedy hop is the minimum
        first_end = sweeps[plan.cell_order[0]].endpoint_pairs[plan.chosen_pairs[0]][1]
        second = plan.cell_order[1]
        best_hop = min(math.dist(first_end, p[0])
                       for p in sweeps[second].endpoint_pairs)
        assert plan.transition_length == pytest.approx(best_hop)

    def test_l_shape_modified_not_worse(self, l_shape):
        cells = decompose_msa(l_shape, (0, 0), 0.25)
        sweeps = [boustrophedon(c, 0.25) for c in cells]
        mod = stitch_modified(cells, sweeps, (0, 0))
        cla = stitch_classic(cells, sweeps, (0, 0))
        assert mod.total_length <= cla.total_length + 1e-9

    def test_every_cell_visited_once(self, corpus_small):
        for poly in corpus_small[:8]:
            cells = decompose_msa(poly, poly.vertices[0], 0.5)
            sweeps = [boustrophedon(c, 0.5) for c in cells]
            plan = stitch_modified(cells, sweeps, poly.vertices[0])
            assert sorted(plan.cell_order) == list(range(len(cells)))
            assert len(plan.chosen_pairs) == len(cells)

    def test_length_decomposition(self, corpus_small):
        for poly in corpus_small[:8]:
            cells = decompose_msa(poly, poly.vertices[0], 0.5)
            sweeps = [boustrophedon(c, 0.5) for c in cells]
            plan = stitch_modified(cells, sweeps, poly.vertices[0])
            sweep_sum = sum(
                path_length(sweeps[c].waypoints_for_pair(a))
                for c, a in zip(plan.cell_order, plan.chosen_pairs))
            assert plan.total_length == pytest.approx(
                sweep_sum + plan.transition_length)

    def test_continuity_bound(self, corpus_small):
        for poly in corpus_small[:8]:
            cells = decompose_msa(poly, poly.vertices[0], 0.5)
            sweeps = [boustrophedon(c, 0.5) for c in cells]
            plan = stitch_modified(cells, sweeps, poly.vertices[0])
            diam = max(
                math.dist(u, v)
                for c in cells
                for u in c.polygon.vertices for v in c.polygon.vertices)
            for u, v in zip(plan.waypoints, plan.waypoints[1:]):
                assert math.dist(u, v) <= diam + 1e-9


class TestStitchClassic:
    def test_single_cell_trivial(self, rect_10x2):
        cells, sweeps = make_cells([rect_10x2], 0.5)
        plan = stitch_classic(cells, sweeps, (0, 0))
        assert plan.transition_length == 0.0
        assert plan.total_length == pytest.approx(sweeps[0].length)

    def test_collinear_cells_in_sequence(self):
        polys = [Polygon([(x, 0), (x + 1, 0), (x + 1, 1), (x, 1)])
                 for x in (0.0, 2.0, 4.0)]
        cells, sweeps = make_cells(polys, 0.5)
        plan = stitch_classic(cells, sweeps, (0, 0))
        assert plan.cell_order == (0, 1, 2)

    def test_centroid_tour_matches_bruteforce(self, corpus):
        """Held-Karp order equals the brute-force shortest open tour."""
        poly = corpus[50]  # decomposes into 5 cells at r = 0.5
        cells = decompose_msa(poly, poly.vertices[0], 0.5)
        assert len(cells) == 5
        sweeps = [boustrophedon(c, 0.5) for c in cells]
        plan = stitch_classic(cells, sweeps, poly.vertices[0])
        cents = [c.polygon.centroid() for c in cells]
        start = min(range(5), key=lambda i: (math.dist(cents[i], poly.vertices[0]), i))

        def tour_len(order):
            return sum(math.dist(cents[a], cents[b])
                       for a, b in zip(order, order[1:]))

        rest = [i for i in range(5) if i != start]
        best = min(tour_len([start] + list(p))
                   for p in itertools.permutations(rest))
        assert tour_len(list(plan.cell_order)) == pytest.approx(best)
        assert plan.cell_order[0] == start

    def test_pair0_orientation(self, corpus_small):
        for poly in corpus_small[:5]:
            cells = decompose_msa(poly, poly.vertices[0], 0.5)
            sweeps = [boustrophedon(c, 0.5) for c in cells]
            plan = stitch_classic(cells, sweeps, poly.vertices[0])
            for c, a in zip(plan.cell_order, plan.chosen_pairs):
                rev = 2 if sweeps[c].sweep_count % 2 == 0 else 3
                assert a in (0, rev)


class TestCompare:
    def test_convex_quad_equal_lengths(self):
        quad = Polygon([(0.0, 0.0), (12.0, 0.0), (10.0, 9.0), (2.0, 9.0)])
        cells = decompose_msa(quad, (0, 0), 0.5)
        assert len(cells) == 1
        sweeps = [boustrophedon(c, 0.5) for c in cells]
        mod = stitch_modified(cells, sweeps, (0, 0))
        cla = stitch_classic(cells, sweeps, (0, 0))
        row = compare(cla, mod, vertices=4)
        assert row.length_classic == pytest.approx(row.length_new, abs=1e-9)

    def test_identical_plans_zero_delta(self, rect_10x2):
        cells, sweeps = make_cells([rect_10x2], 0.5)
        plan = stitch_modified(cells, sweeps, (0, 0))
        row = compare(plan, plan, vertices=4)
        assert row.length_classic == row.length_new
        assert row.turns_classic == row.turns_new

    def test_mismatched_cells_rejected(self, rect_10x2, unit_square):
        c1, s1 = make_cells([rect_10x2], 0.5)
        c2, s2 = make_cells([rect_10x2, unit_square], 0.5)
        p1 = stitch_modified(c1, s1, (0, 0))
        p2 = stitch_modified(c2, s2, (0, 0))
        with pytest.raises(PreconditionError):
            compare(p1, p2, vertices=4)
