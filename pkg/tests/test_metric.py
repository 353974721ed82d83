from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from l1cert import (
    FiniteMetricSpace,
    InputError,
    PointMap,
    SupVector,
    build_m_ell1,
    build_m_r,
    distortion,
    identity_map,
    james_gap,
    kuratowski_embed,
    make_graph,
    norming_coordinate,
    rho_metric,
    shortest_path_metric,
    space_from_table,
    verify_metric,
)

F = Fraction


def random_connected_graph(rng, n, extra=3):
    verts = [f"v{i}" for i in range(n)]
    edges = [(verts[i], verts[rng.randrange(i)]) for i in range(1, n)]
    for _ in range(extra):
        i, j = rng.sample(range(n), 2)
        edges.append((verts[i], verts[j]))
    dedup = {tuple(sorted(e)) for e in edges}
    return make_graph(verts, sorted(dedup))


class TestVerifyMetric:
    def test_two_point_ok(self):
        assert verify_metric([[0, 1], [1, 0]]) is None

    def test_triangle_violation_indices(self):
        table = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
        v = verify_metric(table)
        assert v is not None
        assert v.kind == "triangle"
        assert v.indices == (0, 1, 2)

    def test_rho_table_is_metric(self):
        assert verify_metric(rho_metric("m-r", 3)) is None
        assert verify_metric(rho_metric("m-ell1", 3)) is None

    def test_symmetry_and_diagonal_and_positivity(self):
        assert verify_metric([[0, 1], [2, 0]]).kind == "symmetry"
        assert verify_metric([[1, 1], [1, 0]]).kind == "diagonal"
        assert verify_metric([[0, 0], [0, 0]]).kind == "positivity"

    def test_non_square_rejected(self):
        with pytest.raises(InputError):
            verify_metric([[0, 1]])

    def test_require_metric_raises_with_details(self):
        from l1cert.metric import require_metric

        require_metric([[0, 1], [1, 0]])
        with pytest.raises(InputError, match="triangle"):
            require_metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])


class TestShortestPath:
    def test_path_graph(self):
        g = make_graph(["a", "b", "c"], [("a", "b"), ("b", "c")])
        sp = shortest_path_metric(g)
        assert sp.d("a", "c") == 2

    def test_disconnected_rejected(self):
        g = make_graph(["a", "b", "c"], [("a", "b")])
        with pytest.raises(InputError, match="disconnected"):
            shortest_path_metric(g)

    def test_m2_examples(self):
        space, graph = build_m_ell1(2)
        bfs = shortest_path_metric(graph)
        assert bfs.d("{1}", "{2}") == 4  # path {1}-1-0-2-{2}
        assert bfs.d("1", "{1,2}") == 1
        assert np.array_equal(bfs.num, space.num)

    def test_distances_are_small_positive_integers(self, rng):
        for _ in range(20):
            g = random_connected_graph(rng, rng.randrange(3, 12))
            sp = shortest_path_metric(g)
            assert verify_metric(sp) is None
            off = sp.num[~np.eye(sp.size, dtype=bool)]
            assert off.min() >= 1
            assert off.max() <= sp.size - 1


class TestKuratowski:
    def test_two_point_space(self):
        sp = space_from_table(["a", "b"], [[0, 1], [1, 0]])
        pm = kuratowski_embed(sp, "a")
        assert pm.image_vector("a").values() == (F(0), F(0))
        assert pm.image_vector("b").values() == (F(1), F(-1))
        assert pm.image_distance("a", "b") == 1

    def test_isometry_on_m3(self):
        sp, _ = build_m_ell1(3)
        rep = distortion(kuratowski_embed(sp, "0"))
        assert rep.c1 == rep.c2 == rep.dist == 1

    def test_isometry_on_random_graphs(self, rng):
        for _ in range(15):
            sp = shortest_path_metric(random_connected_graph(rng, rng.randrange(3, 10)))
            base = rng.choice(sp.points)
            rep = distortion(kuratowski_embed(sp, base))
            assert rep.dist == 1


class TestDistortion:
    def test_identity_d_to_rho_report(self):
        # the map stretching membership edges: c1 = 1/2, c2 = 3/2, dist = 3
        for n in (2, 3):
            sp, _ = build_m_ell1(n)
            rep = distortion(identity_map(sp, rho_metric("m-ell1", n)))
            assert (rep.c1, rep.c2, rep.dist) == (F(1, 2), F(3, 2), F(3))

    def test_witness_pairs_realize_the_ratio(self):
        sp, _ = build_m_ell1(2)
        rho = rho_metric("m-ell1", 2)
        rep = distortion(identity_map(sp, rho))
        x, y = rep.c1_pair
        assert sp.d(x, y) / rho.d(x, y) == rep.c1
        x, y = rep.c2_pair
        assert sp.d(x, y) / rho.d(x, y) == rep.c2

    def test_non_injective_rejected(self):
        sp = space_from_table(["a", "b"], [[0, 1], [1, 0]])
        pm = PointMap(
            source=sp,
            coord_labels=("1",),
            image_num=np.zeros((2, 1), dtype=np.int64),
            image_den=1,
        )
        with pytest.raises(InputError, match="bi-Lipschitz"):
            distortion(pm)

    @settings(max_examples=25, deadline=None)
    @given(num=st.integers(1, 40), den=st.integers(1, 40))
    def test_scaling_invariance(self, num, den):
        sp, _ = build_m_ell1(2)
        pm = kuratowski_embed(sp, "0")
        lam = F(num, den)
        scaled = PointMap(
            source=sp,
            coord_labels=pm.coord_labels,
            image_num=pm.image_num.astype(np.int64) * num,
            image_den=pm.image_den * den,
        )
        base = distortion(pm)
        rep = distortion(scaled)
        assert rep.dist == base.dist
        assert rep.c1 == base.c1 / lam

    def test_relabeling_invariance(self, rng):
        sp = shortest_path_metric(random_connected_graph(rng, 8))
        perm = list(range(sp.size))
        rng.shuffle(perm)
        relabeled = FiniteMetricSpace(
            tuple(sp.points[i] for i in perm), sp.num[np.ix_(perm, perm)], sp.den
        )
        rep = distortion(identity_map(sp, rho_like(relabeled)))
        rep2 = distortion(identity_map(relabeled, rho_like(sp)))
        assert rep.dist == rep2.dist

    def test_single_point_rejected(self):
        sp = space_from_table(["a"], [[0]])
        with pytest.raises(InputError):
            distortion(PointMap(source=sp, coord_labels=("1",), image_num=np.zeros((1, 1), dtype=np.int64)))


def rho_like(space):
    """Double every distance: distortion 1 against the original labels."""
    return FiniteMetricSpace(space.points, space.num * 2, space.den)


class TestNorming:
    def test_examples(self):
        v = SupVector.from_fractions([F(3), F(-5)])
        w = norming_coordinate(v)
        assert (w.pos, w.label, w.eps) == (1, "2", -1)
        v = SupVector.from_fractions([F(2), F(2)])
        w = norming_coordinate(v)
        assert (w.pos, w.eps) == (0, 1)

    def test_zero_vector_rejected(self):
        with pytest.raises(InputError, match="zero"):
            norming_coordinate(SupVector.from_fractions([F(0), F(0)]))


class TestJamesGap:
    def test_kuratowski_m_r6_gap(self):
        pm = kuratowski_embed(build_m_r(6), "0")
        assert james_gap(pm, 3) == 2

    @pytest.mark.parametrize("n", range(1, 6))
    def test_gap_bound_at_isometry(self, n):
        pm = kuratowski_embed(build_m_r(6), "0")
        assert james_gap(pm, n) >= 2  # 4 - 2D at D = 1

    def test_gap_scales_linearly(self):
        pm = kuratowski_embed(build_m_r(5), "0")
        scaled = PointMap(
            source=pm.source,
            coord_labels=pm.coord_labels,
            image_num=pm.image_num.astype(np.int64) * 7,
            image_den=pm.image_den * 3,
        )
        assert james_gap(scaled, 2) == F(7, 3) * james_gap(pm, 2)

    def test_perturbed_embeddings_keep_the_bound(self, rng):
        # per-coordinate stretches in [1, D] preserve lower scale 1, upper D
        pm = kuratowski_embed(build_m_r(6), "0")
        dim = len(pm.coord_labels)
        den = 20
        for _ in range(10):
            spread = rng.randrange(0, 11)  # D = 1 + spread/20 in [1, 3/2]
            d_const = 1 + F(spread, den)
            factors = [den + rng.randrange(0, spread + 1) for _ in range(dim)]
            scaled = PointMap(
                source=pm.source,
                coord_labels=pm.coord_labels,
                image_num=pm.image_num.astype(np.int64) * np.array(factors, dtype=np.int64),
                image_den=den,
            )
            for n in range(1, 6):
                assert james_gap(scaled, n) >= 4 - 2 * d_const

    def test_requires_hub_at_zero(self):
        pm = kuratowski_embed(build_m_r(4), "1")
        with pytest.raises(InputError, match="hub"):
            james_gap(pm, 2)

    def test_n_out_of_range(self):
        pm = kuratowski_embed(build_m_r(4), "0")
        with pytest.raises(InputError):
            james_gap(pm, 4)
