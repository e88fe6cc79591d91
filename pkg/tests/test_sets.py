import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from altproj.geometry import ConeSpec
from altproj.sets import (Ball, DiagonalAffineGraph, DykstraNonConvergence,
                          Halfspace, Hyperplane, NonnegOrthant, OrthoSubspace,
                          Polygon2D, Polyhedron, ProjectionUnsupported,
                          ShiftedConvexCone, SupportUnavailable, membership,
                          polyhedron_project_dykstra, project, sample_points,
                          set_from_dict, set_to_dict, slice_sample,
                          support_point, support_value)

from _oracles import (PROJECTABLE_KINDS, disc_slice_diameter,
                      graph_projection_first_coords_oracle,
                      polyhedron_projection_bruteforce, random_set)


# ---------------------------------------------------------------------------
# projection examples


def test_halfspace_projection_drops_positive_part():
    H = Halfspace(np.array([1.0, 0.0]), 0.0)
    np.testing.assert_allclose(H.project(np.array([2.0, 3.0])), [0.0, 3.0])


def test_orthant_clamps():
    K = NonnegOrthant(2)
    np.testing.assert_allclose(K.project(np.array([-1.0, 2.0])), [0.0, 2.0])


def test_polygon_projection_foot_on_bottom_edge():
    A = Polygon2D([(1, 1), (-1, 1), (1, 0), (-1, 0)])
    np.testing.assert_allclose(A.project(np.array([0.0, -1.0])), [0.0, 0.0])


def test_graph_projection_matches_line_search_example():
    g = DiagonalAffineGraph(np.array([0.5]), np.array([0.2]))
    z = np.array([1.0, 0.0])
    got = g.project(z)
    assert got[0] == pytest.approx(0.72, abs=1e-12)
    oracle = graph_projection_first_coords_oracle(g.theta, g.offset, z)
    assert got[0] == pytest.approx(oracle[0], abs=1e-10)


def test_graph_projection_matches_line_search_random(rng):
    for _ in range(25):
        d = int(rng.integers(1, 5))
        g = DiagonalAffineGraph(rng.uniform(-2, 2, size=d), rng.uniform(-1, 1, size=d))
        z = rng.standard_normal(2 * d) * 2
        got = g.project(z)[:d]
        oracle = graph_projection_first_coords_oracle(g.theta, g.offset, z)
        np.testing.assert_allclose(got, oracle, atol=1e-10)


def test_projection_rejected_on_cone_kind():
    cone = ShiftedConvexCone(ConeSpec(np.array([0.0, 1.0]), 0.5))
    with pytest.raises(ProjectionUnsupported):
        project(cone, np.array([1.0, 1.0]))


# ---------------------------------------------------------------------------
# Dykstra


def test_dykstra_single_constraint_agrees_with_halfspace():
    P = Polyhedron(np.array([[1.0, 0.0]]), np.array([0.0]), witness=np.array([-1.0, 0.0]))
    np.testing.assert_allclose(polyhedron_project_dykstra(P, np.array([2.0, 3.0])),
                               [0.0, 3.0], atol=1e-10)


def test_dykstra_orthant_corner():
    P = Polyhedron(np.array([[1.0, 0.0], [0.0, 1.0]]), np.zeros(2),
                   witness=np.array([-1.0, -1.0]))
    got = polyhedron_project_dykstra(P, np.array([1.0, 1.0]))
    oracle = polyhedron_projection_bruteforce(P, np.array([1.0, 1.0]))
    np.testing.assert_allclose(got, [0.0, 0.0], atol=1e-9)
    np.testing.assert_allclose(got, oracle, atol=1e-9)


def test_dykstra_feasible_point_unchanged():
    P = Polyhedron(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([1.0, 1.0]),
                   witness=np.zeros(2))
    x = np.array([0.2, -0.5])
    np.testing.assert_array_equal(polyhedron_project_dykstra(P, x), x)


def test_dykstra_budget_error_carries_state():
    # thin wedge: one cycle cannot settle, so a unit budget must fail
    P = Polyhedron(np.array([[1.0, 0.02], [-1.0, 0.02]]), np.zeros(2),
                   witness=np.array([0.0, -1.0]))
    with pytest.raises(DykstraNonConvergence) as err:
        polyhedron_project_dykstra(P, np.array([0.0, 5.0]), tol=1e-14, max_iter=1)
    assert err.value.last_iterate.shape == (2,)
    assert err.value.residual > 0.0


def test_dykstra_matches_bruteforce_random(rng):
    for _ in range(30):
        P = random_set("polyhedron", rng)
        x = rng.standard_normal(P.dim) * 2
        got = polyhedron_project_dykstra(P, x, tol=1e-12)
        oracle = polyhedron_projection_bruteforce(P, x)
        np.testing.assert_allclose(got, oracle, atol=1e-8)


# ---------------------------------------------------------------------------
# membership


def test_membership_examples():
    assert membership(Ball(np.zeros(2), 1.0), np.array([0.5, 0.0]), 0.0)
    assert membership(Hyperplane(np.array([0.0, 1.0]), 0.0),
                      np.array([7.0, 1e-12]), 1e-9)
    P = Polyhedron(np.array([[1.0, 0.0], [-1.0, 0.0]]), np.array([1.0, 1.0]),
                   witness=np.zeros(2))
    assert not membership(P, np.array([2.0, 0.0]), 0.5)
    assert membership(P, np.array([2.0, 0.0]), 1.0 + 1e-9)


def test_membership_cone_kind_uses_cone_residual():
    cone = ShiftedConvexCone(ConeSpec(np.array([0.0, 1.0]), 0.5))
    assert membership(cone, np.array([0.0, 2.0]), 0.0)
    assert not membership(cone, np.array([2.0, 0.0]), 1e-9)


# ---------------------------------------------------------------------------
# support values and slices


def test_support_value_examples():
    assert support_value(Ball(np.array([0.0, 1.0]), 1.0),
                         np.array([0.0, -1.0])) == pytest.approx(0.0, abs=1e-15)
    A = Polygon2D([(1, 1), (-1, 1), (1, 0), (-1, 0)])
    assert support_value(A, np.array([0.0, 1.0])) == 1.0
    assert support_value(A, np.array([0.0, -1.0])) == 0.0


def test_support_value_unbounded_direction_errors():
    with pytest.raises(SupportUnavailable):
        support_value(Halfspace(np.array([1.0, 0.0]), 0.0), np.array([0.0, 1.0]))
    with pytest.raises(SupportUnavailable):
        support_value(NonnegOrthant(2), np.array([1.0, -1.0]))
    with pytest.raises(SupportUnavailable):
        support_value(OrthoSubspace(np.array([[1.0, 0.0]])), np.array([1.0, 0.0]))
    # unbounded polyhedron direction detected
    P = Polyhedron(np.array([[1.0, 0.0]]), np.array([1.0]), witness=np.zeros(2))
    with pytest.raises(SupportUnavailable):
        support_value(P, np.array([-1.0, 0.0]))


def test_support_value_polyhedron_matches_vertices(rng):
    for _ in range(10):
        P = random_set("polyhedron", rng, dim=2)
        f = rng.standard_normal(2)
        try:
            val = support_value(P, f)
        except SupportUnavailable:
            continue
        pt = support_point(P, f)
        assert float(f @ pt) == pytest.approx(val, rel=1e-9, abs=1e-9)
        assert membership(P, pt, 1e-7)


def test_slice_sample_whole_ball():
    B = Ball(np.array([0.0, 1.0]), 1.0)
    pts = slice_sample(B, np.array([0.0, 1.0]), alpha=2.0, n_samples=600, rng_seed=0)
    diffs = pts[:, None, :] - pts[None, :, :]
    diam = np.sqrt(np.max(np.sum(diffs ** 2, axis=-1)))
    assert diam == pytest.approx(2.0, abs=0.05)


@pytest.mark.parametrize("alpha", [0.3, 0.1, 0.03])
def test_slice_sample_ball_cap_diameter_shrinks(alpha):
    B = Ball(np.array([0.0, 1.0]), 1.0)
    pts = slice_sample(B, np.array([0.0, 1.0]), alpha=alpha, n_samples=400, rng_seed=1)
    f_vals = pts @ np.array([0.0, 1.0])
    assert np.all(f_vals >= 2.0 - alpha - 1e-9)
    diffs = pts[:, None, :] - pts[None, :, :]
    diam = np.sqrt(np.max(np.sum(diffs ** 2, axis=-1)))
    assert diam <= disc_slice_diameter(alpha) + 1e-9


def test_slice_sample_polygon_band():
    A = Polygon2D([(1, 1), (-1, 1), (1, 0), (-1, 0)])
    pts = slice_sample(A, np.array([0.0, 1.0]), alpha=0.5, n_samples=300, rng_seed=2)
    assert np.all(pts[:, 1] >= 0.5 - 1e-9)


def test_slice_sample_contains_support_face_point():
    B = Ball(np.array([2.0, 0.0]), 1.0)
    f = np.array([1.0, 0.0])
    pts = slice_sample(B, f, alpha=0.05, n_samples=50, rng_seed=3)
    assert np.max(pts @ f) >= support_value(B, f) - 1e-9


# ---------------------------------------------------------------------------
# projection contract properties across kinds


def _sample_interior(S, rng, k):
    return [S.project(rng.standard_normal(S.dim) * s) for s in rng.uniform(0.2, 3.0, k)]


@pytest.mark.parametrize("kind", PROJECTABLE_KINDS)
def test_projection_contract_per_kind(kind, rng):
    for _ in range(12):
        S = random_set(kind, rng)
        x = rng.standard_normal(S.dim) * 2.5
        z = rng.standard_normal(S.dim) * 2.5
        px, pz = project(S, x), project(S, z)
        # membership of the projection
        assert membership(S, px, 1e-9)
        # nonexpansiveness
        assert np.linalg.norm(px - pz) <= np.linalg.norm(x - z) + 1e-9
        # idempotence
        assert np.linalg.norm(project(S, px) - px) <= 1e-10
        # variational inequality against sampled members
        for y in _sample_interior(S, rng, 12):
            assert float((x - px) @ (y - px)) <= 1e-8
        # cosine form for exterior points
        if np.linalg.norm(x - px) > 1e-8:
            for y in _sample_interior(S, rng, 6):
                if np.linalg.norm(y - px) < 1e-10 or np.linalg.norm(x - y) < 1e-12:
                    continue
                cosv = float((px - y) @ (x - y)) / (np.linalg.norm(px - y)
                                                    * np.linalg.norm(x - y))
                assert np.linalg.norm(y - px) <= np.linalg.norm(x - y) * cosv + 1e-8


coords = st.floats(min_value=-50, max_value=50, allow_nan=False)


@given(arrays(np.float64, 3, elements=coords), arrays(np.float64, 3, elements=coords),
       arrays(np.float64, 3, elements=coords), st.floats(-5, 5))
def test_halfspace_projection_properties(x, z, a, b):
    if np.linalg.norm(a) < 1e-6:
        return
    H = Halfspace(a, b)
    px, pz = H.project(x), H.project(z)
    assert H.distance(px) <= 1e-9
    assert np.linalg.norm(px - pz) <= np.linalg.norm(x - z) + 1e-9
    assert np.linalg.norm(H.project(px) - px) <= 1e-10


@given(arrays(np.float64, 2, elements=coords), arrays(np.float64, 2, elements=coords),
       st.floats(0.1, 10))
def test_ball_projection_properties(x, c, r):
    B = Ball(c, r)
    px = B.project(x)
    assert B.distance(px) <= 1e-9
    assert np.linalg.norm(B.project(px) - px) <= 1e-10
    # exterior points land exactly on the sphere
    if np.linalg.norm(x - c) > r:
        assert np.linalg.norm(px - c) == pytest.approx(r, rel=1e-12)


def test_subspace_residual_orthogonality(rng):
    for _ in range(20):
        S = random_set("ortho_subspace", rng)
        x = rng.standard_normal(S.dim) * 3
        r = x - project(S, x)
        for row in S.basis:
            assert abs(float(r @ row)) <= 1e-9


# ---------------------------------------------------------------------------
# constructors and serialization


def test_polygon_constructor_reorders_and_dedupes():
    # shuffled square with duplicates collapses to the CCW hull
    P = Polygon2D([(1, 0), (1, 1), (-1, 0), (-1, 1), (1, 1), (0.0, 0.5)])
    assert len(P.vertices) == 4
    v = P.vertices
    m = len(v)
    for i in range(m):
        p, q, r = v[i], v[(i + 1) % m], v[(i + 2) % m]
        cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        assert cross > 0  # strictly convex, CCW


def test_degenerate_halfspace_rejected():
    with pytest.raises(ValueError):
        Halfspace(np.array([0.0, 0.0]), 1.0)


def test_orthonormality_enforced():
    with pytest.raises(ValueError):
        OrthoSubspace(np.array([[1.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        OrthoSubspace(np.array([[1.0, 1.0]]))


def test_polyhedron_requires_feasible_witness():
    with pytest.raises(ValueError):
        Polyhedron(np.array([[1.0, 0.0]]), np.array([0.0]), witness=np.array([1.0, 0.0]))


def test_ball_radius_positive():
    with pytest.raises(ValueError):
        Ball(np.zeros(2), 0.0)


def test_json_round_trip_all_kinds(rng):
    sets = [random_set(kind, rng) for kind in PROJECTABLE_KINDS]
    sets.append(ShiftedConvexCone(ConeSpec(rng.standard_normal(3), 0.37, shift=0.25)))
    for S in sets:
        doc = json.loads(json.dumps(set_to_dict(S)))
        T = set_from_dict(doc)
        assert type(T) is type(S)
        for key, val in set_to_dict(S).items():
            val2 = set_to_dict(T)[key]
            if isinstance(val, list):
                np.testing.assert_array_equal(np.asarray(val, dtype=float),
                                              np.asarray(val2, dtype=float))
            else:
                assert val == val2


def test_translate_consistency(rng):
    for kind in PROJECTABLE_KINDS:
        S = random_set(kind, rng)
        v = rng.standard_normal(S.dim)
        T = S.translate(v)
        for _ in range(8):
            x = S.project(rng.standard_normal(S.dim) * 2)
            assert membership(T, x + v, 1e-8)


def test_sample_points_land_in_set(rng):
    for kind in PROJECTABLE_KINDS:
        S = random_set(kind, rng)
        for p in sample_points(S, 16, rng):
            assert membership(S, p, 1e-8)
