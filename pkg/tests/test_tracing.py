import math

import numpy as np
import pytest

from cuspidal import (
    CartesianPoint,
    Geometry,
    aspect_count,
    count_features,
    detect_cusps,
    detect_nodes,
    inverse_kinematics,
    isolated_singular_points,
    jacobian_det_closed,
    singular_theta2,
    trace_singular_set,
    workspace_image,
)
from cuspidal.kinematics import JointConfig, forward_kinematics, ik_multiplicity
from cuspidal.tracing import feature_details, region_probe

REFERENCE = Geometry(d3=2.0, d4=1.5, r2=1.0)
LINES = Geometry(d3=0.5, d4=1.5, r2=1.0)


class TestSingularTheta2:
    def test_zero_theta3_gives_quarter_turns(self):
        vals = singular_theta2(REFERENCE, 0.0)
        assert np.allclose(sorted(vals), [-math.pi / 2, math.pi / 2])

    def test_right_angle_theta3(self):
        vals = singular_theta2(REFERENCE, math.pi / 2)
        assert np.allclose(sorted(vals), [-2.09440, 2.09440], atol=1e-5)
        for t2 in vals:
            assert abs(jacobian_det_closed(REFERENCE, JointConfig(0.0, t2, math.pi / 2))) < 1e-12

    def test_pole_region_is_empty(self):
        # denominator c3*r2 - s3*d3 vanishes at atan(r2/d3), |c2| blows up
        pole = math.atan2(REFERENCE.r2, REFERENCE.d3)
        assert singular_theta2(REFERENCE, pole) == ()
        assert singular_theta2(REFERENCE, pole + 1e-4) == ()


class TestTraceSingularSet:
    def test_two_branches_when_d3_exceeds_d4(self):
        curves = trace_singular_set(REFERENCE)
        assert [c.label for c in curves] == ["S1", "S2"]

    def test_lines_appear_when_d3_below_d4(self):
        curves = trace_singular_set(LINES)
        labels = [c.label for c in curves]
        assert labels == ["S1", "S2", "LINE_PLUS", "LINE_MINUS"]
        expect = math.acos(-LINES.d3 / LINES.d4)
        plus = next(c for c in curves if c.label == "LINE_PLUS")
        minus = next(c for c in curves if c.label == "LINE_MINUS")
        assert plus.line_theta3 == pytest.approx(expect, abs=1e-12)
        assert minus.line_theta3 == pytest.approx(-expect, abs=1e-12)
        assert expect == pytest.approx(math.acos(-1.0 / 3.0), abs=1e-12)

    @pytest.mark.parametrize("geom", [REFERENCE, LINES, Geometry(d3=1.7, d4=2.6, r2=0.4)])
    def test_residual_bound_on_all_samples(self, geom):
        for curve in trace_singular_set(geom, 500):
            for theta2, theta3 in curve.joint:
                assert abs(jacobian_det_closed(geom, JointConfig(0.0, theta2, theta3))) <= 1e-9

    def test_minimum_sampling_enforced(self):
        with pytest.raises(ValueError):
            trace_singular_set(REFERENCE, 99)

    def test_equal_lengths_single_line(self):
        curves = trace_singular_set(Geometry(d3=1.0, d4=1.0, r2=1.0))
        lines = [c for c in curves if c.is_line]
        assert len(lines) == 1
        assert lines[0].line_theta3 == pytest.approx(math.pi)


class TestWorkspaceImage:
    def test_matches_forward_kinematics(self):
        curves = trace_singular_set(REFERENCE, 300)
        for curve in curves:
            img = workspace_image(REFERENCE, curve)
            for (t2, t3), (rho, z) in zip(curve.joint, img):
                p = forward_kinematics(REFERENCE, JointConfig(0.0, t2, t3))
                assert math.hypot(p.x, p.y) == pytest.approx(rho, abs=1e-12)
                assert p.z == pytest.approx(z, abs=1e-12)
            assert np.all(img[:, 0] >= 0.0)

    def test_external_branch_reaches_grid_maximum(self):
        curves = trace_singular_set(REFERENCE)
        ws2 = next(c for c in curves if c.label == "S2")
        t2g, t3g = np.meshgrid(np.linspace(-math.pi, math.pi, 600),
                               np.linspace(-math.pi, math.pi, 600))
        from cuspidal.kinematics import fk_half_section
        rho, _ = fk_half_section(REFERENCE, t2g, t3g)
        assert ws2.max_rho() == pytest.approx(float(rho.max()), abs=1e-3)

    def test_line_images_collapse_to_isolated_points(self):
        curves = trace_singular_set(LINES)
        iso = isolated_singular_points(LINES)
        for c in curves:
            if not c.is_line:
                continue
            spread = np.ptp(c.image, axis=0)
            assert float(spread.max()) < 1e-9
            pt = c.image[0]
            assert min(math.hypot(pt[0] - p.rho, pt[1] - p.z) for p in iso) < 1e-9

    def test_every_image_point_is_a_multiple_root(self):
        curves = trace_singular_set(REFERENCE, 200)
        for curve in curves:
            for rho, z in curve.image[::17]:
                assert ik_multiplicity(REFERENCE, rho * rho, z, 1e-3) >= 2


class TestIsolatedPoints:
    def test_absent_when_d3_larger(self):
        assert isolated_singular_points(REFERENCE) == ()

    def test_pair_positions(self):
        pts = isolated_singular_points(LINES)
        assert len(pts) == 2
        rhos = sorted(p.rho for p in pts)
        assert rhos[0] == pytest.approx(1.08239, abs=1e-5)
        assert rhos[1] == pytest.approx(2.61313, abs=1e-5)
        assert all(p.z == 0.0 for p in pts)

    def test_equal_lengths_single_point(self):
        pts = isolated_singular_points(Geometry(d3=1.0, d4=1.0, r2=1.0))
        assert len(pts) == 1
        assert pts[0].rho == pytest.approx(math.sqrt(2.0))


class TestDetectCusps:
    def test_reference_geometry_has_four_cusps_on_ws1(self):
        curves = trace_singular_set(REFERENCE)
        cusps = detect_cusps(REFERENCE, curves)
        assert len(cusps) == 4
        assert all(c.branch == "S1" for c in cusps)
        assert all(c.root_multiplicity >= 3 for c in cusps)

    def test_binary_geometry_has_none(self):
        g = Geometry(d3=2.0, d4=0.1, r2=1.0)
        assert detect_cusps(g, trace_singular_set(g)) == []

    def test_two_cusp_geometry(self):
        g = Geometry(d3=2.0, d4=2.5, r2=1.0)
        assert len(detect_cusps(g, trace_singular_set(g))) == 2

    def test_cusps_mirror_in_z(self):
        curves = trace_singular_set(REFERENCE)
        cusps = detect_cusps(REFERENCE, curves)
        zs = sorted(round(c.point.z, 6) for c in cusps)
        assert zs == sorted(-v for v in zs)


class TestDetectNodes:
    def test_reference_geometry_has_none(self):
        curves = trace_singular_set(REFERENCE)
        assert detect_nodes(REFERENCE, curves) == []

    def test_two_node_geometry(self):
        g = Geometry(d3=2.0, d4=0.5, r2=1.0)
        nodes = detect_nodes(g, trace_singular_set(g))
        assert len(nodes) == 2
        zs = sorted(round(n.point.z, 6) for n in nodes)
        assert zs == sorted(-v for v in zs)
        assert all(n.branches == ("S1", "S1") for n in nodes)

    def test_four_node_geometry(self):
        g = Geometry(d3=2.0, d4=3.0, r2=1.0)
        nodes = detect_nodes(g, trace_singular_set(g))
        assert len(nodes) == 4
        assert any(set(n.branches) == {"S1", "S2"} for n in nodes)
        assert sum(1 for n in nodes if n.at_isolated_point) == 2

    def test_node_multiplicity_signature(self):
        # away from isolated points a node carries two distinct double roots
        g = Geometry(d3=2.0, d4=0.5, r2=1.0)
        from cuspidal import ik_quartic, solve_roots
        for n in detect_nodes(g, trace_singular_set(g)):
            pattern = solve_roots(ik_quartic(g, n.point.rho ** 2, n.point.z), 1e-3)
            assert pattern.multiplicities()[:2] == (2, 2)

    def test_isolated_point_nodes_snap(self):
        g = Geometry(d3=2.0, d4=2.05, r2=1.0)
        nodes = detect_nodes(g, trace_singular_set(g))
        iso = isolated_singular_points(g)
        assert len(nodes) == 2
        assert all(n.at_isolated_point for n in nodes)
        for n in nodes:
            assert min(abs(n.point.rho - p.rho) for p in iso) < 1e-12
            assert n.point.z == 0.0


class TestCountFeatures:
    @pytest.mark.parametrize("geom,expected", [
        (REFERENCE, (4, 0)),
        (Geometry(d3=2.0, d4=3.0, r2=1.0), (4, 4)),
        (Geometry(d3=2.0, d4=0.1, r2=1.0), (0, 0)),
    ])
    def test_reference_counts(self, geom, expected):
        assert count_features(geom).as_tuple() == expected

    def test_stable_under_sample_doubling(self):
        for geom in (REFERENCE, Geometry(d3=2.0, d4=2.5, r2=1.0)):
            assert count_features(geom, 2000).as_tuple() == \
                count_features(geom, 4000).as_tuple()

    def test_image_set_symmetric_about_axis(self):
        rep = feature_details(Geometry(d3=2.0, d4=3.0, r2=1.0))
        for c in rep.curves:
            if c.is_line:
                continue
            pts = c.image
            mirrored = pts.copy()
            mirrored[:, 1] *= -1.0
            # every mirrored sample lies near some sample of the same curve
            for p in mirrored[::43]:
                d = np.min(np.hypot(pts[:, 0] - p[0], pts[:, 1] - p[1]))
                assert d < 5e-3


class TestRegionProbe:
    def test_reference_region_counts(self):
        probe = region_probe(REFERENCE)
        assert probe.inner_iks == 4
        assert probe.annulus_iks == 2

    def test_binary_geometry_hole(self):
        probe = region_probe(Geometry(d3=2.0, d4=0.1, r2=1.0))
        assert probe.inner_iks == 0
        assert probe.annulus_iks == 2

    def test_points_just_inside_and_outside_internal_boundary(self):
        from cuspidal.tracing import _point_in_polygon, detect_cusps

        curves = trace_singular_set(REFERENCE)
        ws1 = next(c for c in curves if c.label == "S1")
        cusps = detect_cusps(REFERENCE, curves)
        checked = 0
        for idx in range(0, len(ws1.image), 97):
            p = ws1.image[idx]
            if min(math.hypot(p[0] - c.point.rho, p[1] - c.point.z)
                   for c in cusps) < 0.2:
                continue
            tangent = ws1.image[(idx + 1) % len(ws1.image)] - ws1.image[idx - 1]
            n = np.array([-tangent[1], tangent[0]])
            n /= math.hypot(*n)
            for q in (p + 0.02 * n, p - 0.02 * n):
                if q[0] < 0.0:
                    continue
                expected = 4 if _point_in_polygon(q[0], q[1], ws1.image) else 2
                sols = inverse_kinematics(REFERENCE, CartesianPoint(q[0], 0.0, q[1]))
                assert len(sols) == expected
                checked += 1
        assert checked >= 10


class TestAspectCount:
    def test_reference_geometry_has_two(self):
        assert aspect_count(REFERENCE) == 2

    def test_grid_refinement_invariance(self):
        assert aspect_count(REFERENCE, 512) == aspect_count(REFERENCE, 1024)

    def test_lines_create_more_aspects(self):
        assert aspect_count(LINES) >= 2

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            aspect_count(REFERENCE, 32)
