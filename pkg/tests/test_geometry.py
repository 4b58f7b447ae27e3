import math
import random

import pytest

from affina.errors import InvalidFormError, ParabolicPointError, WrongChartError
from affina.geometry import (
    conormal_cross_normal,
    frame_jets,
    named_coefficients,
    normal_form_surface,
    point_frame,
    principal_data,
)

from _tables import (
    jet_linear,
    shape_linear_elliptic,
    shape_linear_hyperbolic,
    xi_linear_elliptic,
    xi_linear_hyperbolic,
)

rng = random.Random(71930)


def _random_monge(order=6, spread=1.5):
    params = {}
    for i in range(order + 1):
        for j in range(order + 1 - i):
            if 2 <= i + j:
                params[f"{i},{j}"] = rng.uniform(-spread, spread)
    return normal_form_surface("monge", params, order)


def _random_point(surface, box=0.4, min_d=0.05):
    for _ in range(200):
        u0, v0 = rng.uniform(-box, box), rng.uniform(-box, box)
        H = surface.hjet
        L = H.partial("u").partial("u").evaluate(u0, v0)
        M = H.partial("u").partial("v").evaluate(u0, v0)
        N = H.partial("v").partial("v").evaluate(u0, v0)
        if abs(L * N - M * M) > min_d:
            return u0, v0
    raise AssertionError("no usable sample point found")


def _random_pick(kind):
    q = {n: rng.uniform(-2.0, 2.0)
         for n in ("q40", "q31", "q22", "q13", "q04",
                   "q50", "q41", "q32", "q23", "q14", "q05")}
    q["sigma"] = rng.uniform(-1.5, 1.5)
    return q, normal_form_surface(kind, q, order=6)


def test_factorial_convention():
    s = normal_form_surface("monge", {"3,0": 6.0, "2,2": 8.0}, 5)
    assert s.hjet.coefficient(3, 0) == pytest.approx(1.0)
    assert s.hjet.coefficient(2, 2) == pytest.approx(2.0)
    p = s.partials_at_origin()
    assert p[(3, 0)] == pytest.approx(6.0)
    assert p[(2, 2)] == pytest.approx(8.0)


def test_apolarity_both_signs():
    """<nu, xi> = 1 and <nu, d xi> = 0 pointwise, whatever the sign of D."""
    done = {1.0: 0, -1.0: 0}
    while min(done.values()) < 8:
        surf = _random_monge()
        pt = _random_point(surf)
        fr = point_frame(surf, pt)
        done[fr.sign] += 1
        ip = sum(a * b for a, b in zip(fr.nu, fr.xi))
        assert abs(ip - 1.0) < 1e-9
        for dxi in (fr.xi_u, fr.xi_v):
            ipd = sum(a * b for a, b in zip(fr.nu, dxi))
            assert abs(ipd) < 1e-8 * (1 + max(abs(x) for x in dxi))


def test_xi_derivative_matches_finite_difference():
    surf = _random_monge()
    u0, v0 = _random_point(surf, box=0.2)
    fr = point_frame(surf, (u0, v0))
    h = 1e-5
    for axis, dxi in ((0, fr.xi_u), (1, fr.xi_v)):
        step = (h, 0.0) if axis == 0 else (0.0, h)
        plus = point_frame(surf, (u0 + step[0], v0 + step[1])).xi
        minus = point_frame(surf, (u0 - step[0], v0 - step[1])).xi
        for k in range(3):
            fd = (plus[k] - minus[k]) / (2 * h)
            assert abs(fd - dxi[k]) < 1e-5 * (1 + abs(dxi[k]))


def test_cross_product_route_agrees():
    for _ in range(6):
        surf = _random_monge()
        pt = _random_point(surf)
        fr = point_frame(surf, pt)
        xi2 = conormal_cross_normal(surf, pt)
        for a, b in zip(fr.xi, xi2):
            assert abs(a - float(b.constant_term)) < 1e-8 * (1 + abs(a))


def test_xi_one_jet_definite():
    for _ in range(20):
        q, surf = _random_pick("pick_elliptic")
        xi = frame_jets(surf)["xi"]
        want = xi_linear_elliptic(q["sigma"], q)
        for comp, w in zip(xi[:2], want):
            got = jet_linear(comp)
            assert max(abs(g - e) for g, e in zip(got, w)) < 1e-9
        assert abs(float(xi[2].constant_term) - 1.0) < 1e-12


def test_xi_one_jet_indefinite():
    for _ in range(20):
        q, surf = _random_pick("pick_hyperbolic")
        xi = frame_jets(surf)["xi"]
        want = xi_linear_hyperbolic(q["sigma"], q)
        for comp, w in zip(xi[:2], want):
            got = jet_linear(comp)
            assert max(abs(g - e) for g, e in zip(got, w)) < 1e-9


def _shape_jets(surf):
    jets = frame_jets(surf)
    s = jets["sign"]
    xi_u, xi_v = jets["xi_u"], jets["xi_v"]
    # xi_u = b11 X_u + b21 X_v (up to the stored sign): components 1, 2 read off.
    return {
        "b11": tuple(s * c for c in jet_linear(xi_u[0])),
        "b21": tuple(s * c for c in jet_linear(xi_u[1])),
        "b12": tuple(s * c for c in jet_linear(xi_v[0])),
        "b22": tuple(s * c for c in jet_linear(xi_v[1])),
    }


def test_shape_one_jet_definite():
    for _ in range(20):
        q, surf = _random_pick("pick_elliptic")
        got = _shape_jets(surf)
        want = shape_linear_elliptic(q["sigma"], q)
        for key in ("b11", "b12", "b21", "b22"):
            assert max(abs(g - e) for g, e in zip(got[key], want[key])) < 1e-9, key


def test_shape_one_jet_indefinite():
    for _ in range(20):
        q, surf = _random_pick("pick_hyperbolic")
        got = _shape_jets(surf)
        want = shape_linear_hyperbolic(q["sigma"], q)
        for key in ("b11", "b12", "b21", "b22"):
            assert max(abs(g - e) for g, e in zip(got[key], want[key])) < 1e-9, key


def test_point_frame_constants_match_shape_table():
    q, surf = _random_pick("pick_hyperbolic")
    fr = point_frame(surf)
    want = shape_linear_hyperbolic(q["sigma"], q)
    assert fr.b11 == pytest.approx(want["b11"][0], abs=1e-9)
    assert fr.b12 == pytest.approx(want["b12"][0], abs=1e-9)
    assert fr.b21 == pytest.approx(want["b21"][0], abs=1e-9)
    assert fr.b22 == pytest.approx(want["b22"][0], abs=1e-9)


def test_third_form_from_metric_contraction():
    surf = _random_monge()
    pt = _random_point(surf)
    fr = point_frame(surf, pt)
    rho = abs(fr.D) ** 0.25
    s = fr.sign
    l_alt = -(s * fr.b11 * fr.L + s * fr.b21 * fr.M) / rho
    n_alt = -(s * fr.b12 * fr.M + s * fr.b22 * fr.N) / rho
    scale = max(abs(fr.l), abs(fr.n), 1.0)
    assert abs(fr.l - l_alt) < 1e-8 * scale
    assert abs(fr.n - n_alt) < 1e-8 * scale


def test_gauss_curvature_sign():
    surf = normal_form_surface("pick_hyperbolic", {"sigma": 0.3}, 5)
    assert point_frame(surf).Ke < 0
    surf = normal_form_surface("pick_elliptic", {"sigma": 0.3}, 5)
    assert point_frame(surf).Ke > 0


def test_parabolic_point_rejected():
    surf = normal_form_surface("monge", {"2,0": 1.0}, 4)
    with pytest.raises(ParabolicPointError):
        point_frame(surf)
    surf = normal_form_surface("parabolic", {"k": 1.0, "q30": 1.0}, 5)
    with pytest.raises(ParabolicPointError):
        point_frame(surf, (0.0, 0.0))
    # off the parabolic set the frame exists
    fr = point_frame(surf, (0.3, 0.0))
    assert abs(sum(a * b for a, b in zip(fr.nu, fr.xi)) - 1.0) < 1e-9


def test_principal_data_kinds():
    surf = normal_form_surface("pick_elliptic", {}, 5)
    pd = principal_data(point_frame(surf))
    assert pd.kind == "isotropic"
    assert pd.curvatures == pytest.approx((0.0, 0.0))

    surf = normal_form_surface("pick_elliptic", {"q40": -4.0, "q04": 4.0}, 5)
    pd = principal_data(point_frame(surf))
    assert pd.kind == "two_real"
    assert pd.curvatures == pytest.approx((-1.0, 1.0))
    assert pd.directions == ((0.0, 1.0), (1.0, 0.0))

    # In the indefinite chart b12 = -b21 is reachable: rotation matrix,
    # complex eigenvalue pair (the definite chart always gives b symmetric).
    surf = normal_form_surface("pick_hyperbolic", {"q31": 4.0}, 5)
    pd = principal_data(point_frame(surf))
    assert pd.kind == "complex_pair"
    assert pd.curvatures == pytest.approx((0.0, 1.0))


def test_principal_eigendirections():
    for _ in range(10):
        surf = _random_monge()
        pt = _random_point(surf)
        fr = point_frame(surf, pt)
        pd = principal_data(fr)
        if pd.kind != "two_real":
            continue
        s = fr.sign
        mat = ((s * fr.b11, s * fr.b12), (s * fr.b21, s * fr.b22))
        for lam, (du, dv) in zip(pd.curvatures, pd.directions):
            ru = mat[0][0] * du + mat[0][1] * dv - lam * du
            rv = mat[1][0] * du + mat[1][1] * dv - lam * dv
            scale = max(abs(lam), 1.0)
            assert math.hypot(ru, rv) < 1e-8 * scale


def test_named_coefficients_round_trip():
    for kind, params in (
        ("pick_elliptic", {"sigma": 0.7, "q40": 2.4, "q05": -1.0}),
        ("pick_hyperbolic", {"sigma": -0.4, "q13": 1.1}),
        ("buchin", {"q30": 1.0, "q03": -2.0, "q51": 0.5}),
        ("parabolic", {"k": 2.0, "q30": 1.0, "q21": -0.5}),
    ):
        surf = normal_form_surface(kind, params, 6)
        kind2, named = named_coefficients(surf)
        assert kind2 == kind
        for key, val in params.items():
            assert named.get(key, 0.0) == pytest.approx(val)


def test_named_coefficients_from_raw_monge():
    sigma = 0.7
    surf = normal_form_surface(
        "monge",
        {"2,0": 1.0, "0,2": 1.0, "3,0": sigma, "1,2": -sigma, "4,0": 2.4},
        6,
    )
    kind, named = named_coefficients(surf)
    assert kind == "pick_elliptic"
    assert named["sigma"] == pytest.approx(sigma)
    assert named["q40"] == pytest.approx(2.4)

    surf = normal_form_surface("monge", {"1,1": 1.0, "3,0": 2.0}, 6)
    kind, named = named_coefficients(surf)
    assert kind == "buchin"
    assert named["q30"] == pytest.approx(2.0)

    surf = normal_form_surface("monge", {"0,2": 2.0, "3,0": 1.5}, 6)
    kind, named = named_coefficients(surf)
    assert kind == "parabolic"
    assert named["k"] == pytest.approx(2.0)


def test_named_coefficients_rejects_wrong_chart():
    bad = (
        {"2,0": 1.0, "0,2": 1.0, "2,1": 0.3},       # cubic violates definite chart
        {"1,0": 0.5, "2,0": 1.0, "0,2": 1.0},        # not centered
        {"2,0": 1.0, "1,1": 0.5, "0,2": 1.0},        # 2-jet matches nothing
        {"1,1": 1.0, "1,2": 0.2},                    # cubic violates uv chart
    )
    for params in bad:
        with pytest.raises(WrongChartError):
            named_coefficients(normal_form_surface("monge", params, 5))


def test_invalid_form_errors():
    with pytest.raises(InvalidFormError):
        normal_form_surface("weingarten", {}, 5)
    with pytest.raises(InvalidFormError):
        normal_form_surface("parabolic", {"k": 0.0}, 5)
    with pytest.raises(InvalidFormError):
        normal_form_surface("pick_elliptic", {"bogus": 1.0}, 5)
    with pytest.raises(InvalidFormError):
        normal_form_surface("buchin", {"q60": 1.0}, 5)  # beyond the jet order
