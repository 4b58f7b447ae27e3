"""End-to-end acceptance suite: one test per contract criterion.

Run with ``pytest -v tests/test_acceptance.py`` to get one pass/fail line
per criterion.  Tolerances are pinned here and nowhere weakened; every
expected number comes from the frozen coefficient tables or from closed
forms evaluated in the test itself.
"""

import math
import random

import pytest

from affina.bde import bde_jets_at, blowup_portrait, curvature_bde, trace_zero_curve
from affina.classify import (
    _b20_from_b01,
    classify,
    classify_elliptic_umbilic,
    gauss_cusp_invariants,
    umbilic_invariants,
    umbilic_linear_coeffs,
)
from affina.geometry import frame_jets, normal_form_surface, point_frame
from affina.render import render_svg

from _figures import GOLDEN_DIR, SCENES
from _tables import (
    jet_linear,
    shape_linear_elliptic,
    shape_linear_hyperbolic,
    xi_linear_elliptic,
    xi_linear_hyperbolic,
)

rng = random.Random(420815)


def _random_monge(order=4, spread=1.2):
    params = {}
    for i in range(order + 1):
        for j in range(order + 1 - i):
            if i + j >= 2:
                params[f"{i},{j}"] = rng.uniform(-spread, spread)
    return normal_form_surface("monge", params, order)


def _random_point(surface, box=0.25, min_d=0.05):
    H = surface.hjet
    for _ in range(300):
        u0, v0 = rng.uniform(-box, box), rng.uniform(-box, box)
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


def _random_umbilic(case):
    kind = "pick_elliptic" if case == "elliptic" else "pick_hyperbolic"
    q = {n: rng.uniform(-1.5, 1.5)
         for n in ("q22", "q23", "q41", "q32", "q14", "q50", "q05")}
    q["sigma"] = rng.uniform(0.4, 1.6)
    q["q31"] = rng.uniform(-1.0, 1.0)
    q["q13"] = -q["q31"] if case == "elliptic" else q["q31"]
    q["q40"] = rng.uniform(-1.0, 1.0)
    q["q04"] = q["q40"]
    return normal_form_surface(kind, q, order=6)


# -- 1 ----------------------------------------------------------------------


def test_c1_conormal_normal_relations():
    """<nu, xi> = 1 and <nu, d xi> = 0 with finite-difference xi derivatives."""
    h = 1e-5
    for _ in range(200):
        surface = _random_monge()
        u0, v0 = _random_point(surface)
        fr = point_frame(surface, (u0, v0))
        ip = sum(a * b for a, b in zip(fr.nu, fr.xi))
        assert abs(ip - 1.0) <= 1e-9
        for du, dv in ((h, 0.0), (0.0, h)):
            plus = point_frame(surface, (u0 + du, v0 + dv)).xi
            minus = point_frame(surface, (u0 - du, v0 - dv)).xi
            fd = [(p - m) / (2.0 * h) for p, m in zip(plus, minus)]
            ipd = sum(a * b for a, b in zip(fr.nu, fd))
            assert abs(ipd) <= 1e-6 * (1.0 + max(abs(x) for x in fd))


# -- 2 ----------------------------------------------------------------------


def test_c2_affine_normal_one_jet_tables():
    """xi 1-jets match the displayed coefficient tables, both Pick forms."""
    for kind, table in (("pick_elliptic", xi_linear_elliptic),
                        ("pick_hyperbolic", xi_linear_hyperbolic)):
        for _ in range(100):
            q, surf = _random_pick(kind)
            xi = frame_jets(surf)["xi"]
            want = table(q["sigma"], q)
            for comp, w in zip(xi[:2], want):
                got = jet_linear(comp)
                assert max(abs(g - e) for g, e in zip(got, w)) <= 1e-9


# -- 3 ----------------------------------------------------------------------


def _shape_one_jets(surf):
    jets = frame_jets(surf)
    s = jets["sign"]
    xi_u, xi_v = jets["xi_u"], jets["xi_v"]
    return {
        "b11": tuple(s * c for c in jet_linear(xi_u[0])),
        "b21": tuple(s * c for c in jet_linear(xi_u[1])),
        "b12": tuple(s * c for c in jet_linear(xi_v[0])),
        "b22": tuple(s * c for c in jet_linear(xi_v[1])),
    }


def test_c3_shape_coefficient_tables():
    """Constant and linear terms of b11, b12, b21, b22 match the tables."""
    for kind, table in (("pick_elliptic", shape_linear_elliptic),
                        ("pick_hyperbolic", shape_linear_hyperbolic)):
        for _ in range(100):
            q, surf = _random_pick(kind)
            got = _shape_one_jets(surf)
            want = table(q["sigma"], q)
            for key in ("b11", "b12", "b21", "b22"):
                assert max(abs(g - e)
                           for g, e in zip(got[key], want[key])) <= 1e-9, key


# -- 4 ----------------------------------------------------------------------


def test_c4_umbilic_one_jet_and_hessian():
    """BDE 1-jet is a positive multiple of the closed forms; Hess identity."""
    for case, csign in (("elliptic", -1.0), ("hyperbolic", 1.0)):
        for _ in range(50):
            surface = _random_umbilic(case)
            a1, b1, a2, b2 = umbilic_linear_coeffs(surface, case=case)
            jA, jB, jC = bde_jets_at(surface)
            m = (jA.coefficient(1, 0), jA.coefficient(0, 1),
                 jB.coefficient(1, 0), jB.coefficient(0, 1),
                 jC.coefficient(1, 0), jC.coefficient(0, 1))
            t = (a1, b1, 2.0 * a2, 2.0 * b2, csign * a1, csign * b1)
            tt = sum(x * x for x in t)
            scale = max(math.sqrt(sum(x * x for x in m)), math.sqrt(tt))
            if scale <= 1e-14:
                continue
            lam = sum(x * y for x, y in zip(m, t)) / tt
            assert lam > 0.0
            resid = math.sqrt(sum((x - lam * y) ** 2 for x, y in zip(m, t)))
            assert resid <= 1e-8 * scale

            delta = jB * jB - 4.0 * (jA * jC)
            det = (4.0 * delta.coefficient(2, 0) * delta.coefficient(0, 2)
                   - delta.coefficient(1, 1) ** 2)
            J = a2 * b1 - a1 * b2
            want = -csign * 64.0 * J * J     # +64 J^2 definite, -64 J^2 indefinite
            assert abs(det - want) <= 1e-8 * max(abs(det), abs(want), 1e-6)


# -- 5 ----------------------------------------------------------------------


def test_c5_classification_battery():
    """The derived model instances return exactly the stated tags."""
    cases = [
        ("pick_elliptic", {"sigma": 1.0, "q50": -16.0}, "D1"),
        ("pick_elliptic", {"sigma": 1.0, "q50": -10.0}, "D2"),
        ("pick_elliptic", {"sigma": 1.0, "q50": 0.0}, "D3"),
        ("pick_hyperbolic", {"sigma": 1.0, "q50": -10.0}, "A1"),
        ("pick_hyperbolic", {"sigma": 1.0, "q50": 0.0}, "A2"),
        ("pick_hyperbolic", {"sigma": 1.0, "q50": -14.0}, "A5"),
        ("buchin", {"q30": 1.0, "q03": 1.0, "q13": 1.0}, "FoldedCusp"),
        ("buchin", {"q30": 1.0, "q13": 1.0, "q51": 0.0}, "FoldedSaddle"),
        ("buchin", {"q30": 1.0, "q13": 1.0, "q51": -10.0}, "FoldedFocus"),
        ("buchin", {"q30": 1.0, "q13": 1.0, "q51": -4.6}, "FoldedNode"),
    ]
    for kind, params, want in cases:
        rep = classify(normal_form_surface(kind, params))
        assert rep.tag == want, (kind, params, rep.tag)

    # definite normal-form round-trip: model coefficients classify to type
    models = [((0.0, -1.0, 1.0, 0.0), "D1"),
              ((0.0, -1.0, 0.25, 0.0), "D2"),
              ((0.0, -1.0, -1.0, 0.0), "D3")]
    for coeffs, want in models:
        inv = umbilic_invariants(*coeffs, "elliptic")
        assert classify_elliptic_umbilic(inv) == want


# -- 6 ----------------------------------------------------------------------


def test_c6_parabolic_arc_is_a_leaf():
    """BDE residual along the traced parabolic curve stays below tolerance."""
    window = ((-0.2, 0.2), (-0.2, 0.2))
    for _ in range(5):
        params = {
            "k": 1.0, "q30": 1.0,
            "q21": rng.uniform(-1.0, 1.0),
            "q12": rng.uniform(-1.0, 1.0),
            "q03": rng.choice((-1.0, 1.0)) * rng.uniform(0.4, 1.0),
            "q40": rng.uniform(-1.0, 1.0),
            "q31": rng.uniform(-1.0, 1.0),
            "q22": rng.uniform(-1.0, 1.0),
            "q13": rng.uniform(-1.0, 1.0),
            "q04": rng.uniform(-1.0, 1.0),
        }
        surface = normal_form_surface("parabolic", params)
        bde = curvature_bde(surface)
        scale = bde.coefficient_scale()

        h = surface.hjet
        gauss = (h.partial("u").partial("u") * h.partial("v").partial("v")
                 - h.partial("u").partial("v") * h.partial("u").partial("v"))
        gu, gv = gauss.partial("u"), gauss.partial("v")
        curves = trace_zero_curve(gauss, window)
        assert curves, "parabolic curve not found"
        checked = 0
        for curve in curves:
            for x, y in curve.points:
                # tangent to the parabolic curve = rotated gradient
                du, dv = gv.evaluate(x, y), -gu.evaluate(x, y)
                norm = math.hypot(du, dv)
                if norm < 1e-12:
                    continue
                du, dv = du / norm, dv / norm
                A, B, C = bde.coefficients_at((x, y))
                resid = A * du * du + B * du * dv + C * dv * dv
                assert abs(resid) <= 1e-7 * scale, (x, y, resid)
                checked += 1
        assert checked > 50


# -- 7 ----------------------------------------------------------------------


def test_c7_gauss_cusp_principal_part():
    """Pipeline discriminant matches P11/P12/P22 and the Hessian number."""
    clutter = ("q12", "q03", "q31", "q22", "q13", "q04",
               "q50", "q41", "q32", "q23", "q14", "q05")
    draws = []
    for _ in range(25):
        k = rng.choice((-1.0, 1.0)) * rng.uniform(0.5, 1.5)
        q21 = rng.choice((-1.0, 1.0)) * rng.uniform(0.3, 1.2)
        draws.append((k, q21, rng.uniform(-2.0, 2.0)))
    # guarantee isolated-point draws: b01 targets strictly inside (-1/2, -2/7)
    for b01 in (-0.48, -0.44, -0.39, -0.33, -0.30):
        draws.append((1.0, 1.0, (9.0 + 42.0 * b01) / (14.0 * b01 + 4.0)))

    seen_isolated = 0
    for k, q21, q40 in draws:
        cusp = 3.0 * q21 ** 2 - k * q40
        if abs(cusp) < 1e-6:
            continue
        params = {n: rng.uniform(-1.0, 1.0) for n in clutter}
        params.update(k=k, q21=q21, q40=q40)
        surface = normal_form_surface("parabolic", params)
        inv = gauss_cusp_invariants(k, q21, q40, surface=surface)

        disc = curvature_bde(surface).discriminant()
        p11n = disc.coefficient(4, 0)
        p12n = disc.coefficient(2, 1)
        p22n = disc.coefficient(0, 2)
        ref = max(abs(inv.P11), abs(inv.P12), abs(inv.P22))
        for got, want in ((p11n, inv.P11), (p12n, inv.P12), (p22n, inv.P22)):
            assert abs(got - want) <= 1e-6 * ref

        hess_pipeline = 256.0 * (4.0 * p11n * p22n - p12n ** 2)
        hess_display = (2 ** 14 * 7 ** 3 * k ** 6 * q21 ** 4
                        * (k * q40 - 4.0 * q21 ** 2)
                        * (k * q40 - 3.0 * q21 ** 2) ** 4)
        assert abs(hess_pipeline - hess_display) <= 1e-6 * max(
            abs(hess_pipeline), abs(hess_display))

        if inv.s > 0.0:
            seen_isolated += 1
            assert -0.5 < inv.b01 < -2.0 / 7.0
    assert seen_isolated >= 5


# -- 8 ----------------------------------------------------------------------


def _sign_product_first_branch(b):
    return math.copysign(1.0, (4.0 * b - 1.0) * (2.0 * b + 1.0) * (7.0 * b + 2.0))


def _sign_product_second_branch(b):
    return -math.copysign(1.0, (4.0 * b - 1.0) * (4.0 * b * b + 10.0 * b + 1.0)
                          * (7.0 * b + 2.0) * (b + 1.0) * (2.0 * b + 1.0))


def test_c8_blowup_portraits():
    """Six hyperbolic angles per stratum; types match the eigenvalue signs."""
    for b01 in (-3.0, -1.5, -0.75, -0.2143, -0.05, 0.5):
        points = blowup_portrait(b01, _b20_from_b01(b01, False),
                                 positive_branch=False)
        assert len(points) == 6, b01
        for p in points:
            a_t, minus2b = p.eigenvalues
            assert abs(a_t) > 1e-8 and abs(minus2b) / 2.0 > 1e-8
            want = "node" if a_t * minus2b > 0.0 else "saddle"
            assert p.kind == want
        # saddle/node split of the branch pairs matches the closed-form signs
        got = sorted(math.copysign(1.0, p.eigenvalues[0] * p.eigenvalues[1])
                     for p in points if abs(math.cos(p.t)) > 1e-6)
        want = sorted([_sign_product_first_branch(b01)] * 2
                      + [_sign_product_second_branch(b01)] * 2)
        assert got == want, b01

    b01 = -11.0 / 28.0
    points = blowup_portrait(b01, _b20_from_b01(b01, True), positive_branch=True)
    assert len(points) == 6
    kinds = sorted(p.kind for p in points)
    assert kinds == ["node", "node", "saddle", "saddle", "saddle", "saddle"]
    for p in points:
        assert abs(p.eigenvalues[0]) > 1e-8 and abs(p.eigenvalues[1]) / 2.0 > 1e-8
        if p.kind == "node":
            assert min(abs(p.t - math.pi / 2.0),
                       abs(p.t - 3.0 * math.pi / 2.0)) < 1e-6


# -- 9 ----------------------------------------------------------------------


def test_c9_figure_regression():
    """Re-rendered portraits are byte-identical to the stored goldens."""
    for name in sorted(SCENES):
        doc = render_svg(SCENES[name]()).encode("utf-8")
        golden = (GOLDEN_DIR / f"{name}.svg").read_bytes()
        assert doc == golden, name
