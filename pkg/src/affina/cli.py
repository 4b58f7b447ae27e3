"""Command-line front end.

Surface spec files are TOML: a single ``[surface]`` table carrying ``kind``
and ``order``, plus ``[surface.params]`` with named normal-form coefficients
— or, for ``kind = "monge"``, ``[surface.coefficients]`` with ``"i,j"``
height-jet entries.  All coefficients use the factorial convention: the entry
``"i,j" = c`` contributes ``c * u^i v^j / (i! j!)`` to the height function,
and the named ``q`` parameters are the corresponding ``q_ij``.  Getting this
wrong by a factorial is the likeliest input mistake; every chart helper in
:mod:`affina.geometry` uses the same convention.

Exit codes: 0 success, 1 invalid input, 2 degenerate/unclassifiable,
3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import random
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from .bde import blowup_portrait, curvature_bde, foliation
from .classify import (
    SingularityReport,
    _b20_from_b01,
    classify,
    classify_elliptic_umbilic,
    classify_folded,
    classify_hyperbolic_umbilic,
    classify_parabolic,
    umbilic_invariants,
    umbilic_linear_coeffs,
)
from .bde import bde_jets_at
from .errors import (
    AffinaError,
    DegeneratePortraitError,
    DegenerateUmbilicError,
    InvalidFormError,
    InvalidSceneError,
    NotDiscriminantPointError,
    NumericalInconsistencyError,
    ParabolicPointError,
    SpecFileError,
    WrongChartError,
)
from .geometry import normal_form_surface, point_frame
from .render import configuration_scene, render_svg

_KINDS = ("monge", "pick_elliptic", "pick_hyperbolic", "buchin", "parabolic")


# ---------------------------------------------------------------------------
# Spec files
# ---------------------------------------------------------------------------


def _real(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecFileError(f"{where}: expected a number, got {value!r}")
    return float(value)


def load_surface_spec(path):
    """Parse and validate a surface spec file into a jet."""
    try:
        with open(path, "rb") as fh:
            tree = tomllib.load(fh)
    except FileNotFoundError:
        raise SpecFileError(f"no such spec file: {path}") from None
    except (tomllib.TOMLDecodeError, OSError) as exc:
        raise SpecFileError(f"{path}: {exc}") from exc

    if set(tree) != {"surface"}:
        extra = sorted(set(tree) - {"surface"})
        raise SpecFileError(
            f"{path}: expected exactly one [surface] table"
            + (f", found unknown keys {extra}" if extra else "")
        )
    surf = tree["surface"]
    if not isinstance(surf, dict):
        raise SpecFileError(f"{path}: [surface] must be a table")
    unknown = sorted(set(surf) - {"kind", "order", "params", "coefficients"})
    if unknown:
        raise SpecFileError(f"{path}: unknown keys in [surface]: {unknown}")

    kind = surf.get("kind")
    if kind not in _KINDS:
        raise SpecFileError(f"{path}: kind must be one of {_KINDS}, got {kind!r}")
    order = surf.get("order", 6)
    if isinstance(order, bool) or not isinstance(order, int):
        raise SpecFileError(f"{path}: order must be an integer")

    if kind == "monge":
        if "params" in surf:
            raise SpecFileError(
                f"{path}: monge surfaces use [surface.coefficients], not [surface.params]")
        table = surf.get("coefficients", {})
        if not isinstance(table, dict):
            raise SpecFileError(f"{path}: [surface.coefficients] must be a table")
        params = {}
        for key, value in table.items():
            parts = key.split(",")
            try:
                i, j = (int(p.strip()) for p in parts)
                if len(parts) != 2 or i < 0 or j < 0:
                    raise ValueError
            except ValueError:
                raise SpecFileError(
                    f'{path}: coefficient keys are "i,j" pairs, got {key!r}') from None
            if i + j > order:
                raise SpecFileError(
                    f"{path}: coefficient {key!r} exceeds the jet order {order}")
            params[f"{i},{j}"] = _real(value, f"{path}: coefficient {key!r}")
    else:
        if "coefficients" in surf:
            raise SpecFileError(
                f"{path}: kind {kind!r} uses [surface.params], not [surface.coefficients]")
        table = surf.get("params", {})
        if not isinstance(table, dict):
            raise SpecFileError(f"{path}: [surface.params] must be a table")
        params = {key: _real(value, f"{path}: param {key!r}") for key, value in table.items()}

    try:
        return normal_form_surface(kind, params, order=order)
    except (InvalidFormError, WrongChartError) as exc:
        raise SpecFileError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------


def _pair_arg(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected u,v — got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two numbers, got {text!r}") from None


def _window_arg(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected umin,umax,vmin,vmax — got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected four numbers, got {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affina",
        description="Affine curvature-line fields of Monge-chart surface jets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="affine frame data at a point")
    p.add_argument("file")
    p.add_argument("--at", type=_pair_arg, default=(0.0, 0.0), metavar="u,v")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("classify", help="singular-point report at the base point")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("trace", help="curvature-line polylines as JSON")
    p.add_argument("file")
    p.add_argument("--window", type=_window_arg, required=True, metavar="a,b,c,d")
    p.add_argument("--seeds", type=int, default=7)
    p.add_argument("--foliation", choices=("1", "2", "both"), default="both")
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("render", help="SVG portrait of the configuration")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--window", type=_window_arg, required=True, metavar="a,b,c,d")
    p.add_argument("--seeds", type=int, default=7)
    p.add_argument("--show", default="discriminant",
                   help="comma list from: parabolic,discriminant,separatrices")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("blowup", help="exceptional-circle portrait of a gauss cusp")
    p.add_argument("--b01", type=float, required=True)
    p.add_argument("--b20", type=float, default=None)
    p.add_argument("--type", choices=("a3plus", "a3minus"), required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_blowup)

    p = sub.add_parser("verify", help="run the built-in cross-check suite")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_verify)

    return parser


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_analyze(args) -> int:
    surface = load_surface_spec(args.file)
    fr = point_frame(surface, args.at)
    if args.json:
        print(json.dumps(dataclasses.asdict(fr), sort_keys=True))
        return 0
    vec = lambda t: "(" + ", ".join(f"{x: .9g}" for x in t) + ")"
    print(f"point      {vec(fr.point)}")
    print(f"hessian    L={fr.L:.9g} M={fr.M:.9g} N={fr.N:.9g} D={fr.D:.9g} sign={fr.sign:+.0f}")
    print(f"metric     g11={fr.g11:.9g} g12={fr.g12:.9g} g22={fr.g22:.9g}")
    print(f"conormal   {vec(fr.nu)}")
    print(f"normal     {vec(fr.xi)}")
    print(f"normal_u   {vec(fr.xi_u)}")
    print(f"normal_v   {vec(fr.xi_v)}")
    print(f"II_affine  l={fr.l:.9g} m={fr.m:.9g} n={fr.n:.9g}")
    print(f"shape      b11={fr.b11:.9g} b12={fr.b12:.9g} b21={fr.b21:.9g} b22={fr.b22:.9g}")
    print(f"K_e        {fr.Ke:.9g}")
    return 0


def _cmd_classify(args) -> int:
    surface = load_surface_spec(args.file)
    rep = classify(surface)
    if args.json:
        print(rep.to_json())
    else:
        print(rep.tag)
        for key in sorted(rep.invariants):
            print(f"  {key} = {rep.invariants[key]:.9g}")
        for key in sorted(rep.genericity):
            print(f"  [{'ok' if rep.genericity[key] else 'FAIL'}] {key}")
    return 2 if rep.tag.startswith("Degenerate") else 0


def _cmd_trace(args) -> int:
    surface = load_surface_spec(args.file)
    bde = curvature_bde(surface)
    a, b, c, d = args.window
    families = {"1": (0,), "2": (1,), "both": (0, 1)}[args.foliation]
    polylines = [
        {
            "family": pl.family,
            "termination": pl.termination,
            "points": [[float(x), float(y)] for x, y in pl.points],
        }
        for pl in foliation(bde, ((a, b), (c, d)), grid=args.seeds)
        if pl.family in families
    ]
    print(json.dumps({"window": [a, b, c, d], "polylines": polylines}, sort_keys=True))
    return 0


def _cmd_render(args) -> int:
    surface = load_surface_spec(args.file)
    bde = curvature_bde(surface)
    show = tuple(s for s in args.show.split(",") if s)
    markers = []
    try:
        rep = classify(surface)
        markers.append(((0.0, 0.0), rep.tag))
    except AffinaError:
        pass
    scene = configuration_scene(
        bde, args.window, seeds=args.seeds, show=show, surface=surface,
        markers=markers,
    )
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(render_svg(scene))
    print(f"wrote {args.output}")
    return 0


def _cmd_blowup(args) -> int:
    positive = args.type == "a3plus"
    b20 = args.b20
    if b20 is None:
        try:
            b20 = _b20_from_b01(args.b01, positive)
        except ValueError:
            raise SpecFileError(
                f"b01 = {args.b01:.6g} is outside the {args.type} range; pass --b20"
            ) from None
    points = blowup_portrait(args.b01, b20, positive_branch=positive)
    degenerate = any(p.kind == "nonhyperbolic" for p in points)
    if args.json:
        print(json.dumps({
            "b01": args.b01,
            "b20": b20,
            "type": args.type,
            "points": [
                {"t": p.t, "eigenvalues": list(p.eigenvalues), "kind": p.kind}
                for p in points
            ],
        }, sort_keys=True))
    else:
        print(f"b01 = {args.b01:.9g}  b20 = {b20:.9g}  branch = {args.type}")
        for p in points:
            e1, e2 = p.eigenvalues
            print(f"  t = {p.t:.9g}  eigenvalues = ({e1:.9g}, {e2:.9g})  {p.kind}")
        kinds = [p.kind for p in points]
        print(f"{len(points)} singular angles: "
              f"{kinds.count('node')} nodes, {kinds.count('saddle')} saddles")
    return 2 if degenerate else 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _random_nonparabolic_monge(rng):
    while True:
        coeffs = {
            "2,0": rng.uniform(-1.5, 1.5),
            "1,1": rng.uniform(-1.5, 1.5),
            "0,2": rng.uniform(-1.5, 1.5),
            "3,0": rng.uniform(-1.0, 1.0),
            "2,1": rng.uniform(-1.0, 1.0),
            "1,2": rng.uniform(-1.0, 1.0),
            "0,3": rng.uniform(-1.0, 1.0),
            "4,0": rng.uniform(-1.0, 1.0),
            "0,4": rng.uniform(-1.0, 1.0),
        }
        if abs(coeffs["2,0"] * coeffs["0,2"] - coeffs["1,1"] ** 2) > 0.05:
            return normal_form_surface("monge", coeffs, order=4)


def _check_frame_relations(rng, trials):
    for _ in range(max(4, trials // 10)):
        surface = _random_nonparabolic_monge(rng)
        fr = point_frame(surface)
        nu, xi = np.array(fr.nu), np.array(fr.xi)
        if abs(nu @ xi - 1.0) > 1e-9:
            raise AssertionError(f"<nu, xi> = {nu @ xi!r}")
        for dxi in (fr.xi_u, fr.xi_v):
            if abs(nu @ np.array(dxi)) > 1e-9:
                raise AssertionError(f"<nu, dxi> = {nu @ np.array(dxi)!r}")


def _random_umbilic_params(rng, case: str) -> dict:
    params = {name: rng.uniform(-1.5, 1.5)
              for name in ("q22", "q23", "q41", "q32", "q14", "q50", "q05")}
    params["sigma"] = rng.uniform(0.4, 1.6)
    params["q31"] = rng.uniform(-1.0, 1.0)
    params["q13"] = -params["q31"] if case == "elliptic" else params["q31"]
    params["q40"] = rng.uniform(-1.0, 1.0)
    params["q04"] = params["q40"]
    return params


def _check_umbilic_jet(rng, trials):
    # the proportionality and Hessian cross-checks run inside the call
    for case, kind in (("elliptic", "pick_elliptic"),
                       ("hyperbolic", "pick_hyperbolic")):
        for _ in range(max(2, trials // 2)):
            umbilic_linear_coeffs(normal_form_surface(kind, _random_umbilic_params(rng, case)))


def _check_umbilic_tags(rng, trials, reports):
    for case, kind in (("elliptic", "pick_elliptic"),
                       ("hyperbolic", "pick_hyperbolic")):
        for _ in range(max(2, trials // 2)):
            surface = normal_form_surface(kind, _random_umbilic_params(rng, case))
            rep = classify(surface)
            reports.append(rep)
            if rep.tag.startswith("Degenerate"):
                continue
            jA, jB, jC = bde_jets_at(surface)
            inv = umbilic_invariants(
                float(jA.coeffs[1, 0]), float(jA.coeffs[0, 1]),
                float(jB.coeffs[1, 0]) / 2.0, float(jB.coeffs[0, 1]) / 2.0, case)
            tag = (classify_elliptic_umbilic(inv) if case == "elliptic"
                   else classify_hyperbolic_umbilic(inv))
            if tag != rep.tag:
                raise AssertionError(
                    f"{kind} draw: closed-form {tag} vs pipeline {rep.tag}")


def _check_folded(rng, trials, reports):
    names = ("q30", "q03", "q22", "q40", "q04", "q32", "q23",
             "q50", "q41", "q14", "q05", "q51")
    for k in range(max(4, trials // 2)):
        params = {n: rng.uniform(-1.2, 1.2) for n in names}
        params["q13"] = rng.choice((-1.0, 1.0)) * rng.uniform(0.4, 1.5)
        if k % 2:
            # land on the double-eigenvalue branch: cancel the transversality
            params["q41"] = (7.0 * params["q22"] * params["q30"]
                             - 2.0 * params["q03"] * params["q30"] ** 2) / 2.0
        surface = normal_form_surface("buchin", params)
        rep = classify_folded(surface)  # eigenvalue cross-check runs inside
        reports.append(rep)
        inv = rep.invariants
        if "delta_lambda" in inv:
            lhs = inv["lambda_product"]
            rhs = 64.0 * (inv["T0"] ** 2 - inv["delta_lambda"])
            if abs(lhs - rhs) > 1e-8 * max(1.0, abs(lhs), abs(rhs)):
                raise AssertionError(f"product identity: {lhs} vs {rhs}")


def _check_gauss_cusp(rng, trials, reports):
    clutter = ("q12", "q03", "q31", "q22", "q13", "q04",
               "q50", "q41", "q32", "q23", "q14", "q05")
    seen_a3plus = 0
    for _ in range(max(4, trials // 4)):
        params = {n: rng.uniform(-1.0, 1.0) for n in clutter}
        params["k"] = rng.choice((-1.0, 1.0)) * rng.uniform(0.5, 1.5)
        params["q21"] = rng.choice((-1.0, 1.0)) * rng.uniform(0.3, 1.2)
        params["q40"] = rng.uniform(-2.0, 2.0)
        rep = classify_parabolic(normal_form_surface("parabolic", params))
        reports.append(rep)
        if rep.tag == "GaussCuspA3Plus":
            seen_a3plus += 1
            if not (-0.5 < rep.invariants["b01"] < -2.0 / 7.0):
                raise AssertionError(f"A3+ with b01 = {rep.invariants['b01']}")
        if rep.record is not None and not rep.tag.startswith("Degenerate"):
            g = rep.record
            if hasattr(g, "hessP"):
                rhs = 256.0 * (4.0 * g.P11 * g.P22 - g.P12 ** 2)
                if abs(g.hessP - rhs) > 1e-8 * max(1.0, abs(g.hessP)):
                    raise AssertionError(f"hessP identity: {g.hessP} vs {rhs}")


def _check_roundtrip(reports):
    for rep in reports:
        back = SingularityReport.from_json(rep.to_json())
        if back != rep:
            raise AssertionError(f"round-trip drift for {rep.tag}")


def _check_blowup():
    for b01 in (-3.0, -1.5, -0.75, -0.2143, -0.05, 0.5):
        points = blowup_portrait(b01, _b20_from_b01(b01, False), positive_branch=False)
        if len(points) != 6:
            raise AssertionError(f"b01={b01}: {len(points)} singular angles")
        if any(p.kind == "nonhyperbolic" for p in points):
            raise AssertionError(f"b01={b01}: non-hyperbolic angle")
    points = blowup_portrait(-11.0 / 28.0, _b20_from_b01(-11.0 / 28.0, True),
                             positive_branch=True)
    kinds = sorted(p.kind for p in points)
    if kinds != ["node", "node", "saddle", "saddle", "saddle", "saddle"]:
        raise AssertionError(f"A3+ portrait: {kinds}")
    nodes = [p.t for p in points if p.kind == "node"]
    if not all(min(abs(t - math.pi / 2.0), abs(t - 3.0 * math.pi / 2.0)) < 1e-6
               for t in nodes):
        raise AssertionError(f"A3+ nodes at {nodes}")


def _check_svg_determinism():
    from .bde import model_bde

    bde = model_bde({(0, 1): -1.0}, {(1, 0): -2.0}, {(0, 0): 1.0}, order=3)
    scene = configuration_scene(bde, (-1.0, 1.0, -1.0, 1.0), seeds=3,
                                show=("discriminant",), max_steps=120)
    if render_svg(scene) != render_svg(scene):
        raise AssertionError("re-render differs")


def _cmd_verify(args) -> int:
    if args.seed is not None:
        seed = args.seed
    else:
        env = os.environ.get("AFFINA_SEED")
        try:
            seed = int(env) if env is not None else 42
        except ValueError:
            raise SpecFileError(f"AFFINA_SEED must be an integer, got {env!r}") from None
    trials = max(1, args.trials)
    print(f"seed = {seed}, trials = {trials}")

    reports = []
    rng = random.Random(seed)
    checks = [
        ("conormal/normal relations", lambda: _check_frame_relations(rng, trials)),
        ("umbilic one-jet cross-check", lambda: _check_umbilic_jet(rng, trials)),
        ("umbilic tag agreement", lambda: _check_umbilic_tags(rng, trials, reports)),
        ("folded eigenvalue consistency", lambda: _check_folded(rng, trials, reports)),
        ("gauss-cusp principal part", lambda: _check_gauss_cusp(rng, trials, reports)),
        ("report JSON round-trip", lambda: _check_roundtrip(reports)),
        ("blow-up portraits", _check_blowup),
        ("SVG determinism", _check_svg_determinism),
    ]
    failures = 0
    for name, fn in checks:
        try:
            fn()
        except Exception as exc:  # a verification failure, not a crash
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"PASS {name}")
    print(f"{len(checks) - failures}/{len(checks)} checks passed")
    return 0 if failures == 0 else 3


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def run(argv=None) -> int:
    """Dispatch one CLI invocation and return its exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (SpecFileError, InvalidFormError, WrongChartError, InvalidSceneError) as exc:
        print(f"affina: {exc}", file=sys.stderr)
        return 1
    except (DegenerateUmbilicError, NotDiscriminantPointError,
            ParabolicPointError, DegeneratePortraitError) as exc:
        print(f"affina: degenerate: {exc}", file=sys.stderr)
        return 2
    except NumericalInconsistencyError as exc:
        print(f"affina: numerical inconsistency: {exc}", file=sys.stderr)
        return 3
    except AffinaError as exc:
        print(f"affina: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - last-resort contract
        print(f"affina: internal error: {exc}", file=sys.stderr)
        return 3


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
