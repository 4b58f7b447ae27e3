"""Scene builders for the figure-regression goldens.

Each builder assembles one portrait deterministically; running this module
directly rewrites ``tests/golden/*.svg``.  The figures double as the manual
visual check of the traced configurations (cusp family along a fold, the
three folded singularities, an ordinary parabolic arc, and an A3-minus
gauss-cusp discriminant pair).
"""

from __future__ import annotations

import pathlib

from affina.bde import curvature_bde, model_bde
from affina.geometry import normal_form_surface
from affina.render import configuration_scene, render_svg

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"
_WIN = (-1.0, 1.0, -1.0, 1.0)


def cusp_scene():
    # u du^2 + dv^2 = 0: integral curves are 3/2-power cusps along u = 0
    bde = model_bde({(1, 0): 1.0}, {}, {(0, 0): 1.0}, order=3)
    return configuration_scene(
        bde, _WIN, seeds=5, show=("discriminant", "separatrices"),
        markers=(((0.0, 0.0), "FoldedCusp"),))


def _folded_scene(a20, tag):
    terms = {(0, 1): -1.0}
    if a20:
        terms[(2, 0)] = a20
    bde = model_bde(terms, {(1, 0): -2.0}, {(0, 0): 1.0}, order=3)
    return configuration_scene(
        bde, _WIN, seeds=5, show=("discriminant", "separatrices"),
        markers=(((0.0, 0.0), tag),))


def folded_saddle_scene():
    return _folded_scene(0.0, "FoldedSaddle")        # lifted eigenvalues -2, 3


def folded_focus_scene():
    return _folded_scene(2.0, "FoldedFocus")         # 1/2 +- i sqrt(7)/2


def folded_node_scene():
    return _folded_scene(14.0 / 9.0, "FoldedNode")   # 1/3, 2/3


def ordinary_parabolic_scene():
    surf = normal_form_surface("parabolic", {"k": 1.0, "q30": 1.0}, order=4)
    return configuration_scene(
        curvature_bde(surf), (-0.35, 0.35, -0.35, 0.35),
        seeds=4, show=("parabolic",), surface=surf, max_steps=200,
        markers=(((0.0, 0.0), "OrdinaryParabolic"),))


def gauss_cusp_r3_scene():
    # model with principal part of the R3 stratum: two tangent
    # discriminant branches v = -0.04 u^2 and v = (197/75) u^2
    bde = model_bde({(3, 0): 1.0}, {(0, 1): -1.5, (2, 0): 1.94},
                    {(1, 0): 1.0}, order=3)
    return configuration_scene(
        bde, _WIN, seeds=5, show=("discriminant",),
        markers=(((0.0, 0.0), "GaussCuspR3"),))


SCENES = {
    "cusp": cusp_scene,
    "folded_saddle": folded_saddle_scene,
    "folded_focus": folded_focus_scene,
    "folded_node": folded_node_scene,
    "ordinary_parabolic": ordinary_parabolic_scene,
    "gauss_cusp_r3": gauss_cusp_r3_scene,
}


def write_goldens() -> None:
    GOLDEN_DIR.mkdir(exist_ok=True)
    for name, build in SCENES.items():
        path = GOLDEN_DIR / f"{name}.svg"
        path.write_bytes(render_svg(build()).encode("utf-8"))
        print(f"wrote {path}")


if __name__ == "__main__":
    write_goldens()
