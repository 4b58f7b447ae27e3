"""Deterministic SVG figures for traced principal configurations.

A :class:`Scene` is a plain container: a rectangular window in surface
coordinates, an ordered list of styled polyline layers, and labelled point
markers.  :func:`render_svg` turns it into an SVG 1.1 document with every
coordinate formatted to six significant digits, so identical scenes produce
byte-identical files — the figure tests diff goldens directly.

:func:`configuration_scene` assembles the standard portrait of a binary
differential equation: both foliations over a seed grid, optionally the
discriminant curve (dashed), the parabolic curve of a Monge surface
(dash-dot), and bold separatrix branches through a double-direction base
point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bde import (
    CurvatureBDE,
    foliation,
    integrate_curvature_line,
    solve_directions,
    trace_zero_curve,
)
from .errors import InvalidSceneError, SingularZeroSetError

__all__ = ["Layer", "Marker", "Scene", "configuration_scene", "render_svg"]


# style name -> (stroke color, relative width, dash pattern in base-width units)
_STYLES = {
    "foliation1": ("#2a6f97", 1.0, None),
    "foliation2": ("#c05b3a", 1.0, None),
    "parabolic": ("#1f8a3d", 1.3, (5.0, 2.5, 0.9, 2.5)),
    "discriminant": ("#5b5b5b", 1.0, (4.0, 3.0)),
    "separatrix": ("#101010", 2.4, None),
}


@dataclass
class Layer:
    """One styled curve: an (N, 2) point array and a style name."""

    points: np.ndarray
    style: str


@dataclass
class Marker:
    """A labelled point, drawn as a dot plus its tag text."""

    point: tuple
    tag: str


@dataclass
class Scene:
    """Window, ordered layers, and markers — everything a figure needs."""

    window: tuple  # (umin, umax, vmin, vmax)
    layers: list = field(default_factory=list)
    markers: list = field(default_factory=list)

    def add(self, points, style: str) -> None:
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise InvalidSceneError("layer points must be an (N, 2) array")
        self.layers.append(Layer(points=pts, style=style))

    def mark(self, point, tag: str) -> None:
        self.markers.append(Marker(point=(float(point[0]), float(point[1])), tag=str(tag)))


def _fmt(x: float) -> str:
    """Six significant digits; '-0' normalized so output is canonical."""
    s = "%.6g" % float(x)
    return "0" if s in ("-0", "-0.0") else s


def _check_window(window):
    try:
        u0, u1, v0, v1 = (float(w) for w in window)
    except (TypeError, ValueError) as exc:
        raise InvalidSceneError(f"window must be four numbers: {window!r}") from exc
    if not all(math.isfinite(w) for w in (u0, u1, v0, v1)):
        raise InvalidSceneError("window bounds must be finite")
    if not (u0 < u1 and v0 < v1):
        raise InvalidSceneError(f"window is empty: {window!r}")
    return u0, u1, v0, v1


def _clip_segment(p, q, win):
    """Liang-Barsky: the part of segment p-q inside the window, or None."""
    u0, u1, v0, v1 = win
    x, y = p
    dx, dy = q[0] - p[0], q[1] - p[1]
    t0, t1 = 0.0, 1.0
    for den, num in (
        (-dx, x - u0), (dx, u1 - x),
        (-dy, y - v0), (dy, v1 - y),
    ):
        if den == 0.0:
            if num < 0.0:
                return None
            continue
        t = num / den
        if den < 0.0:
            if t > t0:
                t0 = t
        else:
            if t < t1:
                t1 = t
        if t0 > t1:
            return None
    a = (x + t0 * dx, y + t0 * dy) if t0 > 0.0 else (p[0], p[1])
    b = (x + t1 * dx, y + t1 * dy) if t1 < 1.0 else (q[0], q[1])
    return a, b


def _subpaths(points, win):
    """Split a polyline into maximal runs inside the window."""
    runs = []
    current = []
    for i in range(len(points) - 1):
        p = (float(points[i][0]), float(points[i][1]))
        q = (float(points[i + 1][0]), float(points[i + 1][1]))
        clipped = _clip_segment(p, q, win)
        if clipped is None:
            if len(current) > 1:
                runs.append(current)
            current = []
            continue
        a, b = clipped
        if a == b:
            continue
        if current and current[-1] == a:
            current.append(b)
        else:
            if len(current) > 1:
                runs.append(current)
            current = [a, b]
    if len(current) > 1:
        runs.append(current)
    return runs


def _path_data(runs):
    chunks = []
    for run in runs:
        coords = [f"M {_fmt(run[0][0])} {_fmt(-run[0][1])}"]
        coords += [f"L {_fmt(x)} {_fmt(-y)}" for x, y in run[1:]]
        chunks.append(" ".join(coords))
    return " ".join(chunks)


def render_svg(scene: Scene) -> str:
    """Emit the scene as a standalone SVG 1.1 document (UTF-8 text).

    The viewBox is the window itself with the v-axis flipped for screen
    orientation; geometry is clipped to the window before emission.  The
    output depends only on the scene's contents: no timestamps, no ids.
    """
    u0, u1, v0, v1 = _check_window(scene.window)
    du, dv = u1 - u0, v1 - v0
    base = 0.0045 * max(du, dv)

    out = []
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="480" height="{_fmt(480.0 * dv / du)}" '
        f'viewBox="{_fmt(u0)} {_fmt(-v1)} {_fmt(du)} {_fmt(dv)}">'
    )
    out.append("<desc>affine principal configuration</desc>")

    # frame and axes
    out.append(
        f'<rect x="{_fmt(u0)}" y="{_fmt(-v1)}" width="{_fmt(du)}" height="{_fmt(dv)}" '
        f'fill="#ffffff" stroke="#9a9a9a" stroke-width="{_fmt(0.6 * base)}"/>'
    )
    if u0 < 0.0 < u1:
        out.append(
            f'<line x1="0" y1="{_fmt(-v1)}" x2="0" y2="{_fmt(-v0)}" '
            f'stroke="#d6d6d6" stroke-width="{_fmt(0.5 * base)}"/>'
        )
    if v0 < 0.0 < v1:
        out.append(
            f'<line x1="{_fmt(u0)}" y1="0" x2="{_fmt(u1)}" y2="0" '
            f'stroke="#d6d6d6" stroke-width="{_fmt(0.5 * base)}"/>'
        )

    win = (u0, u1, v0, v1)
    for layer in scene.layers:
        if layer.style not in _STYLES:
            raise InvalidSceneError(f"unknown layer style {layer.style!r}")
        color, rel, dash = _STYLES[layer.style]
        runs = _subpaths(np.asarray(layer.points, dtype=float), win)
        if not runs:
            continue
        attrs = (
            f'fill="none" stroke="{color}" stroke-width="{_fmt(rel * base)}" '
            'stroke-linecap="round" stroke-linejoin="round"'
        )
        if dash is not None:
            pattern = ",".join(_fmt(d * base) for d in dash)
            attrs += f' stroke-dasharray="{pattern}"'
        out.append(f'<path {attrs} d="{_path_data(runs)}"/>')

    for marker in scene.markers:
        x, y = float(marker.point[0]), float(marker.point[1])
        if not (u0 <= x <= u1 and v0 <= y <= v1):
            continue
        out.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(-y)}" r="{_fmt(1.6 * base)}" fill="#1a1a1a"/>'
        )
        label = marker.tag.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        out.append(
            f'<text x="{_fmt(x + 2.6 * base)}" y="{_fmt(-y - 2.6 * base)}" '
            f'font-family="Helvetica,Arial,sans-serif" font-size="{_fmt(8.0 * base)}" '
            f'fill="#1a1a1a">{label}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _zero_curves(jet, window_pair, step, max_steps=2500):
    """Zero-set polylines, retrying on a degenerate seed with an offset grid."""
    for grid in (48, 53):
        try:
            return trace_zero_curve(jet, window_pair, grid=grid, step=step,
                                    max_steps=max_steps)
        except SingularZeroSetError:
            continue
    return []


def _thin(points, cap: int = 500):
    """Keep at most ``cap`` points (plus the last), preserving endpoints."""
    n = len(points)
    if n <= cap:
        return points
    stride = -(-n // cap)
    kept = points[::stride]
    if (n - 1) % stride:
        kept = np.vstack([kept, points[-1]])
    return kept


def configuration_scene(
    bde: CurvatureBDE,
    window,
    *,
    seeds: int = 7,
    show=("discriminant",),
    surface=None,
    markers=(),
    step: float = None,
    max_steps: int = 400,
) -> Scene:
    """Assemble the standard portrait of a curvature-line equation.

    ``show`` may contain ``"discriminant"``, ``"parabolic"`` (needs
    ``surface``), and ``"separatrices"``.  Foliation curves are seeded on a
    ``seeds`` x ``seeds`` grid; separatrices are the two branches leaving the
    base point along its double direction, when there is one.
    """
    u0, u1, v0, v1 = _check_window(window)
    pair = ((u0, u1), (v0, v1))
    span = max(u1 - u0, v1 - v0)
    if step is None:
        step = span / 240.0
    show = tuple(show)
    for name in show:
        if name not in ("discriminant", "parabolic", "separatrices"):
            raise InvalidSceneError(f"unknown overlay {name!r}")
    if "parabolic" in show and surface is None:
        raise InvalidSceneError("the parabolic overlay needs the surface jet")

    scene = Scene(window=(u0, u1, v0, v1))
    for pl in foliation(bde, pair, grid=seeds, step=step, max_steps=max_steps):
        scene.add(_thin(pl.points), "foliation1" if pl.family == 0 else "foliation2")

    if "discriminant" in show:
        for pl in _zero_curves(bde.discriminant(), pair, span / 300.0):
            scene.add(_thin(pl.points), "discriminant")

    if "parabolic" in show:
        h = surface.hjet
        huu = h.partial("u").partial("u")
        huv = h.partial("u").partial("v")
        hvv = h.partial("v").partial("v")
        gauss = huu * hvv - huv * huv
        for pl in _zero_curves(gauss, pair, span / 300.0):
            scene.add(_thin(pl.points), "parabolic")

    if "separatrices" in show:
        ds = solve_directions(bde, (0.0, 0.0))
        if ds.kind == "double":
            d = ds.directions[0]
            theta = math.atan2(d[1], d[0])
            found = 0
            for sense in (0.0, math.pi):
                pl = integrate_curvature_line(
                    bde, (0.0, 0.0), theta + sense, pair,
                    step=step, max_steps=max_steps,
                )
                if len(pl) > 2:
                    scene.add(_thin(pl.points), "separatrix")
                    found += 1
            if found < 2:
                # the lifted field vanishes at the point itself (folded
                # saddle/node/focus): restart just off it, both sides
                eps = 2.0 * step
                for side in (1.0, -1.0):
                    seed = (side * eps * d[0], side * eps * d[1])
                    for sense in (0.0, math.pi):
                        pl = integrate_curvature_line(
                            bde, seed, theta + sense, pair,
                            step=step, max_steps=max_steps,
                        )
                        if len(pl) > 2:
                            scene.add(_thin(pl.points), "separatrix")

    for point, tag in markers:
        scene.mark(point, tag)
    return scene
