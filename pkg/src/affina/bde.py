"""The binary differential equation (BDE) of affine curvature lines.

For a Monge patch z = h(u, v) the affine curvature lines solve

    (lM - mL) du^2 + (lN - nL) du dv + (mN - nM) dv^2 = 0,

where (L, M, N) = (h_uu, h_uv, h_vv) and (l, m, n) are the third-form
coefficients from :mod:`affina.geometry`.  Multiplying by 4 D^2
(D = LN - M^2 > 0 off the parabolic set) clears all denominators and leaves
polynomials in the 2nd..4th height derivatives; those closed forms are encoded
in :func:`bde_numerators` and extend the equation across the parabolic set.

The module also provides the direction solver, the Lie-Cartan lift used both
for classifying degenerate points and for tracing curvature lines through
discriminant folds, the weighted blow-up of the degenerate-discriminant model
equation, and plane-curve tracing for discriminant/parabolic sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidFormError, SingularZeroSetError
from .geometry import SurfaceJet, frame_jets
from .jets import Jet2

__all__ = [
    "bde_numerators", "third_form_numerators",
    "CurvatureBDE", "curvature_bde", "asymptotic_bde", "model_bde",
    "bde_jets_at", "DirectionSet", "solve_directions",
    "LieCartanField", "lie_cartan_field",
    "blowup_coefficients", "BlowupPoint", "blowup_portrait",
    "Polyline", "integrate_curvature_line", "foliation", "trace_zero_curve",
]


# ---------------------------------------------------------------------------
# Closed-form numerators
# ---------------------------------------------------------------------------


def bde_numerators(a, b, c, u3, u2v, uv2, v3, u4, u3v, u2v2, uv3, v4):
    """Numerators (PA, PB, PC) of the affine-curvature-line equation.

    Arguments are the height derivatives h_uu, h_uv, h_vv, h_uuu, h_uuv,
    h_uvv, h_vvv, h_uuuu, h_uuuv, h_uuvv, h_uvvv, h_vvvv in any commutative
    arithmetic (floats, :class:`~affina.jets.Jet2`, symbolic).  Wherever
    D = ac - b^2 is nonzero,

        (PA, PB, PC) = -16 D^2 (lM - mL, lN - nL, mN - nM),

    equivalently PA = b*Pl - a*Pm, PB = c*Pl - a*Pn, PC = c*Pm - b*Pn in
    terms of :func:`third_form_numerators` (exact polynomial identities),
    so PA du^2 + PB du dv + PC dv^2 = 0 cuts out the affine curvature lines
    and extends them polynomially over the parabolic set D = 0.  The triple
    is antisymmetric under swapping the chart axes: PC(u, v) = -PA(v, u),
    PB(u, v) = -PB(v, u).
    """
    D = a * c - b * b
    PA = (
        -4 * b * c * u4 * D
        + 4 * D * ((a * c + 2 * b * b) * u3v - 3 * a * b * u2v2)
        + 4 * a * a * uv3 * D
        + 7 * b * c * c * u3 * u3
        + (
            -7 * c * u2v * (a * c + 4 * b * b)
            + 4 * b * uv2 * (3 * a * c + 4 * b * b)
            + a * v3 * (a * c - 8 * b * b)
        ) * u3
        + 6 * b * u2v * u2v * (5 * a * c + 2 * b * b)
        + (-3 * a * uv2 * (5 * a * c + 16 * b * b) + 14 * a * a * b * v3) * u2v
        - 7 * a * a * a * v3 * uv2
        + 21 * a * a * b * uv2 * uv2
    )
    PB = (
        -4 * c * c * u4 * D
        + 8 * b * (c * u3v - a * uv3) * D
        + 4 * a * a * v4 * D
        + 7 * c * c * c * u3 * u3
        + 3 * c * u2v * u2v * (3 * a * c + 4 * b * b)
        - 2 * c * (14 * b * c * u2v + uv2 * (a * c - 8 * b * b)) * u3
        + 2 * a * u2v * v3 * (a * c - 8 * b * b)
        + 28 * a * a * b * v3 * uv2
        - 3 * a * uv2 * uv2 * (3 * a * c + 4 * b * b)
        - 7 * a * a * a * v3 * v3
    )
    PC = (
        -4 * c * c * u3v * D
        - 4 * D * ((a * c + 2 * b * b) * uv3 - 3 * b * c * u2v2)
        + 4 * a * b * v4 * D
        - 21 * b * c * c * u2v * u2v
        + c * u3 * (7 * c * c * u2v - 14 * b * c * uv2 - v3 * (a * c - 8 * b * b))
        - 6 * b * uv2 * uv2 * (5 * a * c + 2 * b * b)
        + 7 * a * uv2 * v3 * (a * c + 4 * b * b)
        - 7 * a * a * b * v3 * v3
        + u2v * (3 * c * uv2 * (5 * a * c + 16 * b * b) - 4 * b * v3 * (3 * a * c + 4 * b * b))
    )
    return PA, PB, PC


def third_form_numerators(a, b, c, u3, u2v, uv2, v3, u4, u3v, u2v2, uv3, v4):
    """Numerators (Pl, Pm, Pn) of the third-form coefficients.

    With D = ac - b^2 != 0 the third fundamental form of the affine normal is

        (l, m, n) = -(Pl, Pm, Pn) / (16 D^2).

    Same calling convention as :func:`bde_numerators`; used as an independent
    closed-form cross-check of the jet route.
    """
    D = a * c - b * b
    Pl = (
        -4 * (c * u4 - 2 * b * u3v) * D
        - 4 * a * u2v2 * D
        + 7 * c * c * u3 * u3
        + 3 * a * a * uv2 * uv2
        + (
            -28 * u2v * b * c
            + 2 * (a * c + 8 * b * b) * uv2
            - 4 * v3 * a * b
        ) * u3
        + 12 * (a * c + b * b) * u2v * u2v
        + 4 * (a * a * v3 - 6 * a * b * uv2) * u2v
    )
    Pm = (
        -4 * (c * u3v - 2 * b * u2v2) * D
        - 4 * a * D * uv3
        + (7 * c * c * u2v - 10 * b * c * uv2 + (-a * c + 4 * b * b) * v3) * u3
        - 18 * u2v * u2v * b * c
        + 7 * uv2 * v3 * a * a
        + ((15 * a * c + 24 * b * b) * uv2 - 10 * a * b * v3) * u2v
        - 18 * uv2 * uv2 * a * b
    )
    Pn = (
        -4 * (c * u2v2 - 2 * b * uv3) * D
        - 4 * a * v4 * D
        + 4 * (-b * c * v3 + uv2 * c * c) * u3
        + 3 * u2v * u2v * c * c
        + 2 * (-12 * b * c * uv2 + (a * c + 8 * b * b) * v3) * u2v
        + 12 * (a * c + b * b) * uv2 * uv2
        - 28 * uv2 * v3 * a * b
        + 7 * v3 * v3 * a * a
    )
    return Pl, Pm, Pn


_DERIV_KEYS = (
    (2, 0), (1, 1), (0, 2),
    (3, 0), (2, 1), (1, 2), (0, 3),
    (4, 0), (3, 1), (2, 2), (1, 3), (0, 4),
)


def _height_derivative_jets(surface: SurfaceJet, order: int) -> list:
    """The 12 derivative jets of h (2nd..4th order), each padded to ``order``."""
    H = surface.hjet
    out = []
    for (i, j) in _DERIV_KEYS:
        d = H
        for _ in range(i):
            d = d.partial("u")
        for _ in range(j):
            d = d.partial("v")
        out.append(d.at_order(order))
    return out


# ---------------------------------------------------------------------------
# BDE container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurvatureBDE:
    """A du^2 + B du dv + C dv^2 = 0 with exact polynomial coefficients.

    ``A, B, C`` are jets centered at the chart origin, treated as exact
    polynomials (the closed-form route produces the full product, nothing is
    truncated away).  ``kind`` records what the equation describes and
    ``source`` how it was produced.
    """

    A: Jet2
    B: Jet2
    C: Jet2
    kind: str = "curvature"     # 'curvature' | 'asymptotic' | 'model'
    source: str = "closed_form"
    surface: SurfaceJet = None

    def coefficients_at(self, point) -> tuple:
        u, v = float(point[0]), float(point[1])
        return (self.A.evaluate(u, v), self.B.evaluate(u, v), self.C.evaluate(u, v))

    def discriminant(self) -> Jet2:
        """The polynomial B^2 - 4AC (zero set = double-direction set)."""
        return self.B * self.B - 4.0 * (self.A * self.C)

    def coefficient_scale(self) -> float:
        return max(self.A.max_abs(), self.B.max_abs(), self.C.max_abs(), 0.0)

    def is_identically_zero(self, tol: float = 1e-12) -> bool:
        return self.coefficient_scale() <= tol


def curvature_bde(surface: SurfaceJet) -> CurvatureBDE:
    """Affine-curvature-line equation of a surface jet, via the closed forms.

    The coefficients are exact polynomials of degree 5n - 12 (n = surface
    order): the numerators clear every denominator, so no truncation happens
    and derivatives of any order of A, B, C are exact.
    """
    n = surface.order
    if n < 4:
        raise InvalidFormError("the curvature-line equation needs a surface jet of order >= 4")
    work = 5 * n - 12
    derivs = _height_derivative_jets(surface, work)
    PA, PB, PC = bde_numerators(*derivs)
    return CurvatureBDE(PA, PB, PC, kind="curvature", source="closed_form", surface=surface)


def asymptotic_bde(surface: SurfaceJet) -> CurvatureBDE:
    """Asymptotic-line equation L du^2 + 2M du dv + N dv^2 = 0."""
    n = surface.order
    if n < 2:
        raise InvalidFormError("the asymptotic-line equation needs order >= 2")
    H = surface.hjet
    L = H.partial("u").partial("u")
    M = H.partial("u").partial("v")
    N = H.partial("v").partial("v")
    m = n - 2
    return CurvatureBDE(L.at_order(m), (2.0 * M).at_order(m), N.at_order(m),
                        kind="asymptotic", source="closed_form", surface=surface)


def model_bde(A_terms: dict, B_terms: dict, C_terms: dict, order: int = 6) -> CurvatureBDE:
    """BDE with explicitly given polynomial coefficients ({(i, j): value})."""
    return CurvatureBDE(
        Jet2.from_terms(A_terms, order),
        Jet2.from_terms(B_terms, order),
        Jet2.from_terms(C_terms, order),
        kind="model", source="explicit", surface=None,
    )


def bde_jets_at(surface: SurfaceJet, point=(0.0, 0.0)) -> tuple:
    """Local jets of (lM - mL, lN - nL, mN - nM) at a non-parabolic point.

    Computed through the frame-jet pipeline, independently of the closed-form
    numerators; order n - 4.  Multiplying by the local jet of 4 D^2 must
    reproduce the recentered closed forms — the consistency check the tests
    and the ``verify`` command run.
    """
    jets = frame_jets(surface, point)
    m4 = surface.order - 4
    L = jets["L"].at_order(m4)
    M = jets["M"].at_order(m4)
    N = jets["N"].at_order(m4)
    l, mm, nn = jets["l"], 0.5 * (jets["m"] + jets["m_alt"]), jets["n"]
    return (l * M - mm * L, l * N - nn * L, mm * N - nn * M)


# ---------------------------------------------------------------------------
# Pointwise directions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectionSet:
    """Solutions of A du^2 + B du dv + C dv^2 = 0 at one point.

    kind: 'two' (transversal pair), 'double' (one repeated direction),
    'none' (no real direction), 'degenerate' (A = B = C = 0 at the point).
    Directions are (du, dv), max-abs normalized, first nonzero entry > 0.
    """

    kind: str
    directions: tuple
    discriminant: float
    coefficients: tuple


def _normalize_direction(du: float, dv: float) -> tuple:
    m = max(abs(du), abs(dv))
    if m == 0.0:
        return (0.0, 0.0)
    du, dv = du / m, dv / m
    if du < 0 or (du == 0 and dv < 0):
        du, dv = -du, -dv
    return (du, dv)


def solve_directions(bde: CurvatureBDE, point=(0.0, 0.0), tol: float = 1e-9) -> DirectionSet:
    """Solve the direction equation at a point, stably in either variable.

    The two roots come out projectively from the q-trick — as the pairs
    (q : A) and (C : q) with q = -(B + sign(B) sqrt(disc))/2 — so no division
    happens and vanishing leading coefficients (directions along either axis)
    are exact, not ill-conditioned.
    """
    A0, B0, C0 = bde.coefficients_at(point)
    scale = max(abs(A0), abs(B0), abs(C0))
    gscale = max(bde.coefficient_scale(), 1e-300)
    if scale <= tol * tol * gscale:
        return DirectionSet("degenerate", (), 0.0, (A0, B0, C0))
    disc = B0 * B0 - 4.0 * A0 * C0
    eps = tol * scale * scale
    if disc < -eps:
        return DirectionSet("none", (), disc, (A0, B0, C0))
    if disc <= eps:
        # Double root du/dv = -B/2A (or dv/du = -B/2C, whichever pivot is
        # larger); at least one of A, C is of full scale here, since A = C = 0
        # would force B^2 = disc <= eps.
        if abs(A0) >= abs(C0):
            d = _normalize_direction(-B0, 2.0 * A0)
        else:
            d = _normalize_direction(2.0 * C0, -B0)
        return DirectionSet("double", (d,), disc, (A0, B0, C0))
    rt = math.sqrt(disc)
    # With dv = 1 the du-roots of A du^2 + B du + C are q/A and C/q;
    # |q| >= rt/2 > 0, so both pairs are defined even when A or C vanishes
    # (roots at infinity come out as exact axis directions).
    q = -0.5 * (B0 + math.copysign(rt, B0 if B0 != 0.0 else 1.0))
    d1 = _normalize_direction(q, A0)
    d2 = _normalize_direction(C0, q)
    return DirectionSet("two", (d1, d2), disc, (A0, B0, C0))


# ---------------------------------------------------------------------------
# Lie-Cartan lift
# ---------------------------------------------------------------------------


class LieCartanField:
    """The lifted field of F(u, v, P) = A + B P + C P^2 on the slope chart.

    X = (F_P, P F_P, -(F_u + P F_v)) is tangent to {F = 0}; its projection to
    the (u, v) plane follows the du-transversal family of BDE solutions.
    Jacobians are exact (polynomial partials), which the classification of
    tangential discriminant points relies on.
    """

    def __init__(self, bde: CurvatureBDE):
        self.bde = bde
        self._A, self._B, self._C = bde.A, bde.B, bde.C
        self._Au, self._Av = self._A.partial("u"), self._A.partial("v")
        self._Bu, self._Bv = self._B.partial("u"), self._B.partial("v")
        self._Cu, self._Cv = self._C.partial("u"), self._C.partial("v")
        self._Auu, self._Auv = self._Au.partial("u"), self._Au.partial("v")
        self._Avv = self._Av.partial("v")
        self._Buu, self._Buv = self._Bu.partial("u"), self._Bu.partial("v")
        self._Bvv = self._Bv.partial("v")
        self._Cuu, self._Cuv = self._Cu.partial("u"), self._Cu.partial("v")
        self._Cvv = self._Cv.partial("v")

    def F(self, u, v, P):
        return (self._A.evaluate(u, v) + self._B.evaluate(u, v) * P
                + self._C.evaluate(u, v) * P * P)

    def __call__(self, u, v, P):
        FP = self._B.evaluate(u, v) + 2.0 * self._C.evaluate(u, v) * P
        Fu = (self._Au.evaluate(u, v) + self._Bu.evaluate(u, v) * P
              + self._Cu.evaluate(u, v) * P * P)
        Fv = (self._Av.evaluate(u, v) + self._Bv.evaluate(u, v) * P
              + self._Cv.evaluate(u, v) * P * P)
        return np.array([FP, P * FP, -(Fu + P * Fv)])

    def jacobian(self, u, v, P):
        ev = lambda j: j.evaluate(u, v)
        B0, C0 = ev(self._B), ev(self._C)
        Bu, Bv, Cu, Cv = ev(self._Bu), ev(self._Bv), ev(self._Cu), ev(self._Cv)
        Au, Av = ev(self._Au), ev(self._Av)
        FP = B0 + 2.0 * C0 * P
        dFP = (Bu + 2.0 * Cu * P, Bv + 2.0 * Cv * P, 2.0 * C0)
        # Gradient of W = F_u + P F_v; note dW/dP picks up F_v itself.
        Fuu = ev(self._Auu) + ev(self._Buu) * P + ev(self._Cuu) * P * P
        Fuv = ev(self._Auv) + ev(self._Buv) * P + ev(self._Cuv) * P * P
        Fvv = ev(self._Avv) + ev(self._Bvv) * P + ev(self._Cvv) * P * P
        Wu = Fuu + P * Fuv
        Wv = Fuv + P * Fvv
        Fv = Av + Bv * P + Cv * P * P
        WP = Bu + 2.0 * Cu * P + Fv + P * (Bv + 2.0 * Cv * P)
        J = np.empty((3, 3))
        J[0] = dFP
        J[1] = (P * dFP[0], P * dFP[1], P * dFP[2] + FP)
        J[2] = (-Wu, -Wv, -WP)
        return J

    def eigen_at(self, u=0.0, v=0.0, P=0.0):
        """Eigenvalues of the linearization, sorted by real part."""
        w = np.linalg.eigvals(self.jacobian(u, v, P))
        return np.array(sorted(w, key=lambda z: (z.real, z.imag)))


def lie_cartan_field(bde: CurvatureBDE) -> LieCartanField:
    return LieCartanField(bde)


# ---------------------------------------------------------------------------
# Weighted blow-up of the degenerate-discriminant model
# ---------------------------------------------------------------------------


def blowup_coefficients(b01: float, b20: float, positive_branch: bool):
    """Angular coefficients of the model BDE under (u, v) = (r cos t, r^2 sin t).

    The model is -u^3 du^2 + 2(b01 v + b20 u^2) du dv + u dv^2 = 0 when
    ``positive_branch`` (isolated-discriminant case) and
    +u^3 du^2 + 2(...) du dv + u dv^2 = 0 otherwise.  Dividing the pulled-back
    equation by r^3 leaves A(t) dr^2 + 2 r B(t) dr dt + r^2 C(t) dt^2 = 0;
    returns (A, B, C, A_t) as callables of t.
    """
    if positive_branch:
        def A(t):
            ct, st = math.cos(t), math.sin(t)
            c2 = ct * ct
            return -ct * (c2 * c2 - 4.0 * b20 * c2 * st - 4.0 * (b01 + 1.0) * st * st)

        def B(t):
            ct, st = math.cos(t), math.sin(t)
            c2 = ct * ct
            return c2 * st * (c2 + 2.0) + (c2 * b20 + st * b01) * (3.0 * c2 - 2.0)

        def C(t):
            ct, st = math.cos(t), math.sin(t)
            c2 = ct * ct
            return ct * (c2 * c2 - 2.0 * b20 * c2 * st - 2.0 * b01 * st * st)
    else:
        def A(t):
            ct, st = math.cos(t), math.sin(t)
            c2 = ct * ct
            return ct * (c2 * c2 + 4.0 * b20 * c2 * st + 4.0 * (b01 + 1.0) * st * st)

        def B(t):
            ct, st = math.cos(t), math.sin(t)
            c2 = ct * ct
            return (3.0 * c2 - 2.0) * (b01 * st + b20 * c2) - c2 * st * (c2 - 2.0)

        def C(t):
            ct, st = math.cos(t), math.sin(t)
            c2 = ct * ct
            return -ct * (c2 * (c2 - 2.0) + 2.0 * b20 * c2 * st + 2.0 * b01 * st * st)

    def A_t(t, _h=1e-6):
        return (A(t + _h) - A(t - _h)) / (2.0 * _h)

    return A, B, C, A_t


@dataclass(frozen=True)
class BlowupPoint:
    """One singularity of the blown-up model field on the exceptional circle."""

    t: float
    eigenvalues: tuple  # (A_t, -2B)
    kind: str           # 'saddle' | 'node' | 'nonhyperbolic'


def blowup_portrait(b01: float, b20: float, positive_branch: bool,
                    samples: int = 4096, tol: float = 1e-9) -> tuple:
    """Singular angles and linearization types of the blown-up model field.

    Scans A(t) on [0, 2 pi) for sign changes, polishes each root by bisection,
    and types it by the eigenvalue pair (A_t(t0), -2 B(t0)): opposite signs
    give a saddle, equal signs a node.  Returns a tuple of
    :class:`BlowupPoint`, sorted by angle.
    """
    A, B, C, A_t = blowup_coefficients(b01, b20, positive_branch)
    roots = []
    ts = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    vals = np.array([A(t) for t in ts])
    scale = float(np.max(np.abs(vals)))
    if scale == 0.0:
        raise SingularZeroSetError("blow-up coefficient A(t) vanishes identically")
    for i in range(samples):
        t0, t1 = ts[i], ts[i] + (2.0 * math.pi / samples)
        f0, f1 = vals[i], A(t1)
        if f0 == 0.0:
            roots.append(t0)
            continue
        if f0 * f1 < 0.0:
            lo, hi, flo = t0, t1, f0
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = A(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if flo * fm < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(0.5 * (lo + hi))
    # Dedupe near-identical roots (incl. wrap-around).
    roots.sort()
    cleaned = []
    for r in roots:
        if not cleaned or (r - cleaned[-1]) > 1e-7:
            cleaned.append(r)
    if cleaned and (cleaned[0] + 2.0 * math.pi - cleaned[-1]) <= 1e-7:
        cleaned.pop()

    points = []
    for t0 in cleaned:
        e1 = A_t(t0)
        e2 = -2.0 * B(t0)
        prod = e1 * e2
        if abs(prod) <= tol * scale * scale:
            kind = "nonhyperbolic"
        else:
            kind = "saddle" if prod < 0.0 else "node"
        points.append(BlowupPoint(t=float(t0), eigenvalues=(float(e1), float(e2)), kind=kind))
    return tuple(points)


# ---------------------------------------------------------------------------
# Tracing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Polyline:
    """A traced plane curve: an (N, 2) float array plus a termination reason.

    termination: 'boundary' | 'singular' | 'closed' | 'max_steps'.
    """

    points: np.ndarray
    termination: str
    family: int = -1

    def __len__(self):
        return len(self.points)


def _inside(p, window) -> bool:
    (x0, x1), (y0, y1) = window
    return x0 <= p[0] <= x1 and y0 <= p[1] <= y1


def integrate_curvature_line(bde: CurvatureBDE, seed, theta0: float, window,
                             step: float = None, max_steps: int = 6000,
                             singular_tol: float = 1e-8) -> Polyline:
    """Trace one curvature line through the Lie-Cartan lift.

    The state (u, v, theta) moves along the lifted field of
    G(u, v, theta) = A cos^2 + B cos sin + C sin^2, which is regular across
    discriminant folds (where the planar direction field is only
    1/2-Hoelder).  Fourth-order Runge-Kutta with a theta-correction step;
    stops at the window boundary, at field singularities, on closure, or at
    the step cap.
    """
    (x0, x1), (y0, y1) = window
    span = max(x1 - x0, y1 - y0)
    if step is None:
        step = 1e-3 * span
    A, B, C = bde.A, bde.B, bde.C
    Au, Av = A.partial("u"), A.partial("v")
    Bu, Bv = B.partial("u"), B.partial("v")
    Cu, Cv = C.partial("u"), C.partial("v")
    gscale = max(bde.coefficient_scale(), 1e-300)

    def field(state):
        u, v, th = state
        ct, st = math.cos(th), math.sin(th)
        c2, cs, s2 = ct * ct, ct * st, st * st
        a0, b0, c0 = A.evaluate(u, v), B.evaluate(u, v), C.evaluate(u, v)
        Gth = (c0 - a0) * 2.0 * cs + b0 * (c2 - s2)
        Gu = Au.evaluate(u, v) * c2 + Bu.evaluate(u, v) * cs + Cu.evaluate(u, v) * s2
        Gv = Av.evaluate(u, v) * c2 + Bv.evaluate(u, v) * cs + Cv.evaluate(u, v) * s2
        vec = np.array([Gth * ct, Gth * st, -(Gu * ct + Gv * st)])
        return vec

    def G(state):
        u, v, th = state
        ct, st = math.cos(th), math.sin(th)
        return (A.evaluate(u, v) * ct * ct + B.evaluate(u, v) * ct * st
                + C.evaluate(u, v) * st * st)

    def correct(state):
        # One or two Newton steps in theta to stay on {G = 0}.
        u, v, th = state
        for _ in range(2):
            ct, st = math.cos(th), math.sin(th)
            a0, b0, c0 = A.evaluate(u, v), B.evaluate(u, v), C.evaluate(u, v)
            g = a0 * ct * ct + b0 * ct * st + c0 * st * st
            gth = (c0 - a0) * 2.0 * ct * st + b0 * (ct * ct - st * st)
            if abs(gth) <= 1e-14 * gscale:
                break
            dth = -g / gth
            if abs(dth) > 0.3:
                break
            th += dth
        return np.array([u, v, th])

    state = correct(np.array([seed[0], seed[1], theta0]))
    pts = [state[:2].copy()]
    start = state[:2].copy()
    termination = "max_steps"
    left_start = False  # closure only counts after the trace has moved away
    for k in range(max_steps):
        f0 = field(state)
        n0 = np.linalg.norm(f0)
        if n0 <= singular_tol * gscale:
            termination = "singular"
            break
        h = step / n0
        k1 = f0
        k2 = field(state + 0.5 * h * k1)
        k3 = field(state + 0.5 * h * k2)
        k4 = field(state + h * k3)
        new = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        new = correct(new)
        if not np.isfinite(new).all():
            termination = "singular"
            break
        state = new
        pts.append(state[:2].copy())
        if not _inside(state[:2], window):
            termination = "boundary"
            break
        dist = np.linalg.norm(state[:2] - start)
        if dist > 3.0 * step:
            left_start = True
        elif left_start and dist < 0.75 * step:
            termination = "closed"
            break
    return Polyline(points=np.array(pts), termination=termination)


def foliation(bde: CurvatureBDE, window, grid: int = 7, step: float = None,
              max_steps: int = 4000) -> list:
    """Curvature-line sample of both families over a rectangular window.

    Seeds a grid, solves the direction pair at each seed, and integrates each
    branch in both senses.  Returns a list of :class:`Polyline` with
    ``family`` set to the direction index at the seed; seeds where the
    equation has no real directions (or is degenerate) are skipped.
    """
    (x0, x1), (y0, y1) = window
    out = []
    for i in range(grid):
        for j in range(grid):
            u = x0 + (i + 0.5) * (x1 - x0) / grid
            v = y0 + (j + 0.5) * (y1 - y0) / grid
            ds = solve_directions(bde, (u, v))
            if ds.kind not in ("two", "double"):
                continue
            for fam, d in enumerate(ds.directions):
                th = math.atan2(d[1], d[0])
                for sense in (0.0, math.pi):
                    pl = integrate_curvature_line(
                        bde, (u, v), th + sense, window, step=step, max_steps=max_steps
                    )
                    if len(pl) > 3:
                        out.append(Polyline(pl.points, pl.termination, family=fam))
    return out


def trace_zero_curve(f: Jet2, window, seeds=None, step: float = None,
                     max_steps: int = 20000, grid: int = 48,
                     residual_tol: float = 1e-9) -> list:
    """Trace the zero set of a polynomial jet inside a window.

    Seeds come from sign changes of ``f`` along grid edges (or are given);
    each seed is marched by tangent predictor / Newton corrector along the
    gradient until the boundary, a singular point of the zero set (where the
    gradient collapses), closure, or the step cap.  The corrector enforces
    |f| <= residual_tol * local gradient scale * window span.

    Raises :class:`~affina.errors.SingularZeroSetError` if polishing a seed
    lands on a gradient-degenerate point (e.g. a crossing) — callers split
    the window or pass explicit seeds in that case.
    """
    (x0, x1), (y0, y1) = window
    span = max(x1 - x0, y1 - y0)
    if step is None:
        step = span / 400.0
    fu, fv = f.partial("u"), f.partial("v")

    def val(p):
        return f.evaluate(p[0], p[1])

    def grad(p):
        return np.array([fu.evaluate(p[0], p[1]), fv.evaluate(p[0], p[1])])

    def newton(p, iters=30):
        p = np.array(p, dtype=float)
        for _ in range(iters):
            fp = val(p)
            g = grad(p)
            g2 = g @ g
            if g2 == 0.0:
                raise SingularZeroSetError(f"zero-set gradient vanishes near {tuple(p)}")
            if abs(fp) <= residual_tol * math.sqrt(g2) * span:
                return p
            p = p - fp * g / g2
        if abs(val(p)) <= 10.0 * residual_tol * (np.linalg.norm(grad(p)) + 1e-300) * span:
            return p
        raise SingularZeroSetError(f"zero-set corrector stalled near {tuple(p)}")

    if seeds is None:
        seeds = []
        xs = np.linspace(x0, x1, grid + 1)
        ys = np.linspace(y0, y1, grid + 1)
        vals = np.array([[f.evaluate(x, y) for y in ys] for x in xs])
        for i in range(grid + 1):
            for j in range(grid):
                f0, f1 = vals[i, j], vals[i, j + 1]
                if f0 == 0.0 or f0 * f1 < 0.0:
                    t = 0.0 if f0 == 0.0 else f0 / (f0 - f1)
                    seeds.append((xs[i], ys[j] + t * (ys[j + 1] - ys[j])))
        for j in range(grid + 1):
            for i in range(grid):
                f0, f1 = vals[i, j], vals[i + 1, j]
                if f0 * f1 < 0.0:
                    t = f0 / (f0 - f1)
                    seeds.append((xs[i] + t * (xs[i + 1] - xs[i]), ys[j]))

    curves = []
    # Cell-hash dedupe: every traced point marks its step-sized cell, and a
    # seed is "new" only if no traced point lies within one cell of it.
    visited = set()

    def _cell(p):
        return (int(math.floor(p[0] / step)), int(math.floor(p[1] / step)))

    def is_new(p):
        ci, cj = _cell(p)
        return not any(
            (ci + di, cj + dj) in visited
            for di in (-1, 0, 1) for dj in (-1, 0, 1)
        )

    for seed in seeds:
        try:
            p0 = newton(seed)
        except SingularZeroSetError:
            if seeds is not None and not curves:
                raise
            continue
        if not _inside(p0, window) or not is_new(p0):
            continue
        halves = []
        for sense in (1.0, -1.0):
            p = p0.copy()
            pts = [p.copy()]
            termination = "max_steps"
            for _ in range(max_steps):
                g = grad(p)
                ng = np.linalg.norm(g)
                if ng <= 1e-12 * (abs(val(p)) / (span * 1e-9) + 1.0):
                    termination = "singular"
                    break
                tangent = sense * np.array([-g[1], g[0]]) / ng
                try:
                    p = newton(p + step * tangent, iters=8)
                except SingularZeroSetError:
                    termination = "singular"
                    break
                pts.append(p.copy())
                if not _inside(p, window):
                    termination = "boundary"
                    break
                if len(pts) > 8 and np.linalg.norm(p - p0) < 0.6 * step:
                    termination = "closed"
                    break
            halves.append((pts, termination))
        (fwd, term_f), (bwd, term_b) = halves
        if term_f == "closed":
            pts = np.array(fwd)
            term = "closed"
        else:
            pts = np.array(bwd[::-1] + fwd[1:]) if len(bwd) > 1 else np.array(fwd)
            order = {"singular": 2, "boundary": 1, "max_steps": 0, "closed": 3}
            term = term_f if order[term_f] >= order[term_b] else term_b
        visited.update(_cell(p) for p in pts)
        curves.append(Polyline(points=pts, termination=term))
    return curves
