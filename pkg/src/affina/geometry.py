"""Blaschke (equiaffine) surface geometry from Monge-chart jets.

A surface is the graph z = h(u, v) of a polynomial height jet.  With

    L = h_uu,  M = h_uv,  N = h_vv,  D = L N - M^2,

the conormal is nu = (-h_u, -h_v, 1) / |D|^(1/4) and the Blaschke metric is
g_ij = (L, M, N) / |D|^(1/4).  The affine normal xi is computed through the
divergence form

    xi = s/2 * |D|^(1/4) / |D|^(1/2)
         * [ d_u( (N X_u - M X_v)/|D|^(1/2) ) + d_v( (L X_v - M X_u)/|D|^(1/2) ) ]

with s = sign(D).  The factor s makes <nu, xi> = 1 on both curvature signs
(without it the formula points the affine normal downward wherever D < 0) and
makes the coefficients l, m, n of the third fundamental form globally rational
in the height derivatives, which is what the closed-form curvature-line
coefficients in :mod:`affina.bde` assume.

Shape coefficients are stored in the convention

    [xi_u; xi_v] = s * [[b11, b21], [b12, b22]] [X_u; X_v],

i.e. ``b11 .. b22`` equal the derivative matrix of xi only up to the sign of D.
That convention matches the closed-form coefficient tables this package
reproduces for the definite and indefinite normal forms; eigen-data of the
actual derivative (used for principal directions) is recovered by multiplying
back with s, which :func:`principal_data` does.

Normal-form coefficients use the factorial convention throughout:

    h(u, v) = sum q_ij u^i v^j / (i! j!).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidFormError,
    NumericalInconsistencyError,
    ParabolicPointError,
    WrongChartError,
)
from .jets import Jet2, jet_pow, jv_cross, jv_dot, jv_partial

PARABOLIC_TOL = 1e-10

_PICK_ELLIPTIC_FREE = (
    "sigma", "q40", "q31", "q22", "q13", "q04",
    "q50", "q41", "q32", "q23", "q14", "q05",
)
_PICK_HYPERBOLIC_FREE = _PICK_ELLIPTIC_FREE
_BUCHIN_FREE = (
    "q30", "q03",
    "q40", "q31", "q22", "q13", "q04",
    "q50", "q41", "q32", "q23", "q14", "q05",
    "q60", "q51", "q42", "q33", "q24", "q15", "q06",
)
_PARABOLIC_FREE = (
    "k",
    "q30", "q21", "q12", "q03",
    "q40", "q31", "q22", "q13", "q04",
    "q50", "q41", "q32", "q23", "q14", "q05",
)

NORMAL_FORM_KINDS = ("monge", "pick_elliptic", "pick_hyperbolic", "buchin", "parabolic")


@dataclass(frozen=True)
class SurfaceJet:
    """A polynomial Monge patch z = h(u, v), h given as a monomial-coefficient jet."""

    kind: str
    order: int
    hjet: Jet2
    params: dict = field(default_factory=dict)

    def partials_at_origin(self) -> dict:
        """All height derivatives d^{i+j} h / du^i dv^j at (0,0), keyed by (i, j)."""
        out = {}
        for i in range(self.order + 1):
            for j in range(self.order + 1 - i):
                out[(i, j)] = self.hjet.coeffs[i, j] * math.factorial(i) * math.factorial(j)
        return out


def _q(params: dict, name: str) -> float:
    return float(params.get(name, 0.0))


def _terms_from_named(params: dict, names, order: int) -> dict:
    terms = {}
    for name in names:
        if name in ("sigma", "k"):
            continue
        val = _q(params, name)
        if val == 0.0:
            continue
        i, j = int(name[1]), int(name[2])
        if i + j > order:
            raise InvalidFormError(
                f"coefficient {name} exceeds the jet order {order}"
            )
        terms[(i, j)] = val / (math.factorial(i) * math.factorial(j))
    return terms


def normal_form_surface(kind: str, params: dict = None, order: int = 6) -> SurfaceJet:
    """Build a surface jet for one of the supported normal forms.

    Parameters
    ----------
    kind : str
        One of ``monge``, ``pick_elliptic``, ``pick_hyperbolic``, ``buchin``,
        ``parabolic``.
    params : dict
        Named coefficients in the factorial convention
        ``h = sum q_ij u^i v^j/(i! j!)``.  For ``monge`` the keys are ``(i, j)``
        tuples or ``"i,j"`` strings; the other kinds take the named scalars
        their normal form leaves free (``sigma``, ``k``, ``q40`` ...).
    order : int
        Truncation order of the stored jet (>= 3; >= i+j of every coefficient).

    Raises
    ------
    InvalidFormError
        Unknown parameter names, coefficients beyond the order, ``k == 0``
        for the parabolic form, or an unsupported kind.
    """
    params = dict(params or {})
    if kind not in NORMAL_FORM_KINDS:
        raise InvalidFormError(f"unknown normal form kind {kind!r}")
    if order < 3 or order > 12:
        raise InvalidFormError(f"jet order {order} out of the supported range 3..12")

    if kind == "monge":
        terms = {}
        for key, val in params.items():
            if isinstance(key, str):
                i, j = (int(s) for s in key.split(","))
            else:
                i, j = key
            if i < 0 or j < 0 or i + j > order:
                raise InvalidFormError(f"monge coefficient ({i},{j}) outside order {order}")
            if float(val) != 0.0:
                terms[(i, j)] = float(val) / (math.factorial(i) * math.factorial(j))
        return SurfaceJet("monge", order, Jet2.from_terms(terms, order),
                          {f"{i},{j}": float(v) for (i, j), v in params.items()}
                          if all(isinstance(k, tuple) for k in params) else dict(params))

    allowed = {
        "pick_elliptic": _PICK_ELLIPTIC_FREE,
        "pick_hyperbolic": _PICK_HYPERBOLIC_FREE,
        "buchin": _BUCHIN_FREE,
        "parabolic": _PARABOLIC_FREE,
    }[kind]
    unknown = sorted(set(params) - set(allowed))
    if unknown:
        raise InvalidFormError(f"parameters {unknown} are not free in the {kind} form")

    terms = _terms_from_named(params, allowed, order)
    if kind == "pick_elliptic":
        sigma = _q(params, "sigma")
        terms[(2, 0)] = 0.5
        terms[(0, 2)] = 0.5
        if sigma:
            terms[(3, 0)] = terms.get((3, 0), 0.0) + sigma / 6.0
            terms[(1, 2)] = terms.get((1, 2), 0.0) - sigma / 2.0
        params.setdefault("sigma", 0.0)
    elif kind == "pick_hyperbolic":
        sigma = _q(params, "sigma")
        terms[(2, 0)] = 0.5
        terms[(0, 2)] = -0.5
        if sigma:
            terms[(3, 0)] = terms.get((3, 0), 0.0) + sigma / 6.0
            terms[(1, 2)] = terms.get((1, 2), 0.0) + sigma / 2.0
        params.setdefault("sigma", 0.0)
    elif kind == "buchin":
        terms[(1, 1)] = 1.0
    elif kind == "parabolic":
        k = _q(params, "k")
        if k == 0.0:
            raise InvalidFormError("the parabolic form needs k != 0")
        terms[(0, 2)] = k / 2.0

    return SurfaceJet(kind, order, Jet2.from_terms(terms, order), params)


# ---------------------------------------------------------------------------
# Pointwise frame
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointFrame:
    """Affine first/second-order data of a surface jet at one non-parabolic point."""

    point: tuple
    L: float
    M: float
    N: float
    D: float
    sign: float
    g11: float
    g12: float
    g22: float
    nu: tuple
    xi: tuple
    xi_u: tuple
    xi_v: tuple
    l: float
    m: float
    n: float
    b11: float
    b12: float
    b21: float
    b22: float
    Ke: float


def frame_jets(surface: SurfaceJet, point=(0.0, 0.0)) -> dict:
    """Jets (centered at ``point``) of every frame quantity the package uses.

    Returns a dict with keys ``H, Hu, Hv, L, M, N, D, rho, nu, xi, nu_u, nu_v,
    xi_u, xi_v, l, m, n, sign``; vector entries are 3-tuples of jets.  The jet
    orders step down with each derivative taken, starting from the surface
    order n: L, M, N at n-2, xi at n-3, and l, m, n at n-4.
    """
    n = surface.order
    if n < 4:
        raise InvalidFormError("frame jets need a surface jet of order >= 4")
    u0, v0 = float(point[0]), float(point[1])
    H = surface.hjet.shift(u0, v0) if (u0 or v0) else surface.hjet

    Hu = H.partial("u")
    Hv = H.partial("v")
    L = Hu.partial("u")
    M = Hu.partial("v")
    N = Hv.partial("v")
    m2 = n - 2

    D = L * N - M * M
    D0 = float(D.constant_term)
    L0, N0 = float(L.constant_term), float(N.constant_term)
    if abs(D0) < PARABOLIC_TOL * (1.0 + abs(L0) + abs(N0)) ** 2:
        raise ParabolicPointError(
            f"h_uu*h_vv - h_uv^2 = {D0:.3e} at {point}: parabolic within tolerance"
        )
    sgn = 1.0 if D0 > 0 else -1.0
    absD = D * sgn
    irho = jet_pow(absD, -0.25)
    isqrt = jet_pow(absD, -0.5)

    one = Jet2.constant(1.0, m2)
    zero = Jet2.constant(0.0, m2)
    Xu = (one, zero, Hu.at_order(m2))
    Xv = (zero, one, Hv.at_order(m2))

    nu = tuple(c * irho for c in (-Hu.at_order(m2), -Hv.at_order(m2), one))

    inner_u = tuple((N * x - M * y) * isqrt for x, y in zip(Xu, Xv))
    inner_v = tuple((L * y - M * x) * isqrt for x, y in zip(Xu, Xv))
    div = tuple(
        iu.partial("u") + iv.partial("v") for iu, iv in zip(inner_u, inner_v)
    )
    half_irho3 = irho.at_order(n - 3) * (0.5 * sgn)
    xi = tuple(half_irho3 * c for c in div)

    nu_u = jv_partial(nu, "u")
    nu_v = jv_partial(nu, "v")
    xi_u = jv_partial(xi, "u")
    xi_v = jv_partial(xi, "v")

    m4 = n - 4
    nu_u4 = tuple(c.at_order(m4) for c in nu_u)
    nu_v4 = tuple(c.at_order(m4) for c in nu_v)
    lj = jv_dot(nu_u4, xi_u)
    mj = jv_dot(nu_u4, xi_v)
    mj2 = jv_dot(nu_v4, xi_u)
    nj = jv_dot(nu_v4, xi_v)

    return {
        "H": H, "Hu": Hu, "Hv": Hv,
        "L": L, "M": M, "N": N, "D": D, "sign": sgn,
        "irho": irho, "nu": nu, "xi": xi,
        "nu_u": nu_u, "nu_v": nu_v, "xi_u": xi_u, "xi_v": xi_v,
        "l": lj, "m": mj, "m_alt": mj2, "n": nj,
    }


def point_frame(surface: SurfaceJet, point=(0.0, 0.0)) -> PointFrame:
    """Evaluate the affine frame of the surface at one point.

    The point must be non-parabolic; the surface jet must have order >= 4.
    Internal consistency (the two routes to m, and the shape coefficients
    against the metric contraction of l, m, n) is checked to 1e-8 and a
    violation raises :class:`~affina.errors.NumericalInconsistencyError`.
    """
    jets = frame_jets(surface, point)
    sgn = jets["sign"]
    L0 = float(jets["L"].constant_term)
    M0 = float(jets["M"].constant_term)
    N0 = float(jets["N"].constant_term)
    D0 = float(jets["D"].constant_term)
    rho0 = abs(D0) ** 0.25

    nu0 = tuple(float(c.constant_term) for c in jets["nu"])
    xi0 = tuple(float(c.constant_term) for c in jets["xi"])
    xi_u0 = tuple(float(c.constant_term) for c in jets["xi_u"])
    xi_v0 = tuple(float(c.constant_term) for c in jets["xi_v"])
    l0 = float(jets["l"].constant_term)
    m0 = float(jets["m"].constant_term)
    m0_alt = float(jets["m_alt"].constant_term)
    n0 = float(jets["n"].constant_term)

    # xi_u = b11_true X_u + b21_true X_v; with X_u = (1,0,h_u), X_v = (0,1,h_v)
    # the first two components read the coefficients off directly.
    b11_t, b21_t = xi_u0[0], xi_u0[1]
    b12_t, b22_t = xi_v0[0], xi_v0[1]

    g11, g12, g22 = L0 / rho0, M0 / rho0, N0 / rho0
    scale = max(abs(l0), abs(m0), abs(n0), 1e-30)
    l_alt = -(b11_t * g11 + b21_t * g12)
    n_alt = -(b12_t * g12 + b22_t * g22)
    checks = (abs(m0 - m0_alt), abs(l0 - l_alt), abs(n0 - n_alt))
    if max(checks) > 1e-8 * max(scale, 1.0):
        raise NumericalInconsistencyError(
            f"third-form routes disagree at {point}: deviations {checks}"
        )

    Hu0 = float(jets["Hu"].constant_term)
    Hv0 = float(jets["Hv"].constant_term)
    Ke = D0 / (1.0 + Hu0 ** 2 + Hv0 ** 2) ** 2

    return PointFrame(
        point=(float(point[0]), float(point[1])),
        L=L0, M=M0, N=N0, D=D0, sign=sgn,
        g11=g11, g12=g12, g22=g22,
        nu=nu0, xi=xi0, xi_u=xi_u0, xi_v=xi_v0,
        l=l0, m=(0.5 * (m0 + m0_alt)), n=n0,
        b11=sgn * b11_t, b12=sgn * b12_t, b21=sgn * b21_t, b22=sgn * b22_t,
        Ke=Ke,
    )


def conormal_cross_normal(surface: SurfaceJet, point=(0.0, 0.0)) -> tuple:
    """The affine normal via the cross product of conormal derivatives.

    Independent of the divergence form used by :func:`frame_jets`; the result
    is oriented so that <nu, xi> = 1.  Used as a cross-check route.
    """
    jets = frame_jets(surface, point)
    nu_u = jets["nu_u"]
    nu_v = jets["nu_v"]
    n3 = nu_u[0].order
    cross = jv_cross(nu_u, nu_v)
    irho = jets["irho"].at_order(n3)
    xi2 = tuple(c * irho for c in cross)
    ip = sum(
        float(a.constant_term) * float(b.constant_term)
        for a, b in zip(jets["nu"], xi2)
    )
    if ip < 0:
        xi2 = tuple(-c for c in xi2)
    return xi2


def affine_normal_jet(surface: SurfaceJet, point=(0.0, 0.0)) -> tuple:
    """Jet (order n-3) of the affine normal field xi around ``point``."""
    return frame_jets(surface, point)["xi"]


# ---------------------------------------------------------------------------
# Principal directions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrincipalData:
    """Eigen-data of the derivative of the affine normal at a point."""

    kind: str  # 'two_real' | 'complex_pair' | 'double_direction' | 'isotropic'
    curvatures: tuple
    directions: tuple


def _unit_direction(x: float, y: float) -> tuple:
    m = max(abs(x), abs(y))
    if m == 0.0:
        return (0.0, 0.0)
    x, y = x / m, y / m
    if x < 0 or (x == 0 and y < 0):
        x, y = -x, -y
    return (x, y)


def principal_data(frame: PointFrame, tol: float = 1e-9) -> PrincipalData:
    """Eigenvalues/eigendirections of d(xi) in the tangent basis (X_u, X_v).

    The affine principal curvatures are the negatives of the eigenvalues of
    the derivative matrix; the directions returned are chart directions
    (du, dv) normalized to max-abs one.
    """
    s = frame.sign
    # Derivative matrix acting on (du, dv) column vectors.
    p, q = s * frame.b11, s * frame.b12
    r, t = s * frame.b21, s * frame.b22
    tr = p + t
    det = p * t - q * r
    disc = tr * tr - 4.0 * det
    scale = max(abs(p), abs(q), abs(r), abs(t), 1.0)
    eps = tol * scale * scale

    if disc > eps:
        rt = math.sqrt(disc)
        lam1, lam2 = (tr - rt) / 2.0, (tr + rt) / 2.0
        dirs = []
        for lam in (lam1, lam2):
            if abs(q) >= abs(r):
                d = _unit_direction(q, lam - p)
            else:
                d = _unit_direction(lam - t, r)
            if d == (0.0, 0.0):
                d = (1.0, 0.0) if abs(lam - p) < abs(lam - t) else (0.0, 1.0)
            dirs.append(d)
        return PrincipalData("two_real", (lam1, lam2), tuple(dirs))
    if disc < -eps:
        return PrincipalData("complex_pair", (tr / 2.0, math.sqrt(-disc) / 2.0), ())
    lam = tr / 2.0
    off = max(abs(q), abs(r), abs(p - t))
    if off <= tol * scale:
        return PrincipalData("isotropic", (lam, lam), ())
    if abs(q) >= abs(r):
        d = _unit_direction(q, lam - p)
    else:
        d = _unit_direction(lam - t, r)
    return PrincipalData("double_direction", (lam, lam), (d,))


# ---------------------------------------------------------------------------
# Normal-form detection for raw Monge input
# ---------------------------------------------------------------------------


def named_coefficients(surface: SurfaceJet, tol: float = 1e-12) -> tuple:
    """Detect which normal form a surface jet is in and name its coefficients.

    Returns ``(kind, params)`` where ``kind`` is one of the non-monge normal
    form kinds and ``params`` holds the factorial-convention coefficients.
    Surfaces built by :func:`normal_form_surface` pass through; raw ``monge``
    jets are matched against the 2-jet (and the constrained cubic terms) of
    each form to within ``tol``, and a mismatch raises
    :class:`~affina.errors.WrongChartError` naming the offending coefficients.
    """
    if surface.kind != "monge":
        return surface.kind, dict(surface.params)

    c = surface.hjet.coeffs
    q = {}
    for i in range(surface.order + 1):
        for j in range(surface.order + 1 - i):
            q[(i, j)] = float(c[i, j]) * math.factorial(i) * math.factorial(j)

    lin = [q.get((0, 0), 0.0), q.get((1, 0), 0.0), q.get((0, 1), 0.0)]
    if any(abs(x) > tol for x in lin):
        raise WrongChartError(
            f"jet has nonzero constant/linear terms {lin}; normal forms are centered"
        )
    q20, q11, q02 = q.get((2, 0), 0.0), q.get((1, 1), 0.0), q.get((0, 2), 0.0)

    def collect(names):
        out = {}
        for name in names:
            i, j = int(name[1]), int(name[2])
            if i + j <= surface.order:
                val = q.get((i, j), 0.0)
                if val:
                    out[name] = val
        return out

    if abs(q20 - 1.0) <= tol and abs(q02 - 1.0) <= tol and abs(q11) <= tol:
        # definite Pick chart: cubic must be sigma*(u^3 - 3 u v^2)/6
        sigma = q.get((3, 0), 0.0)
        bad = {
            "q21": q.get((2, 1), 0.0),
            "q03": q.get((0, 3), 0.0),
            "q12+sigma": q.get((1, 2), 0.0) + sigma,
        }
        off = {k: v for k, v in bad.items() if abs(v) > tol}
        if off:
            raise WrongChartError(f"cubic terms violate the definite Pick chart: {off}")
        params = collect([n for n in _PICK_ELLIPTIC_FREE if n != "sigma"])
        params["sigma"] = sigma
        return "pick_elliptic", params

    if abs(q20 - 1.0) <= tol and abs(q02 + 1.0) <= tol and abs(q11) <= tol:
        sigma = q.get((3, 0), 0.0)
        bad = {
            "q21": q.get((2, 1), 0.0),
            "q03": q.get((0, 3), 0.0),
            "q12-sigma": q.get((1, 2), 0.0) - sigma,
        }
        off = {k: v for k, v in bad.items() if abs(v) > tol}
        if off:
            raise WrongChartError(f"cubic terms violate the indefinite Pick chart: {off}")
        params = collect([n for n in _PICK_HYPERBOLIC_FREE if n != "sigma"])
        params["sigma"] = sigma
        return "pick_hyperbolic", params

    if abs(q11 - 1.0) <= tol and abs(q20) <= tol and abs(q02) <= tol:
        bad = {"q21": q.get((2, 1), 0.0), "q12": q.get((1, 2), 0.0)}
        off = {k: v for k, v in bad.items() if abs(v) > tol}
        if off:
            raise WrongChartError(f"cubic terms violate the uv chart: {off}")
        return "buchin", collect(_BUCHIN_FREE)

    if abs(q20) <= tol and abs(q11) <= tol and abs(q02) > tol:
        params = collect([n for n in _PARABOLIC_FREE if n != "k"])
        params["k"] = q02
        return "parabolic", params

    raise WrongChartError(
        f"2-jet (q20, q11, q02) = ({q20}, {q11}, {q02}) matches no supported normal form"
    )
