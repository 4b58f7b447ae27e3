"""Taxonomy of singular points of the affine curvature-line equation.

Each classifier works on a surface jet expressed in the chart adapted to its
singularity type: the Pick charts for umbilics (isolated zeros of the whole
equation at non-parabolic points), the product chart ``h = uv + ...`` for
points where the two curvature-line fields fold on the discriminant, and the
parabolic chart ``h = (k/2) v^2 + ...`` on the boundary of the elliptic
region.  A classifier evaluates closed-form invariants of the chart
coefficients, runs its sign decision table, and cross-checks the closed
forms against the numeric jet pipeline; a disagreement between the two
routes raises :class:`~affina.errors.NumericalInconsistencyError` instead of
silently emitting a wrong tag.

Degenerate outcomes (a vanishing invariant, a value sitting on a decision
wall) are first-class ``Degenerate(...)`` reports, not exceptions, so
parameter scans run to completion; the signed margins behind every decision
ride along in the report for auditing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bde import bde_jets_at, curvature_bde, lie_cartan_field, solve_directions
from .errors import (
    DegenerateUmbilicError,
    InvalidFormError,
    NotDiscriminantPointError,
    NumericalInconsistencyError,
    WrongChartError,
)
from .geometry import SurfaceJet, named_coefficients, normal_form_surface, point_frame

__all__ = [
    "GENERICITY_TOL",
    "FOLDED_TOL",
    "UmbilicInvariants",
    "FoldedInvariants",
    "GaussCuspInvariants",
    "SingularityReport",
    "umbilic_test",
    "umbilic_linear_coeffs",
    "umbilic_invariants",
    "classify_elliptic_umbilic",
    "classify_hyperbolic_umbilic",
    "classify_folded",
    "classify_parabolic",
    "gauss_cusp_invariants",
    "classify",
]

GENERICITY_TOL = 1e-9
FOLDED_TOL = 1e-10
CROSS_CHECK_TOL = 1e-8


def _msum(*terms):
    """Signed sum of a formula's monomials, plus the sum of magnitudes.

    The magnitude sum is the natural scale genericity tests measure against:
    cancellation below tolerance times that scale counts as a vanishing
    invariant, never as a usable sign.
    """
    return math.fsum(terms), math.fsum(abs(t) for t in terms)


def _margin(value, scale):
    """Dimensionless signed margin of a value against its monomial scale."""
    return value / scale if scale > 0.0 else 0.0


def _cubic_discriminant(a, b, c, d):
    """Discriminant of ``a k^3 + b k^2 + c k + d`` with its monomial scale."""
    return _msum(18.0 * a * b * c * d, -4.0 * b ** 3 * d, (b * c) ** 2,
                 -4.0 * a * c ** 3, -27.0 * (a * d) ** 2)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SingularityReport:
    """Outcome of a classification: a tag plus the numbers that decided it.

    ``invariants`` holds the evaluated closed forms, ``genericity`` one
    boolean per hypothesis behind the tag, ``margins`` the signed
    dimensionless ratios value / scale those booleans thresholded (so the
    side of every decision wall stays visible).  ``record`` keeps the typed
    invariant bundle when one exists; it is not serialized and does not
    take part in equality.
    """

    tag: str
    invariants: dict
    genericity: dict
    margins: dict
    record: object = field(default=None, compare=False, repr=False)

    def to_json(self) -> str:
        return json.dumps(
            {"tag": self.tag, "invariants": self.invariants,
             "genericity": self.genericity, "margins": self.margins},
            sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SingularityReport":
        data = json.loads(text)
        return cls(data["tag"], data["invariants"], data["genericity"],
                   data["margins"])


def _degenerate(reason, invariants=None, genericity=None, margins=None,
                record=None):
    return SingularityReport(f"Degenerate({reason})", invariants or {},
                             genericity or {}, margins or {}, record)


# ---------------------------------------------------------------------------
# Umbilics (Pick charts)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UmbilicInvariants:
    """Decision data of the linearized equation at a Pick-chart umbilic.

    The equation's one-jet at the umbilic is
    ``(a1 u + b1 v) du^2 + 2 (a2 u + b2 v) du dv -/+ (a1 u + b1 v) dv^2``
    (upper sign in the definite case).  ``p3`` lists the coefficients, cubic
    term first, of the direction polynomial whose simple real roots are the
    radial invariant directions; ``discriminant`` is its discriminant.  The
    hyperbolic case also carries the branch quadratic ``p2h`` (the equation
    restricted to the two asymptotic branches) and the resultant ``R`` of
    ``p2h`` with the cubic, whose vanishing marks the A4/A5 walls.
    """

    case: str
    a1: float
    b1: float
    a2: float
    b2: float
    J: float
    p3: tuple
    discriminant: float
    p2h: tuple = ()
    R: float = 0.0

    def numbers(self) -> dict:
        out = {"a1": self.a1, "b1": self.b1, "a2": self.a2, "b2": self.b2,
               "J": self.J, "p3_discriminant": self.discriminant}
        if self.case == "hyperbolic":
            out["R"] = self.R
        return out


def umbilic_test(surface: SurfaceJet, point=(0.0, 0.0), tol: float = 1e-9) -> str:
    """``elliptic_umbilic``, ``hyperbolic_umbilic`` or ``not_umbilic``.

    An umbilic is a zero of the whole direction equation: the shape operator
    is a multiple of the identity there.  The test is chart-free (it reads
    the pointwise frame); parabolic points raise
    :class:`~affina.errors.ParabolicPointError` from the frame itself.
    """
    fr = point_frame(surface, point)
    off = max(abs(fr.b12), abs(fr.b21), abs(fr.b11 - fr.b22))
    scale = max(abs(fr.b11), abs(fr.b12), abs(fr.b21), abs(fr.b22), 1.0)
    if off > tol * scale:
        return "not_umbilic"
    return "elliptic_umbilic" if fr.sign > 0 else "hyperbolic_umbilic"


def _umbilic_linear_closed(case: str, sigma: float, g) -> tuple:
    """Closed forms of (a1, b1, a2, b2) from the Pick-chart coefficients."""
    s3 = sigma ** 3
    if case == "elliptic":
        a1 = 0.5 * sigma * g("q31") - 0.25 * (g("q23") + g("q41"))
        b1 = (s3 - 0.25 * sigma * (3.0 * g("q40") + 5.0 * g("q22"))
              - 0.25 * (g("q14") + g("q32")))
        a2 = (s3 - 0.5 * sigma * (2.0 * g("q40") + g("q22"))
              + 0.125 * (g("q50") - g("q14")))
        b2 = 0.5 * sigma * g("q31") + 0.125 * (g("q41") - g("q05"))
    else:
        a1 = 0.5 * sigma * g("q31") + 0.25 * (g("q23") - g("q41"))
        b1 = (-s3 + 0.25 * sigma * (3.0 * g("q40") - 5.0 * g("q22"))
              + 0.25 * (g("q14") - g("q32")))
        a2 = (-s3 + 0.5 * sigma * (2.0 * g("q40") - g("q22"))
              - 0.125 * (g("q50") - g("q14")))
        b2 = -0.5 * sigma * g("q31") - 0.125 * (g("q41") - g("q05"))
    return a1, b1, a2, b2


def _check_umbilic_conditions(case: str, g, tol: float):
    """The chart conditions for the origin to be an umbilic, with margins."""
    qs = max(abs(g("q31")), abs(g("q13")), abs(g("q40")), abs(g("q04")), 1.0)
    mix = g("q31") + g("q13") if case == "elliptic" else g("q31") - g("q13")
    quart = g("q40") - g("q04")
    ok = abs(mix) <= tol * qs and abs(quart) <= tol * qs
    return ok, {"umbilic_mixed_quartic": mix / qs, "umbilic_diagonal_quartic": quart / qs}


def _cross_check_umbilic_jet(surface: SurfaceJet, case: str, vals: tuple,
                             tol: float = CROSS_CHECK_TOL):
    """Pipeline one-jet must be a positive multiple of the closed forms.

    Also enforces the Hessian identity det Hess(delta_lin) = +/- 64 J^2 on
    the pipeline's own discriminant, sign by case.
    """
    a1, b1, a2, b2 = vals
    sign = -1.0 if case == "elliptic" else 1.0
    jA, jB, jC = bde_jets_at(surface)
    sc0 = max(jA.max_abs(), jB.max_abs(), jC.max_abs(), 1e-300)
    consts = max(abs(jA.coeffs[0, 0]), abs(jB.coeffs[0, 0]), abs(jC.coeffs[0, 0]))
    if consts > tol * sc0:
        raise NumericalInconsistencyError(
            f"equation does not vanish at the claimed umbilic (constant terms {consts:.3g})")
    vec = np.array([jA.coeffs[1, 0], jA.coeffs[0, 1],
                    jB.coeffs[1, 0], jB.coeffs[0, 1],
                    jC.coeffs[1, 0], jC.coeffs[0, 1]])
    target = np.array([a1, b1, 2.0 * a2, 2.0 * b2, sign * a1, sign * b1])
    nt = float(np.dot(target, target))
    if nt == 0.0:
        if float(np.max(np.abs(vec))) > tol * sc0:
            raise NumericalInconsistencyError(
                "closed-form one-jet vanishes but the pipeline one-jet does not")
        return
    factor = float(np.dot(vec, target)) / nt
    resid = float(np.linalg.norm(vec - factor * target))
    ref = max(float(np.linalg.norm(vec)), abs(factor) * math.sqrt(nt))
    if factor <= 0.0 or resid > tol * max(ref, 1e-300):
        raise NumericalInconsistencyError(
            f"umbilic one-jet mismatch: closed form {target.tolist()} vs pipeline "
            f"{vec.tolist()} (factor {factor:.6g}, residual {resid:.3g})")
    # Hessian identity on the pipeline discriminant.
    jd = jB * jB - 4.0 * (jA * jC)
    al, be, ga = jd.coeffs[2, 0], jd.coeffs[1, 1], jd.coeffs[0, 2]
    det = 4.0 * al * ga - be * be
    J = a2 * b1 - a1 * b2
    want = (64.0 if case == "elliptic" else -64.0) * J * J
    floor = 1e-12 * (4.0 * abs(al) * abs(ga) + be * be + sc0 ** 2)
    if abs(det - want) > tol * max(abs(det), abs(want)) + floor:
        raise NumericalInconsistencyError(
            f"Hessian identity failed: det Hess = {det:.12g}, expected {want:.12g}")


def umbilic_linear_coeffs(surface: SurfaceJet, case: str = None,
                          tol: float = CROSS_CHECK_TOL) -> tuple:
    """Closed-form ``(a1, b1, a2, b2)`` of the equation's one-jet at a Pick umbilic.

    The surface must be in the matching Pick chart (raw Monge jets are
    accepted when their low-order coefficients already sit in one) and its
    origin must satisfy the umbilic coefficient conditions.  The result is
    cross-checked against the numeric one-jet of the equation, which must be
    a positive multiple of ``((a1, b1), (2 a2, 2 b2), -/+(a1, b1))``.
    """
    kind, params = named_coefficients(surface)
    chart_of = {"elliptic": "pick_elliptic", "hyperbolic": "pick_hyperbolic"}
    if case is None:
        case = {v: k for k, v in chart_of.items()}.get(kind)
        if case is None:
            raise WrongChartError(
                f"umbilic linearization needs a Pick chart, got {kind!r}")
    elif case not in chart_of:
        raise InvalidFormError(f"unknown umbilic case {case!r}")
    elif kind != chart_of[case]:
        raise WrongChartError(
            f"the {case} case needs the {chart_of[case]} chart, got {kind!r}")

    g = lambda name: float(params.get(name, 0.0))
    ok, margins = _check_umbilic_conditions(case, g, 1e-9)
    if not ok:
        raise WrongChartError(
            f"the chart origin is not an umbilic: margins {margins}")
    vals = _umbilic_linear_closed(case, g("sigma"), g)
    if surface.order >= 5:
        _cross_check_umbilic_jet(surface, case, vals, tol)
    return vals


def umbilic_invariants(a1: float, b1: float, a2: float, b2: float,
                       case: str) -> UmbilicInvariants:
    """Bundle the decision invariants of a linearized umbilic equation.

    Takes the linear coefficients directly, so model equations can be fed
    back through the classifiers without a surface behind them.
    """
    if case not in ("elliptic", "hyperbolic"):
        raise InvalidFormError(f"unknown umbilic case {case!r}")
    J = a2 * b1 - a1 * b2
    if case == "elliptic":
        p3 = (b1, a1 - 2.0 * b2, -(b1 + 2.0 * a2), -a1)
        disc, _ = _cubic_discriminant(*p3)
        return UmbilicInvariants(case, a1, b1, a2, b2, J, p3, disc)
    p3 = (b1, a1 + 2.0 * b2, b1 + 2.0 * a2, a1)
    disc, _ = _cubic_discriminant(*p3)
    p2h = (4.0 * (b2 * b2 - b1 * b1), 8.0 * (a2 * b2 - a1 * b1),
           4.0 * (a2 * a2 - a1 * a1))
    R = (64.0 * (a1 - b1 - a2 + b2) ** 2 * (a1 + b1 + a2 + b2) ** 2 * J ** 2)
    return UmbilicInvariants(case, a1, b1, a2, b2, J, p3, disc, p2h, R)


def _umbilic_gates(inv: UmbilicInvariants, tol: float):
    """Shared J / cubic-discriminant genericity gates; margins for the report."""
    Jscale = abs(inv.a2 * inv.b1) + abs(inv.a1 * inv.b2)
    _, dscale = _cubic_discriminant(*inv.p3)
    mJ = _margin(inv.J, Jscale)
    md = _margin(inv.discriminant, dscale)
    if abs(inv.J) <= tol * Jscale or Jscale == 0.0:
        raise DegenerateUmbilicError(f"J vanishes within tolerance (J = {inv.J:.3g})")
    if abs(inv.discriminant) <= tol * dscale or dscale == 0.0:
        raise DegenerateUmbilicError("the direction cubic has a repeated root")
    return mJ, md


def classify_elliptic_umbilic(inv: UmbilicInvariants,
                              tol: float = GENERICITY_TOL) -> str:
    """``D1``, ``D2`` or ``D3``; vanishing invariants raise instead.

    One transversal radial direction gives D1; three give D2 or D3, told
    apart by the sign of J.
    """
    if inv.case != "elliptic":
        raise InvalidFormError("elliptic classifier fed a non-elliptic record")
    _umbilic_gates(inv, tol)
    if inv.discriminant < 0.0:
        return "D1"
    return "D2" if inv.J < 0.0 else "D3"


def classify_hyperbolic_umbilic(inv: UmbilicInvariants,
                                tol: float = GENERICITY_TOL) -> str:
    """``A1`` ... ``A5``; vanishing invariants (J, cubic disc, R) raise.

    The resultant R vanishes exactly on the walls a2 + b1 = +/-(a1 + b2),
    so both linear factors are required to clear the tolerance before the
    comparison of a2 + b1 against |a1 + b2| is trusted.
    """
    if inv.case != "hyperbolic":
        raise InvalidFormError("hyperbolic classifier fed a non-hyperbolic record")
    _umbilic_gates(inv, tol)
    s4 = abs(inv.a1) + abs(inv.b1) + abs(inv.a2) + abs(inv.b2)
    e1 = (inv.a2 + inv.b1) - (inv.a1 + inv.b2)
    e2 = (inv.a2 + inv.b1) + (inv.a1 + inv.b2)
    if min(abs(e1), abs(e2)) <= tol * s4:
        raise DegenerateUmbilicError("the resultant R vanishes (branch wall)")
    if inv.discriminant < 0.0:
        return "A1" if inv.J < 0.0 else "A2"
    if e1 > 0.0 and e2 > 0.0:
        return "A3" if inv.J > 0.0 else "A4"
    if e1 < 0.0 and e2 < 0.0:
        return "A5"
    return "A4" if inv.J > 0.0 else "A5"


def _classify_umbilic(surface: SurfaceJet, kind: str, params: dict,
                      tol: float) -> SingularityReport:
    case = "elliptic" if kind == "pick_elliptic" else "hyperbolic"
    g = lambda name: float(params.get(name, 0.0))
    ok, cond_margins = _check_umbilic_conditions(case, g, tol)
    if not ok:
        # Not a zero of the equation: regular point, or a discriminant point
        # that wants the product chart instead.
        ds = solve_directions(curvature_bde(surface))
        if ds.kind == "double":
            return _degenerate(
                "fold point in a Pick chart; re-express in the product chart",
                margins=cond_margins)
        return _degenerate(
            "regular point: the equation does not vanish at the base point",
            margins=cond_margins)
    vals = umbilic_linear_coeffs(surface, case)
    inv = umbilic_invariants(*vals, case)
    genericity = {"umbilic": True}
    margins = dict(cond_margins)
    Jscale = abs(inv.a2 * inv.b1) + abs(inv.a1 * inv.b2)
    _, dscale = _cubic_discriminant(*inv.p3)
    margins["J"] = _margin(inv.J, Jscale)
    margins["p3_discriminant"] = _margin(inv.discriminant, dscale)
    genericity["J_nonzero"] = abs(inv.J) > tol * Jscale
    genericity["p3_discriminant_nonzero"] = (
        dscale > 0.0 and abs(inv.discriminant) > tol * dscale)
    if case == "hyperbolic":
        s4 = abs(inv.a1) + abs(inv.b1) + abs(inv.a2) + abs(inv.b2)
        e1 = (inv.a2 + inv.b1) - (inv.a1 + inv.b2)
        e2 = (inv.a2 + inv.b1) + (inv.a1 + inv.b2)
        margins["resultant_factor_1"] = _margin(e1, s4)
        margins["resultant_factor_2"] = _margin(e2, s4)
        genericity["resultant_nonzero"] = (
            s4 > 0.0 and min(abs(e1), abs(e2)) > tol * s4)
    try:
        tag = (classify_elliptic_umbilic(inv, tol) if case == "elliptic"
               else classify_hyperbolic_umbilic(inv, tol))
    except DegenerateUmbilicError as err:
        return _degenerate(str(err), inv.numbers(), genericity, margins, inv)
    return SingularityReport(tag, inv.numbers(), genericity, margins, inv)


# ---------------------------------------------------------------------------
# Folded points (product chart)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FoldedInvariants:
    """Decision data at a point where the line fields fold on the discriminant.

    ``transversality`` = q13 * theta decides the fold-cusp case; when it
    vanishes the point is a folded double point and the linearized lifted
    field takes over: ``lambda_sum`` and ``lambda_product`` are the trace
    and determinant of its nonzero eigenvalue pair, ``delta_lambda`` the
    discriminant separating real pairs from complex ones, and
    ``nondegeneracy`` the product expression whose vanishing ends the
    classification.
    """

    transversality: float
    theta: float
    T0: float
    delta_lambda: float
    lambda_sum: float
    lambda_product: float
    nondegeneracy: float

    def numbers(self) -> dict:
        return {"transversality": self.transversality, "theta": self.theta,
                "T0": self.T0, "delta_lambda": self.delta_lambda,
                "lambda_sum": self.lambda_sum,
                "lambda_product": self.lambda_product,
                "nondegeneracy": self.nondegeneracy}


def _swap_names(params: dict) -> dict:
    return {name[0] + name[2] + name[1]: val for name, val in params.items()}


def _cross_check_folded_eigen(surface: SurfaceJet, lam_sum: float,
                              lam_prod: float, tol: float = 1e-6):
    """Closed-form eigenvalue pair against the lifted-field linearization.

    The closed forms carry the same 4x normalization as the product-chart
    coefficient tables, so they equal 4x the package eigenvalues.  One
    eigenvalue of the three-dimensional linearization is structurally zero
    and is dropped.
    """
    lc = lie_cartan_field(curvature_bde(surface))
    eig = sorted(4.0 * lc.eigen_at(0.0, 0.0, 0.0), key=abs)
    big = max(1.0, max(abs(e) for e in eig))
    if abs(eig[0]) > tol * big:
        raise NumericalInconsistencyError(
            f"lifted field lacks the structural zero eigenvalue: {eig}")
    got_sum, got_prod = eig[1] + eig[2], eig[1] * eig[2]
    if abs(got_sum - lam_sum) > tol * max(big, abs(lam_sum)):
        raise NumericalInconsistencyError(
            f"eigenvalue sum mismatch: pipeline {got_sum:.9g}, closed form {lam_sum:.9g}")
    if abs(got_prod - lam_prod) > tol * max(big * big, abs(lam_prod)):
        raise NumericalInconsistencyError(
            f"eigenvalue product mismatch: pipeline {got_prod:.9g}, "
            f"closed form {lam_prod:.9g}")


def classify_folded(surface: SurfaceJet, tol: float = FOLDED_TOL,
                    cross_check: bool = True) -> SingularityReport:
    """Classify a fold of the curvature-line fields on the discriminant.

    Needs the product chart ``h = uv + ...`` with the double direction
    along du, i.e. q31 = 0 and q13 != 0; the mirrored chart (q13 = 0,
    q31 != 0) is relabeled through the u <-> v swap.  Returns FoldedCusp
    when the discriminant contact is transversal, otherwise the folded
    double-point types FoldedSaddle / FoldedNode / FoldedFocus by the
    eigenvalue data of the lifted field, cross-checked numerically.
    """
    kind, params = named_coefficients(surface)
    if kind != "buchin":
        raise WrongChartError(
            f"folded points live in the product chart, got {kind!r}")
    qscale = max([abs(float(v)) for v in params.values()] + [1.0])
    g = lambda name: float(params.get(name, 0.0))
    if abs(g("q31")) > tol * qscale:
        if abs(g("q13")) > tol * qscale:
            raise NotDiscriminantPointError(
                "q31 and q13 both nonzero: the discriminant does not pass "
                "through the base point")
        params = _swap_names(params)
        surface = normal_form_surface("buchin", params, surface.order)
        g = lambda name: float(params.get(name, 0.0))
    if abs(g("q13")) <= tol * qscale:
        return _degenerate(
            "the whole equation vanishes at the base point (q31 = q13 = 0); "
            "not a fold",
            margins={"q13": _margin(g("q13"), qscale),
                     "q31": _margin(g("q31"), qscale)})

    theta, theta_scale = _msum(2.0 * g("q03") * g("q30") ** 2,
                               -7.0 * g("q22") * g("q30"), 2.0 * g("q41"))
    trans = g("q13") * theta
    trans_scale = abs(g("q13")) * theta_scale
    T0, T0_scale = _msum(g("q03") * g("q40"), 4.0 * g("q13") * g("q30"),
                         -2.0 * g("q32"))
    dl, dl_scale = _msum(
        (g("q03") * g("q40")) ** 2,
        112.0 * g("q03") * g("q13") * g("q30") * g("q40"),
        160.0 * (g("q13") * g("q30")) ** 2,
        -4.0 * g("q03") * g("q32") * g("q40"),
        -192.0 * g("q13") * g("q22") * g("q40"),
        -192.0 * g("q13") * g("q30") * g("q32"),
        32.0 * g("q13") * g("q51"),
        4.0 * g("q32") ** 2)
    fac1, fac1_scale = _msum(18.0 * g("q13") * g("q30") ** 2,
                             13.0 * g("q03") * g("q30") * g("q40"),
                             -22.0 * g("q30") * g("q32"),
                             -24.0 * g("q22") * g("q40"),
                             4.0 * g("q51"))
    lam_sum = -16.0 * T0
    lam_prod = -512.0 * g("q13") * fac1
    inv = FoldedInvariants(trans, theta, T0, dl, lam_sum, lam_prod,
                           fac1 * T0)
    margins = {"q31": _margin(g("q31"), qscale),
               "q13": _margin(g("q13"), qscale),
               "transversality": _margin(trans, trans_scale)}
    genericity = {"double_direction": True, "q13_nonzero": True}

    if abs(trans) > tol * trans_scale:
        genericity["fold_transversality"] = True
        return SingularityReport("FoldedCusp", inv.numbers(), genericity,
                                 margins, inv)

    # Folded double point: the lifted field has a genuine equilibrium.
    margins["nondegeneracy_factor_1"] = _margin(fac1, fac1_scale)
    margins["nondegeneracy_factor_2"] = _margin(T0, T0_scale)
    margins["delta_lambda"] = _margin(dl, dl_scale)
    nondeg = (abs(fac1) > tol * fac1_scale and abs(T0) > tol * T0_scale)
    genericity["lifted_equilibrium"] = True
    genericity["double_nondegeneracy"] = nondeg
    if cross_check:
        _cross_check_folded_eigen(surface, lam_sum, lam_prod)
    if not nondeg:
        return _degenerate("folded double point fails the nondegeneracy product",
                           inv.numbers(), genericity, margins, inv)
    genericity["eigen_discriminant_nonzero"] = abs(dl) > tol * dl_scale
    if not genericity["eigen_discriminant_nonzero"]:
        return _degenerate("eigenvalue discriminant vanishes (node/focus wall)",
                           inv.numbers(), genericity, margins, inv)
    if dl < 0.0:
        tag = "FoldedFocus"
    elif lam_prod > 0.0:
        tag = "FoldedNode"
    else:
        tag = "FoldedSaddle"
    return SingularityReport(tag, inv.numbers(), genericity, margins, inv)


# ---------------------------------------------------------------------------
# Parabolic points (parabolic chart)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussCuspInvariants:
    """Decision data at a parabolic point whose asymptotic direction has
    second-order contact with the parabolic set (q30 = 0).

    ``b01`` is the modulus of the reduced equation; ``b20`` the companion
    coefficient, computed from the b01-only identity of the matching branch
    (isolated discriminant for s > 0, two crossing branches for s < 0).
    ``P11, P12, P22`` are the principal-part coefficients of the equation's
    discriminant (P11 u^4 + P12 u^2 v + P22 v^2), ``alphas`` the branch
    slopes v = alpha u^2 when real, and ``hessP`` the Hessian determinant of
    the principal part's defining product formula.
    """

    k: float
    q21: float
    q40: float
    cuspcheck: float
    s: float
    corank_check: float
    b01: float
    b20: float
    P11: float
    P12: float
    P22: float
    hessP: float
    alphas: tuple = ()

    def numbers(self) -> dict:
        out = {"k": self.k, "q21": self.q21, "q40": self.q40,
               "cuspcheck": self.cuspcheck, "s": self.s,
               "corank_check": self.corank_check, "b01": self.b01,
               "b20": self.b20, "P11": self.P11, "P12": self.P12,
               "P22": self.P22, "hessP": self.hessP}
        for i, a in enumerate(self.alphas, start=1):
            out[f"alpha{i}"] = a
        return out


_SQRT21 = math.sqrt(21.0)
# Walls of the b01 strata; 1/4 is the excluded modulus inside the last one.
_B01_WALLS = (-(5.0 + _SQRT21) / 4.0, -1.0, -0.5, -2.0 / 7.0,
              (_SQRT21 - 5.0) / 4.0, 0.0, 0.25)


def _b20_from_b01(b01: float, s_positive: bool) -> float:
    num = 4.0 * b01 * b01 + 13.0 * b01 + 4.0
    rad = (2.0 * b01 + 1.0) * (7.0 * b01 + 2.0)
    rad = -rad if s_positive else rad
    return -(math.sqrt(2.0) / 4.0) * num / math.sqrt(rad)


def _cross_check_gauss_cusp(surface: SurfaceJet, P11: float, P12: float,
                            P22: float, tol: float = 1e-6):
    """Numeric discriminant principal part against the closed forms.

    The coefficients of u^4, u^2 v and v^2 of the pipeline discriminant must
    match P11, P12, P22, and every monomial below the (1, 2)-weighted Newton
    polygon must vanish.
    """
    jd = curvature_bde(surface).discriminant()
    want = {(4, 0): P11, (2, 1): P12, (0, 2): P22}
    ref = max(abs(P11), abs(P12), abs(P22))
    for (i, j), w in want.items():
        got = float(jd.coeffs[i, j])
        if abs(got - w) > tol * max(abs(got), abs(w), 1e-9 * ref):
            raise NumericalInconsistencyError(
                f"discriminant principal part mismatch at u^{i} v^{j}: "
                f"pipeline {got:.9g}, closed form {w:.9g}")
    for (i, j) in ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0)):
        got = float(jd.coeffs[i, j])
        if abs(got) > tol * ref:
            raise NumericalInconsistencyError(
                f"discriminant has a sub-principal term u^{i} v^{j} = {got:.3g}")


def gauss_cusp_invariants(k: float, q21: float, q40: float,
                          surface: SurfaceJet = None,
                          tol: float = GENERICITY_TOL) -> GaussCuspInvariants:
    """Invariants of a parabolic point with q30 = 0.

    Needs the nondegeneracy 3 q21^2 - k q40 != 0 (second-order contact),
    q21 != 0 (corank one) and 9 q21^2 - 4 k q40 != 0 (b01 != 0); the
    remaining wall s = k q40 - 4 q21^2 = 0 is reported, not rejected, since
    b01 stays well-defined there.  When a surface is supplied, the
    discriminant principal part P11 u^4 + P12 u^2 v + P22 v^2 is
    cross-checked against the numeric pipeline.
    """
    cusp, cusp_scale = _msum(3.0 * q21 * q21, -k * q40)
    corank, corank_scale = _msum(9.0 * q21 * q21, -4.0 * k * q40)
    s, _ = _msum(k * q40, -4.0 * q21 * q21)
    if abs(cusp) <= tol * cusp_scale or cusp_scale == 0.0:
        raise InvalidFormError(
            "cusp invariants need 3 q21^2 - k q40 != 0 (the contact is of "
            "higher order here)")
    if abs(q21) <= tol * max(abs(q21), abs(k), abs(q40), 1.0):
        raise InvalidFormError("cusp invariants need q21 != 0 (corank one)")
    b01 = -(corank / cusp) / 14.0
    P22 = k ** 4 * q21 ** 2 * corank ** 2
    P12 = -k ** 3 * q21 * (40.0 * k ** 3 * q40 ** 3
                           - 554.0 * k ** 2 * q21 ** 2 * q40 ** 2
                           + 2211.0 * k * q21 ** 4 * q40
                           - 2736.0 * q21 ** 6)
    P11 = 0.25 * k ** 2 * (100.0 * k ** 4 * q40 ** 4
                           - 948.0 * k ** 3 * q21 ** 2 * q40 ** 3
                           + 3513.0 * k ** 2 * q21 ** 4 * q40 ** 2
                           - 6240.0 * k * q21 ** 6 * q40
                           + 4608.0 * q21 ** 8)
    hessP = 2.0 ** 14 * 7.0 ** 3 * k ** 6 * q21 ** 4 * s * cusp ** 4
    b20 = math.nan
    if abs(corank) > tol * corank_scale and s != 0.0:
        b20 = _b20_from_b01(b01, s > 0.0)
    alphas = ()
    if s < 0.0 and abs(corank) > tol * corank_scale:
        roots = np.roots([P22, P12, P11])
        alphas = tuple(sorted(float(r.real) for r in roots))
    if surface is not None:
        _cross_check_gauss_cusp(surface, P11, P12, P22)
    return GaussCuspInvariants(k, q21, q40, cusp, s, corank, b01, b20,
                               P11, P12, P22, hessP, alphas)


def classify_parabolic(surface: SurfaceJet,
                       tol: float = GENERICITY_TOL) -> SingularityReport:
    """Classify the base point of a parabolic-chart surface jet.

    q30 != 0 gives an ordinary parabolic point (the parabolic arc itself is
    a leaf of the closure of the principal foliation).  q30 = 0 leads to the
    gauss-cusp ladder: the isolated-discriminant type for s > 0 and the
    five crossing-branch strata of the modulus b01 for s < 0; every wall of
    the ladder reports Degenerate instead of guessing a side.
    """
    kind, params = named_coefficients(surface)
    if kind != "parabolic":
        raise WrongChartError(
            f"parabolic classification needs the parabolic chart, got {kind!r}")
    g = lambda name: float(params.get(name, 0.0))
    k = g("k")
    qscale = max([abs(float(v)) for v in params.values()] + [1.0])
    q30, q21, q40 = g("q30"), g("q21"), g("q40")
    if abs(q30) > tol * qscale:
        return SingularityReport(
            "OrdinaryParabolic",
            {"k": k, "q30": q30, "q21": q21},
            {"q30_nonzero": True, "parabolic_arc_is_leaf": True},
            {"q30": _margin(q30, qscale)})

    margins = {"q30": _margin(q30, qscale)}
    genericity = {"q30_vanishes": True}
    cusp, cusp_scale = _msum(3.0 * q21 * q21, -k * q40)
    corank, corank_scale = _msum(9.0 * q21 * q21, -4.0 * k * q40)
    s, s_scale = _msum(k * q40, -4.0 * q21 * q21)
    margins["cuspcheck"] = _margin(cusp, cusp_scale)
    margins["corank_check"] = _margin(corank, corank_scale)
    margins["s"] = _margin(s, s_scale)
    margins["q21"] = _margin(q21, qscale)
    if abs(q21) <= tol * qscale:
        return _degenerate("corank-two point: q21 = 0", {}, genericity, margins)
    if abs(cusp) <= tol * cusp_scale:
        return _degenerate(
            "gauss direction with higher-order contact: 3 q21^2 - k q40 = 0",
            {}, genericity, margins)
    if abs(corank) <= tol * corank_scale:
        return _degenerate("b01 = 0: 9 q21^2 - 4 k q40 = 0", {}, genericity,
                           margins)
    if abs(s) <= tol * s_scale:
        return _degenerate(
            "discriminant branch of type A_k, k > 3: k q40 - 4 q21^2 = 0",
            {}, genericity, margins)
    genericity.update(q21_nonzero=True, cuspcheck_nonzero=True,
                      corank_check_nonzero=True, s_nonzero=True)

    inv = gauss_cusp_invariants(k, q21, q40, surface=surface, tol=tol)
    b01 = inv.b01
    wall_gap = min(abs(b01 - w) for w in _B01_WALLS)
    margins["b01_wall_gap"] = wall_gap / max(1.0, abs(b01))
    if wall_gap <= 1e-9 * max(1.0, abs(b01)):
        genericity["off_stratum_walls"] = False
        return _degenerate("boundary", inv.numbers(), genericity, margins, inv)
    genericity["off_stratum_walls"] = True

    if inv.s > 0.0:
        if not (-0.5 < b01 < -2.0 / 7.0):
            raise NumericalInconsistencyError(
                f"s > 0 forces b01 in (-1/2, -2/7), got {b01:.9g}")
        tag = "GaussCuspA3Plus"
    elif b01 < _B01_WALLS[0]:
        tag = "GaussCuspR1"
    elif b01 < -1.0:
        tag = "GaussCuspR2"
    elif b01 < -0.5:
        tag = "GaussCuspR3"
    elif b01 < -2.0 / 7.0:
        raise NumericalInconsistencyError(
            f"s < 0 excludes b01 in (-1/2, -2/7), got {b01:.9g}")
    elif b01 < _B01_WALLS[4]:
        tag = "GaussCuspR3"
    elif b01 < 0.0:
        tag = "GaussCuspR4"
    else:
        tag = "GaussCuspR5"
    return SingularityReport(tag, inv.numbers(), genericity, margins, inv)


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------


def classify(surface: SurfaceJet, tol: float = GENERICITY_TOL) -> SingularityReport:
    """Classify the base point of a surface jet given in an adapted chart.

    Dispatches on the detected normal form: Pick charts run the umbilic
    pipeline, the product chart the folded one, the parabolic chart the
    parabolic/gauss-cusp ladder.  An identically vanishing equation reports
    AffineSphereFlat; base points where nothing degenerates report
    ``Degenerate(regular point ...)``, as do inputs whose margins sit on a
    decision wall.  Raises only for invalid input (unrecognized chart) or an
    internal closed-form/pipeline disagreement.
    """
    kind, params = named_coefficients(surface)
    bde = curvature_bde(surface)
    if bde.is_identically_zero():
        return SingularityReport("AffineSphereFlat", {},
                                 {"equation_vanishes_identically": True}, {})
    if kind in ("pick_elliptic", "pick_hyperbolic"):
        return _classify_umbilic(surface, kind, params, tol)
    if kind == "buchin":
        try:
            return classify_folded(surface)
        except NotDiscriminantPointError as err:
            return _degenerate(f"regular point: {err}")
    return classify_parabolic(surface, tol)
