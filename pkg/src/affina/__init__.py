"""affina: affine (Blaschke) differential geometry of Monge-chart surface jets.

The package computes the affine normal and shape data of a polynomial surface
jet z = h(u, v), builds the binary differential equation of affine curvature
lines with exact polynomial coefficients, classifies its singular points
(affine umbilics, double-eigenvalue points, parabolic points, Gauss cusps),
and traces/renders the principal configurations.
"""

from .errors import (
    AffinaError,
    DegeneratePortraitError,
    DegenerateUmbilicError,
    InvalidFormError,
    InvalidSceneError,
    NoRealDirectionError,
    NotDiscriminantPointError,
    NumericalInconsistencyError,
    OrderMismatchError,
    ParabolicPointError,
    SingularJetError,
    SingularZeroSetError,
    SpecFileError,
    WrongChartError,
)
from .jets import Jet2, jet_pow
from .geometry import (
    PointFrame,
    PrincipalData,
    SurfaceJet,
    affine_normal_jet,
    frame_jets,
    named_coefficients,
    normal_form_surface,
    point_frame,
    principal_data,
)
from .bde import (
    CurvatureBDE,
    DirectionSet,
    Polyline,
    asymptotic_bde,
    bde_jets_at,
    bde_numerators,
    blowup_portrait,
    curvature_bde,
    foliation,
    integrate_curvature_line,
    lie_cartan_field,
    model_bde,
    solve_directions,
    third_form_numerators,
    trace_zero_curve,
)
from .classify import (
    FoldedInvariants,
    GaussCuspInvariants,
    SingularityReport,
    UmbilicInvariants,
    classify,
    classify_elliptic_umbilic,
    classify_folded,
    classify_hyperbolic_umbilic,
    classify_parabolic,
    gauss_cusp_invariants,
    umbilic_invariants,
    umbilic_linear_coeffs,
    umbilic_test,
)
from .render import (
    Layer,
    Marker,
    Scene,
    configuration_scene,
    render_svg,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
