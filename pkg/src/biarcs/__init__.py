"""Balanced biarc interpolation of closed space curves, discrete and
continuous tangent-point energies, thickness, ropelength, and the
experiments tying them together."""

from .biarc import (
    Arc,
    Biarc,
    ImproperPairError,
    IncompatiblePairError,
    PairClass,
    PointTangent,
    balanced_matching_point,
    biarc_parameter,
    build_balanced_biarc,
    classify_pair,
    eval_biarc,
)
from .curve import (
    CurveDiagnostics,
    CurveSpec,
    Mollifier,
    Partition,
    analytic_curve,
    arclength_reparametrize,
    curve_diagnostics,
    gagliardo_seminorm,
    make_partition,
    mollify,
    preset_curve,
    standard_mollifier,
    tangent_modulus,
)
from .energy import (
    EnergyReport,
    HolderCheck,
    continuous_tp_energy,
    discrete_tp_energy,
    holder_bound_check,
    ropelength_proxy,
    thickness_and_ropelength,
)
from .geom import (
    Line,
    circumradius,
    project_onto_direction,
    reflect_about,
    tangent_point_radius,
)
from .interpolate import (
    BiarcCurve,
    BiarcCurveBuildError,
    build_biarc_curve,
    c1_distance,
    check_Bn,
    eval_biarc_curve,
    from_junctions,
    junctions_from_text,
    junctions_to_text,
)
from .optimize import AnnealConfig, AnnealTrace, anneal_discrete, trace_to_csv

__version__ = "0.1.0"
