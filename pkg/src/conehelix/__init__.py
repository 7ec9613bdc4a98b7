"""Curves on the lightlike cone Q^{n+1} in E_1^{n+2} and their V_n-slant helix analysis."""

__version__ = "0.1.0"

from .errors import ConeError
from .lorentz import (
    AsymptoticFrame,
    CausalClass,
    LorentzVector,
    canonical_frame,
    causal_class,
    gram_residual,
    lorentz_inner,
    reproject_frame,
)
from .profiles import CurvatureProfile, eval_profile, make_profile
from .frenet import Trajectory, frenet_residual, sample_at, synthesize
from .curves import (
    CurveSamples,
    arclength_reparametrize,
    on_cone_residual,
    preset_curve,
    recover_frame_n1,
)
from .slant import (
    axis_from_harmonics,
    detect_slant_axis,
    eta_from_axis,
    eta_ode_residual,
    g_consistency_residual,
    g_functions,
    harmonic_ode_integrate,
    harmonic_recursion_residual,
    harmonics_from_eta,
    unit_axis_identity_residual,
)
