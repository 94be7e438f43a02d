"""Lightcone framed surfaces in Lorentz-Minkowski 3-space.

Basic invariants, extended curvatures, lightlike point classification and
focal sheets, all computed from truncated Taylor jets of the defining
expressions.
"""

__version__ = "0.1.0"

from ._tol import tolerance
from .errors import *  # noqa: F401,F403
from .jet import Jet
from .expr import eval_jet, parse_expr, to_source
from .minkowski import (CausalCharacter, causal_character, mvec, pseudo_inner, pseudo_norm,
                        wedge)
from .curve import FramedCurve, adapted_rescale, curve_invariants
from .surface import (InvariantField, SurfaceDef, build_surface, integrability_residuals,
                      invariant_grid, invariants_at, stratify, validate_surface)
from .curvature import curvature_bundle, principal, principal_curvatures, weingarten_oracle
from .lightlike import (classify_lightlike, curvature_limit_probe, null_vector,
                        trace_lightlike_locus)
from .focal import (focal_curvatures, focal_grid, focal_invariants, focal_point, mu_roots,
                    relation_checks)
from .fixtures import builtin, paper_example, twisted_revolution
from .config import RunConfig, load_config
from .report import export_mesh, run_analyze, run_probe
