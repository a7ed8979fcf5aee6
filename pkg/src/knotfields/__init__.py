"""Solid-angle fields of knotted curves and links.

Computes the solid angle function of any oriented closed curve or link by
several independent routes, extracts the induced framing, and builds knotted
scalar and director fields on volumetric grids.
"""

__version__ = "0.1.0"

from .backend import BACKEND, NUMBA_AVAILABLE
from .curve import (CurveFormatError, CurveValidationError, Link,
                    OrientedCurve, ResolutionError, as_link, dump_link,
                    frenet_frames, fuller_writhe_mod2, gauss_linking,
                    linking_number, load_link, make_curve, projective_twist,
                    resample, writhe)
from .fields import (VectorField, distance_field, full_director,
                     planar_director, scroll_phase)
from .framing import (Framing, FramingError, exact_circle_omega,
                      framing_self_link, hyperbola_projection,
                      local_omega_model, oracle_circle_points,
                      solid_angle_framing)
from .solidangle import (EVALUATORS, OMEGA_SENTINEL, EvalConfig,
                         EvaluationError, GridSpec, ScalarField,
                         homotopy_delta, omega_grid, omega_point,
                         omega_point_infinity,
                         omega_point_infinity_quadrature,
                         omega_point_tangent_dev)
from .spherical import (GeneralPositionError, SphericalPolyline,
                        crossing_count, dual_curve, dual_signed_length,
                        omega_gauss_bonnet, project, total_turning)

__all__ = [name for name in dir() if not name.startswith("_")]
