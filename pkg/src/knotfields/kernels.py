"""Active kernel set, selected once at import time (see ``backend``)."""

from . import backend

if backend.NUMBA_AVAILABLE:
    from . import _kernels_numba as _impl
else:
    from . import _kernels_numpy as _impl

STATUS_OK = 0
STATUS_ON_CURVE = 1
STATUS_AXIS_EXHAUSTED = 2
STATUS_DEGENERATE = 3

#: quiet sentinel stored at on-curve grid nodes (outside [0, 4pi))
OMEGA_SENTINEL = -1.0

ON_CURVE_EPS = _impl.ON_CURVE_EPS
SURFACE_EPS = _impl.SURFACE_EPS

mod4pi = _impl.mod4pi
min_segment_distance = _impl.min_segment_distance
vertex_min_axis_denom = _impl.vertex_min_axis_denom
fan_sweep = _impl.fan_sweep
quad_sweep = _impl.quad_sweep
omega_inf_block = _impl.omega_inf_block
writhe_sum = _impl.writhe_sum
linking_sum = _impl.linking_sum
twist_integral = _impl.twist_integral
tangent_dev_integral = _impl.tangent_dev_integral
tangent_dev_block = _impl.tangent_dev_block
arc_crossings = _impl.arc_crossings
turning_sum = _impl.turning_sum
gauss_bonnet_point = _impl.gauss_bonnet_point
gauss_bonnet_block = _impl.gauss_bonnet_block
homotopy_sum = _impl.homotopy_sum
distance_block = _impl.distance_block
min_self_distance = _impl.min_self_distance
min_cross_distance = _impl.min_cross_distance
