"""Classical and quantum kicked rotor, coined quantum walks, and their alternation."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .lattice import (MomentumLattice, QuantumState, mean_p, momentum_grid, to_angle,  # noqa: F401
                      to_momentum, variance_p)
from .classical import ClassicalEnsemble, d0, d_rho, evolve_classical, standard_map_step  # noqa: F401
from .bessel import bessel_j2, bessel_jn  # noqa: F401
from .kicked_rotor import (KrParams, floquet_kr_step, free_half_step, kick_matrix_element,  # noqa: F401
                           kick_step, tail_mass)
from .walk import WalkSpec, build_symmetric_initial, haar_coin, hadamard, qw_step, run_walk  # noqa: F401
from .combined import CombinedParams, combined_step, lift_kr, theory_localization  # noqa: F401
from .series import ShapeHistogram, VarianceSeries  # noqa: F401
from .analysis import (fit_ls, fit_scan_curve, kappa_scan, recentered_histogram,  # noqa: F401
                       shape_model, slope_loglog)
from .rng import derive_stream  # noqa: F401
