"""Numerical lab for axisymmetric two-phase electrohydrodynamic free boundaries.

Modules:

- ``arcs``: weighted eigenproblems on arcs of the half-circle, homogeneity
  exponents, the matched exponent and the Taylor-cone angle.
- ``partition``: searches for the infimum of the ACF split value.
- ``fields``: sampled two-phase fields and monitor identities.
- ``solver``: finite-difference solver for the regularized transformed equation.
- ``tables``: plain-text field / curve I/O.
- ``cli``: the ``ehd-lab`` command.
"""

__version__ = "0.1.0"

from .arcs import (  # noqa: E402
    Arc,
    ArcSet,
    EigenResult,
    Phase,
    alpha_of,
    eigenvalue,
    extrapolated_eigenvalue,
    i_minus,
    i_plus,
    matched_homogeneity,
    shoot_oracle,
    taylor_cone,
)
from .errors import NumericalError, ValidationError  # noqa: E402
from .fields import MeridianField, MonitorCurve, FreeBoundaryCurve  # noqa: E402
from .partition import SplitConfig, beta_star_connected, beta_star_two_component, split_value  # noqa: E402
from .solver import SolverConfig, SolverState, solve  # noqa: E402
