"""
Monotonicity monitors on sampled fields
=======================================

Sample exact fields on a polar meridian grid and evaluate the Weiss-type
energy M(r), the two-phase ACF product Phi(r) and the blow-up rescaling.
"""

import numpy as np

from ehd_lab import beta_star_connected, matched_homogeneity
from ehd_lab.fields import (
    acf_phi,
    field_from_function,
    flux_identity_residual,
    matched_field,
    monitor,
    rescale_field,
    weiss_m,
)

# %%
# One-phase exact solutions: the gas branch u = x2 (homogeneous of degree 1)
# and the fluid branch u = -x1^2.  At beta = 1 the energy M vanishes
# identically, up to the O(h^2) quadrature error.
gas = field_from_function(lambda x1, x2: x2, 128, 128, phase="gas")
fluid = field_from_function(lambda x1, x2: -(x1**2), 128, 128)
for name, f in (("u = x2", gas), ("u = -x1^2", fluid)):
    radii = f.r[(f.r >= 0.2) & (f.r <= 0.9)]
    m = max(abs(weiss_m(f, r, 1.0)) for r in radii)
    flux = max(flux_identity_residual(f, r) for r in radii)
    print(f"{name:10s} max|M| = {m:.2e}  flux residual = {flux:.2e}  tol = {f.tolerance():.2e}")

# %%
# The matched two-phase cone is homogeneous with exponent alpha*.  Phi needs
# both phases, so it vanishes on the one-phase fields.
m = matched_homogeneity()
two = matched_field(128, 256, matched=m)
beta_star = beta_star_connected(n_scan=64).best_value
print(f"Phi on one-phase fields: {acf_phi(gas, 0.5, beta_star)}, {acf_phi(fluid, 0.5, beta_star)}")

phi = monitor(two, "phi", beta_star=beta_star)
for r, v in list(zip(phi.radii, phi.values))[::16]:
    print(f"  r = {r:.3f}  Phi = {v:.6e}")
print(f"smallest step of Phi: {np.min(np.diff(phi.values)):.2e}")

# %%
# Rescaling u_m(x) = u(r_m x) / r_m^gamma (gas) and / r_m^(gamma+1) (fluid)
# multiplies Phi(1) by a fixed power of r_m.
gamma = 0.25
for rm in (0.5, 0.25):
    g = rescale_field(two, rm, gamma)
    lhs = acf_phi(g, 1.0, beta_star)
    rhs = rm ** (2 * (beta_star - 2 * gamma - 1)) * acf_phi(two, rm, beta_star)
    print(f"r_m = {rm}: Phi(1, rescaled) = {lhs:.10e}, predicted {rhs:.10e}")
