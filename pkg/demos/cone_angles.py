"""
Cone angles from the arc eigenproblem
=====================================

Homogeneous solutions of the two-phase problem are products r^alpha f(theta).
The angular factor is the ground state of a weighted eigenproblem on an arc
of the meridian half circle.  This script walks through the electrostatic
Taylor cone and the matched two-phase cone.
"""

import math

import numpy as np

from ehd_lab.arcs import PI, eigenvalue, extrapolated_eigenvalue, legendre_first_zero, matched_homogeneity, shoot_oracle, taylor_cone

# %%
# A gas cap ending at the equator has the exact ground state cos(theta),
# so lambda = 2 and the homogeneity is alpha = 1 (the field u = x2).
res = eigenvalue((0.0, PI / 2), "gas", 2048)
print(f"gas cap (0, pi/2): lambda = {res.lam:.8f}, alpha = {res.alpha:.8f}")

# %%
# The fluid weight 1/sin(theta) blows up on the axis, so fluid arcs carry a
# Dirichlet condition there.  The full half circle has ground state sin^2.
res = eigenvalue((0.0, PI), "fluid", 2048)
print(f"fluid (0, pi): lambda = {res.lam:.8f}, alpha = {res.alpha:.8f}")

# %%
# Taylor cone: the gas cap whose exponent is exactly 1/2.  The fluid cone
# opening is twice the angle between the cone and the opposite axis.
cone = taylor_cone()
print(f"theta_T = {math.degrees(cone.theta_T):.4f} deg, fluid opening = {cone.opening_deg:.3f} deg")
print(f"first zero of P_1/2 from its hypergeometric series: {math.degrees(legendre_first_zero(0.5)):.4f} deg")

# %%
# Matched homogeneity: the gas cap (0, pi - theta1) and the fluid cap
# (0, theta1) at the other pole share one exponent, with 1 + alpha+ = alpha-.
m = matched_homogeneity()
print(f"theta1 = {m.theta1:.8f}, alpha* = {m.alpha_star:.8f}, residual = {m.residual:.1e}")
print(f"shooting check of lambda+: {shoot_oracle(m.gas_arc, 'gas'):.8f} vs grid {m.lambda_star:.8f}")

# %%
# Interior arcs have no closed form.  The raw grid value is O(h^2) off;
# one Richardson step brings it onto the shooting value.
for arc in [(0.3, 1.1), (1.0, 2.5), (0.5, PI)]:
    for phase in ("gas", "fluid"):
        g = eigenvalue(arc, phase, 2048).lam
        x = extrapolated_eigenvalue(arc, phase, 2048)
        s = shoot_oracle(arc, phase)
        print(f"{phase:5s} ({arc[0]:.2f}, {arc[1]:.2f}): grid {g:.9f}  extrapolated {x:.9f}  shooting {s:.9f}")

print("gas cap exponents across the half circle:")
for hi in np.linspace(0.5, 3.0, 6):
    print(f"  (0, {hi:.2f}) -> alpha+ = {eigenvalue((0.0, hi), 'gas', 1024).alpha:.5f}")
