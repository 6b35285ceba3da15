"""Sampled two-phase meridian fields and the integral monitors built on them.

A :class:`MeridianField` stores ``u`` on a polar grid around a center point.
For a center on the symmetry axis the grid covers the half-disk with
``theta_j = (j - 1/2) dtheta``, ``dtheta = pi / n_theta`` (never on the axis);
for a center with ``x1 > r_max`` it covers the full disk.  Radii are
``r_i = i dr`` for ``i = 1..n_r``.  Coordinates:

    x1 = c1 + r sin(theta),   x2 = c2 + r cos(theta).

The gas part ``u+`` (weight ``x1``) and fluid part ``u-`` (weight ``1/x1``)
are selected by a per-node phase label, by default ``sign(u)``.  An explicit
label lets a single smooth function be treated as one phase on the whole
disk, e.g. ``u = x2`` as a gas field.

Volume integrals over ``B_r`` are radial integrals of ring integrals taken
on the grid circles; off-grid radii are handled by cubic interpolation of
the ring data.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from .arcs import PI, EigenResult, Phase
from .errors import ResolutionError, SupportError, SupportOverlapError, ValidationError

GAS, NONE, FLUID = 1, 0, -1

# identity-check tolerance: C1 * h**2 + C2 * field scale
TOL_C1 = 10.0
TOL_C2 = 1e-10


@dataclass(frozen=True, eq=False)
class MeridianField:
    values: np.ndarray
    dr: float
    phase: np.ndarray | None = None
    center: tuple = (0.0, 0.0)
    full_circle: bool = False
    provenance: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or min(values.shape) < 4:
            raise ValidationError(f"values must be an (n_r, n_theta) array with both sizes >= 4, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValidationError("field values must be finite")
        if not self.dr > 0:
            raise ValidationError(f"dr must be positive, got {self.dr!r}")
        if self.phase is None:
            phase = np.sign(values).astype(np.int8)
        else:
            phase = np.array(self.phase, dtype=np.int8)
            if phase.shape != values.shape or not np.isin(phase, (GAS, NONE, FLUID)).all():
                raise ValidationError("phase must match values in shape and hold -1, 0, 1")
        center = (float(self.center[0]), float(self.center[1]))
        r_max = self.dr * values.shape[0]
        if self.full_circle:
            if not center[0] > r_max:
                raise ValidationError("a full-disk field must stay off the axis: need c1 > r_max")
        elif center[0] != 0.0:
            raise ValidationError("a half-disk field must be centered on the axis (c1 = 0)")
        values.setflags(write=False)
        phase.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "dr", float(self.dr))

    # --- grid -------------------------------------------------------------

    @property
    def n_r(self) -> int:
        return self.values.shape[0]

    @property
    def n_theta(self) -> int:
        return self.values.shape[1]

    @property
    def dtheta(self) -> float:
        return (2 * PI if self.full_circle else PI) / self.n_theta

    @property
    def r(self) -> np.ndarray:
        return self.dr * np.arange(1, self.n_r + 1)

    @property
    def theta(self) -> np.ndarray:
        return (np.arange(self.n_theta) + 0.5) * self.dtheta

    @property
    def r_max(self) -> float:
        return self.dr * self.n_r

    @property
    def h(self) -> float:
        """Mesh size used in tolerances: the larger of ``dr`` and ``dtheta``."""
        return max(self.dr, self.dtheta)

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.values)))

    def tolerance(self, c1: float = TOL_C1, c2: float = TOL_C2) -> float:
        return c1 * self.h**2 + c2 * self.scale

    @functools.cached_property
    def _mesh(self):
        rr, tt = np.meshgrid(self.r, self.theta, indexing="ij")
        return rr, tt, self.center[0] + rr * np.sin(tt), self.center[1] + rr * np.cos(tt)

    @property
    def x1(self) -> np.ndarray:
        return self._mesh[2]

    @property
    def x2(self) -> np.ndarray:
        return self._mesh[3]

    def part(self, sign: int) -> np.ndarray:
        return np.where(self.phase == sign, self.values, 0.0)

    @property
    def gas(self) -> np.ndarray:
        return self.part(GAS)

    @property
    def fluid(self) -> np.ndarray:
        return self.part(FLUID)

    # --- derivatives ------------------------------------------------------

    @functools.cached_property
    def _gradients(self) -> dict:
        return {}

    def polar_gradient(self, sign: int):
        """``(d/dr, d/dtheta)`` of the phase part ``sign``, zero off that phase.

        Central differences inside the phase, second-order one-sided
        differences next to other phases and at the radial ends, first-order
        one-sided where only one same-phase neighbour exists.
        """
        if sign not in self._gradients:
            mask = self.phase == sign
            u = self.values
            d_r = _masked_derivative(u, mask, self.dr, axis=0, ghosts="none")
            ghosts = "wrap" if self.full_circle else "symmetric"
            d_t = _masked_derivative(u, mask, self.dtheta, axis=1, ghosts=ghosts)
            self._gradients[sign] = (d_r, d_t)
        return self._gradients[sign]

    def cartesian_gradient(self, sign: int):
        d_r, d_t = self.polar_gradient(sign)
        rr, tt = self._mesh[0], self._mesh[1]
        s, c = np.sin(tt), np.cos(tt)
        g1 = d_r * s + d_t * c / rr
        g2 = d_r * c - d_t * s / rr
        return g1, g2

    def grad_sq(self, sign: int) -> np.ndarray:
        d_r, d_t = self.polar_gradient(sign)
        return d_r**2 + (d_t / self._mesh[0]) ** 2

    def weight(self, sign: int) -> np.ndarray:
        return self.x1 if sign == GAS else 1.0 / self.x1

    def cell_lengths(self, sign: int) -> np.ndarray:
        """Angular quadrature weights of the nodes in phase ``sign``.

        Interior nodes get ``dtheta``.  A node whose angular neighbour leaves
        the phase gets ``dtheta/2`` plus the distance to the zero crossing,
        estimated by linear extrapolation from the node and its same-phase
        neighbour; this keeps ring integrals of phase-truncated integrands
        second order.  Falls back to ``dtheta`` when no crossing is found.
        """
        key = ("cells", sign)
        if key in self._gradients:
            return self._gradients[key]
        dt = self.dtheta
        mask = self.phase == sign
        u = self.values
        mode = "wrap" if self.full_circle else "symmetric"
        mp = np.pad(mask, ((0, 0), (1, 1)), mode=mode)
        up = np.pad(u, ((0, 0), (1, 1)), mode=mode)
        if not self.full_circle:
            mp[:, 0], mp[:, -1] = mask[:, 0], mask[:, -1]  # the axis is not an interface
        inner, left, right = mp[:, 1:-1], mp[:, :-2], mp[:, 2:]
        cells = np.where(mask, dt, 0.0)
        for out_side, in_side, nb in ((right, left, up[:, :-2]), (left, right, up[:, 2:])):
            edge = inner & ~out_side & in_side
            slope = u - nb  # change of u per cell towards the crossing
            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.where(slope * u < 0, -u / slope, np.nan) * dt
            ok = edge & np.isfinite(t)
            cells[ok] += np.clip(t[ok], 0.0, dt) - dt / 2
        self._gradients[key] = cells
        return cells

    # --- ring data (one value per grid radius) -----------------------------

    @functools.cached_property
    def rings(self) -> dict:
        rr = self._mesh[0]
        out = {}
        for name, sign in (("plus", GAS), ("minus", FLUID)):
            ds = rr * self.cell_lengths(sign)
            w = self.weight(sign)
            u = self.part(sign)
            d_r, d_t = self.polar_gradient(sign)
            grad2 = d_r**2 + (d_t / rr) ** 2
            out[f"energy_{name}"] = np.sum(w * grad2 * ds, axis=1)
            out[f"mass_{name}"] = np.sum(w * u**2 * ds, axis=1)
            out[f"flux_{name}"] = np.sum(w * u * d_r * ds, axis=1)
            out[f"radial_{name}"] = np.sum(w * d_r**2 * ds, axis=1)
            out[f"tangential_{name}"] = np.sum(w * (d_t / rr) ** 2 * ds, axis=1)
        for key in list(out):
            if key.startswith(("energy_", "mass_")):
                out["cum_" + key] = _cumulative(self.r, out[key])
        return out

    def ring_value(self, key: str, r: float) -> float:
        """Ring quantity ``key`` at radius ``r`` (cubic interpolation off-grid)."""
        _check_radius(self, r)
        data = self.rings[key]
        return _at_radius(self.r, data, r, self.dr, include_origin=key.startswith("cum_"))


def _masked_derivative(u, mask, step, axis, ghosts):
    """First derivative along ``axis`` restricted to ``mask``."""
    pad = [(0, 0), (0, 0)]
    pad[axis] = (2, 2)
    if ghosts == "none":
        up = np.pad(u, pad)
        mp = np.pad(mask, pad, constant_values=False)
    else:
        up = np.pad(u, pad, mode=ghosts)
        mp = np.pad(mask, pad, mode=ghosts)
    n = u.shape[axis]

    def sl(offset):
        idx = [slice(None), slice(None)]
        idx[axis] = slice(2 + offset, 2 + offset + n)
        return tuple(idx)

    c, m1, p1, m2, p2 = (up[sl(k)] for k in (0, -1, 1, -2, 2))
    km1, kp1, km2, kp2 = (mp[sl(k)] for k in (-1, 1, -2, 2))
    d = np.zeros_like(u)
    todo = mask.copy()
    rules = (
        (km1 & kp1, (p1 - m1) / (2 * step)),
        (kp1 & kp2, (-3 * c + 4 * p1 - p2) / (2 * step)),
        (km1 & km2, (3 * c - 4 * m1 + m2) / (2 * step)),
        (kp1, (p1 - c) / step),
        (km1, (c - m1) / step),
    )
    for sel, value in rules:
        pick = todo & sel
        d[pick] = value[pick]
        todo &= ~sel
    return d


def _cumulative(r, ring):
    x = np.concatenate(([0.0], r))
    y = np.concatenate(([0.0], ring))
    return cumulative_simpson(y, x=x, initial=0.0)


def _at_radius(r_nodes, data, r, dr, include_origin=False):
    if include_origin:
        r_nodes = np.concatenate(([0.0], r_nodes))
    k = int(round(r / dr)) - (0 if include_origin else 1)
    if 0 <= k < len(r_nodes) and abs(r_nodes[k] - r) <= 1e-9 * dr:
        return float(data[k])
    return float(CubicSpline(r_nodes, data)(r))


def _check_radius(field: MeridianField, r: float):
    if not r <= field.r_max * (1 + 1e-12):
        raise ValidationError(f"radius {r!r} beyond the grid (r_max = {field.r_max!r})")
    if r < 3 * field.dr * (1 - 1e-12):
        raise ResolutionError(f"radius {r!r} below 3 dr = {3 * field.dr!r}")


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True, eq=False)
class MonitorCurve:
    radii: np.ndarray
    values: np.ndarray
    kind: str
    meta: dict = field(default_factory=dict)

    KINDS = ("phi", "weiss_m", "i_total", "i_plus", "i_minus", "j_plus", "j_minus", "residual", "cusp_ratio")

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if self.kind not in self.KINDS:
            raise ValidationError(f"unknown monitor kind {self.kind!r}")
        if radii.shape != values.shape or radii.ndim != 1:
            raise ValidationError("radii and values must be 1-D arrays of equal length")
        if np.any(np.diff(radii) <= 0):
            raise ValidationError("monitor radii must be strictly increasing")
        if self.kind != "cusp_ratio" and not np.all(np.isfinite(values)):
            raise ValidationError("monitor values must be finite")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.radii)


@dataclass(frozen=True, eq=False)
class FreeBoundaryCurve:
    points: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if np.any(pts[:, 0] < -1e-12):
            raise ValidationError("free boundary points must satisfy x1 >= 0")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def is_empty(self) -> bool:
        return len(self.points) == 0

    @property
    def arclength(self) -> np.ndarray:
        if self.is_empty:
            return np.zeros(0)
        seg = np.hypot(*np.diff(self.points, axis=0).T)
        return np.concatenate(([0.0], np.cumsum(seg)))


@dataclass(frozen=True)
class GrowthParams:
    beta: float = 1.0
    gamma: float = 0.25
    beta_star: float = 2.0
    n: int = 2

    def __post_init__(self):
        if not self.beta > 0:
            raise ValidationError("beta must be positive")
        if not 0.0 < self.gamma < 0.5:
            raise ValidationError("gamma must lie in (0, 1/2)")


# ---------------------------------------------------------------------------
# construction


def field_from_function(
    func,
    n_r: int,
    n_theta: int,
    r_max: float = 1.0,
    phase=None,
    center=(0.0, 0.0),
    full_circle: bool = False,
    provenance: str = "",
) -> MeridianField:
    """Sample ``func(x1, x2)`` on a polar grid.

    ``phase`` may be ``None`` (sign of the values), ``"gas"``/``"fluid"`` (the
    whole grid in one phase) or a callable returning labels.
    """
    dr = r_max / n_r
    probe = MeridianField(np.ones((n_r, n_theta)), dr, center=center, full_circle=full_circle)
    x1, x2 = probe.x1, probe.x2
    values = np.asarray(func(x1, x2), dtype=float) * np.ones_like(x1)
    if phase is None:
        labels = None
    elif callable(phase):
        labels = phase(x1, x2)
    else:
        labels = np.full(values.shape, GAS if Phase.coerce(phase) is Phase.GAS else FLUID)
    return MeridianField(values, dr, labels, center, full_circle, provenance)


def _interpolate_eigen(eig: EigenResult, theta: np.ndarray):
    inside = (theta > eig.arc.theta_lo) & (theta < eig.arc.theta_hi)
    spline = CubicSpline(eig.grid, eig.eigenfunction)
    g = np.zeros_like(theta)
    g[inside] = np.maximum(spline(theta[inside]), 0.0)
    return inside, g, spline


def make_homogeneous_field(
    alpha: float,
    gas_eig: EigenResult | None,
    fluid_eig: EigenResult | None,
    n_r: int,
    n_theta: int,
    r_max: float = 1.0,
    fluid_alpha: float | None = None,
    gas_scale: float = 1.0,
    fluid_scale: float | None = None,
) -> MeridianField:
    """``u = r^alpha g+`` on the gas arc and ``-r^(alpha+1) g-`` on the fluid arc.

    With both phases present and sharing an endpoint, ``fluid_scale=None``
    picks the amplitude that balances ``x1 |grad u+|^2 = |grad u-|^2 / x1``
    on the interface; otherwise the fluid amplitude defaults to 1.
    """
    if gas_eig is None and fluid_eig is None:
        raise ValidationError("need at least one eigenfunction")
    beta_f = alpha + 1.0 if fluid_alpha is None else fluid_alpha
    probe = MeridianField(np.zeros((n_r, n_theta)), r_max / n_r)
    theta, r = probe.theta, probe.r
    values = np.zeros((n_r, n_theta))
    phase = np.zeros((n_r, n_theta), dtype=np.int8)
    g_in = f_in = None
    if gas_eig is not None and fluid_eig is not None:
        a, b = gas_eig.arc, fluid_eig.arc
        if max(a.theta_lo, b.theta_lo) < min(a.theta_hi, b.theta_hi):
            raise SupportOverlapError(f"gas arc {a} and fluid arc {b} overlap")
    if gas_eig is not None:
        g_in, g, g_spline = _interpolate_eigen(gas_eig, theta)
        values[:, g_in] = gas_scale * np.outer(r**alpha, g[g_in])
        phase[:, g_in] = GAS
    if fluid_eig is not None:
        f_in, f, f_spline = _interpolate_eigen(fluid_eig, theta)
        if fluid_scale is None:
            fluid_scale = 1.0
            if gas_eig is not None:
                shared = {gas_eig.arc.theta_lo, gas_eig.arc.theta_hi} & {
                    fluid_eig.arc.theta_lo,
                    fluid_eig.arc.theta_hi,
                }
                if shared:
                    t_f = shared.pop()
                    dg = abs(float(g_spline(t_f, 1)))
                    df = abs(float(f_spline(t_f, 1)))
                    fluid_scale = gas_scale * math.sin(t_f) * dg / df
        values[:, f_in] = -fluid_scale * np.outer(r**beta_f, f[f_in])
        phase[:, f_in] = FLUID
    phase[values == 0.0] = NONE
    desc = f"homogeneous alpha={alpha!r} fluid_degree={beta_f!r}"
    return MeridianField(values, r_max / n_r, phase, provenance=desc)


def matched_field(
    n_r: int, n_theta: int, r_max: float = 1.0, n_grid: int = 2048, matched=None, normalize: bool = True
) -> MeridianField:
    """Two-phase homogeneous field of matched degrees (gas cap at the north pole).

    With ``normalize`` the balanced field is scaled so that ``max |u| = 1`` on
    the grid; both phases share the factor, so the interface balance holds.
    """
    from .arcs import eigenvalue, matched_homogeneity

    m = matched if matched is not None else matched_homogeneity(n_grid=n_grid)
    gas = eigenvalue(m.gas_arc, Phase.GAS, n_grid)
    fluid = eigenvalue(m.fluid_arc, Phase.FLUID, n_grid)
    f = make_homogeneous_field(m.alpha_star, gas, fluid, n_r, n_theta, r_max)
    if normalize:
        f = MeridianField(f.values / f.scale, f.dr, f.phase, f.center, f.full_circle, f.provenance + " normalized")
    return f


# ---------------------------------------------------------------------------
# integral quantities


def _sign_of(phase) -> int:
    if phase in ("total", None):
        return 0
    return GAS if Phase.coerce(phase) is Phase.GAS else FLUID


def energy_ring(field: MeridianField, r: float, phase="total") -> float:
    """Weighted Dirichlet energy over ``B_r``: ``I+``, ``I-`` or their sum."""
    sign = _sign_of(phase)
    plus = field.ring_value("cum_energy_plus", r) if sign >= 0 else 0.0
    minus = field.ring_value("cum_energy_minus", r) if sign <= 0 else 0.0
    return plus + minus


def boundary_mass(field: MeridianField, r: float, phase="total") -> float:
    """``J+ = int x1 (u+)^2 dS`` / ``J- = int (u-)^2 / x1 dS`` on the circle of radius ``r``."""
    sign = _sign_of(phase)
    plus = field.ring_value("mass_plus", r) if sign >= 0 else 0.0
    minus = field.ring_value("mass_minus", r) if sign <= 0 else 0.0
    return plus + minus


def boundary_flux(field: MeridianField, r: float, phase="total") -> float:
    sign = _sign_of(phase)
    plus = field.ring_value("flux_plus", r) if sign >= 0 else 0.0
    minus = field.ring_value("flux_minus", r) if sign <= 0 else 0.0
    return plus + minus


def acf_phi(field: MeridianField, r: float, beta_star: float) -> float:
    """``r^(-2 beta*) I+(r) I-(r)``."""
    return r ** (-2.0 * beta_star) * energy_ring(field, r, "gas") * energy_ring(field, r, "fluid")


def weiss_m(field: MeridianField, r: float, beta: float, n: int = 2) -> float:
    p = -2.0 * beta - n
    return (
        r ** (p + 1) * energy_ring(field, r)
        - beta * r**p * boundary_mass(field, r, "gas")
        - (beta + 1.0) * r**p * boundary_mass(field, r, "fluid")
    )


def weiss_m_prime_rhs(field: MeridianField, r: float, beta: float, n: int = 2) -> float:
    """``2 r^(1-2beta-n) int [x1 (d_r u+ - beta u+/r)^2 + (d_r u- - (beta+1) u-/r)^2 / x1] dS``."""
    _check_radius(field, r)
    rr = field._mesh[0]
    ring = np.zeros(field.n_r)
    for sign, deg in ((GAS, beta), (FLUID, beta + 1.0)):
        ds = rr * field.cell_lengths(sign)
        d_r, _ = field.polar_gradient(sign)
        dev = d_r - deg * field.part(sign) / rr
        ring += np.sum(field.weight(sign) * dev**2 * ds, axis=1)
    return 2.0 * r ** (1.0 - 2.0 * beta - n) * _at_radius(field.r, ring, r, field.dr)


def _interior_index(field: MeridianField, r: float) -> int:
    k = int(round(r / field.dr)) - 1
    if abs(field.r[k] - r) > 1e-9 * field.dr:
        raise ValidationError(f"radius {r!r} is not a grid radius")
    if k < 3 or k > field.n_r - 2:
        raise ResolutionError(f"radius {r!r} needs grid neighbours on both sides and r >= 4 dr")
    return k


def weiss_m_prime_residual(field: MeridianField, r: float, beta: float, n: int = 2) -> float:
    """``|dM/dr - RHS|`` with a central difference over adjacent grid radii."""
    k = _interior_index(field, r)
    lo, hi = field.r[k - 1], field.r[k + 1]
    dm = (weiss_m(field, hi, beta, n) - weiss_m(field, lo, beta, n)) / (hi - lo)
    return abs(dm - weiss_m_prime_rhs(field, r, beta, n))


def jm_relation_residual(field: MeridianField, beta: float, n: int = 2) -> MonitorCurve:
    """``d/dr (r^(-2beta-n) J) - (2/r) M`` on interior grid radii."""
    r = field.r
    p = -2.0 * beta - n
    j = field.rings["mass_plus"] + field.rings["mass_minus"]
    scaled = r**p * j
    ks = np.arange(3, field.n_r - 1)
    deriv = (scaled[ks + 1] - scaled[ks - 1]) / (2 * field.dr)
    m = np.array([weiss_m(field, r[k], beta, n) for k in ks])
    return MonitorCurve(r[ks], deriv - 2.0 / r[ks] * m, "residual", {"check": "jm", "beta": beta, "n": n})


def flux_identity_residual(field: MeridianField, r: float) -> float:
    """``|I(r) - int (x1 u+ d_r u+ + u- d_r u- / x1) dS|``."""
    return abs(energy_ring(field, r) - boundary_flux(field, r))


def monitor(field: MeridianField, kind: str, radii=None, beta: float = 1.0, beta_star: float = 2.0, n: int = 2) -> MonitorCurve:
    """Sample one diagnostic on grid radii ``>= 3 dr`` (or the given radii)."""
    if radii is None:
        radii = field.r[2:]
    radii = np.asarray(radii, dtype=float)
    funcs = {
        "phi": lambda r: acf_phi(field, r, beta_star),
        "weiss_m": lambda r: weiss_m(field, r, beta, n),
        "i_total": lambda r: energy_ring(field, r),
        "i_plus": lambda r: energy_ring(field, r, "gas"),
        "i_minus": lambda r: energy_ring(field, r, "fluid"),
        "j_plus": lambda r: boundary_mass(field, r, "gas"),
        "j_minus": lambda r: boundary_mass(field, r, "fluid"),
        "residual": lambda r: flux_identity_residual(field, r),
    }
    if kind not in funcs:
        raise ValidationError(f"unknown monitor kind {kind!r}")
    values = np.array([funcs[kind](r) for r in radii])
    return MonitorCurve(radii, values, kind, {"beta": beta, "beta_star": beta_star, "n": n})


def cauchy_schwarz_chain(field: MeridianField, r: float) -> dict:
    """Ring integrals entering the ACF estimates, per phase, at a grid radius.

    For each phase ``p`` the entries satisfy ``flux <= sqrt(mass * radial)``
    and ``energy >= 2 sqrt(radial * tangential)`` on any field.
    """
    k = int(round(r / field.dr)) - 1
    if abs(field.r[k] - r) > 1e-9 * field.dr:
        raise ValidationError(f"radius {r!r} is not a grid radius")
    out = {}
    for name in ("plus", "minus"):
        ring = field.rings
        out[name] = {
            "flux": float(ring[f"flux_{name}"][k]),
            "mass": float(ring[f"mass_{name}"][k]),
            "radial": float(ring[f"radial_{name}"][k]),
            "tangential": float(ring[f"tangential_{name}"][k]),
            "energy": float(ring[f"radial_{name}"][k] + ring[f"tangential_{name}"][k]),
        }
    return out


# ---------------------------------------------------------------------------
# domain variations


@dataclass(frozen=True)
class BumpVectorField:
    """Compactly supported test field ``phi = eta * (x1 (a1 + b1 x2), a2 + b2 x1)``.

    ``eta = (1 - |x - c|^2 / s^2)^p`` inside the disk of radius ``s`` about
    ``c``.  The factor ``x1`` makes the first component vanish on the axis.
    """

    center: tuple
    radius: float
    a1: float = 1.0
    b1: float = 0.0
    a2: float = 0.0
    b2: float = 0.0
    power: int = 4

    def __call__(self, x1, x2):
        c1, c2 = self.center
        s2 = self.radius**2
        q = ((x1 - c1) ** 2 + (x2 - c2) ** 2) / s2
        inside = q < 1.0
        base = np.where(inside, 1.0 - q, 0.0)
        eta = base**self.power
        deta = np.where(inside, -self.power * base ** (self.power - 1) * 2.0 / s2, 0.0)
        e1, e2 = deta * (x1 - c1), deta * (x2 - c2)
        p1 = x1 * (self.a1 + self.b1 * x2)
        p2 = self.a2 + self.b2 * x1
        phi1, phi2 = eta * p1, eta * p2
        d11 = e1 * p1 + eta * (self.a1 + self.b1 * x2)
        d12 = e2 * p1 + eta * self.b1 * x1
        d21 = e1 * p2 + eta * self.b2
        d22 = e2 * p2
        return phi1, phi2, ((d11, d12), (d21, d22))

    def support_radius(self, origin) -> float:
        return math.hypot(self.center[0] - origin[0], self.center[1] - origin[1]) + self.radius


def random_test_fields(rng: np.random.Generator, count: int, field: MeridianField, margin: float = 0.05) -> list:
    """Admissible bump fields supported well inside ``field``'s disk."""
    out = []
    reach = field.r_max * (1 - margin) - 2 * field.dr
    c1, c2 = field.center
    while len(out) < count:
        s = rng.uniform(0.15, 0.5) * reach
        rho = rng.uniform(0.0, reach - s)
        ang = rng.uniform(0.0, 2 * PI if field.full_circle else PI)
        a1, b1, a2, b2 = rng.normal(size=4)
        out.append(BumpVectorField((c1 + rho * math.sin(ang), c2 + rho * math.cos(ang)), s, a1, b1, a2, b2))
    return out


def first_variation_residual(field: MeridianField, test_field) -> float:
    """Quadrature of the domain-variation integrand for ``test_field``.

    ``test_field(x1, x2)`` returns ``(phi1, phi2, D)`` with
    ``D[a][b] = d phi_a / d x_b``.  Its support must stay two radial cells
    inside the grid and ``phi1`` must vanish on the axis.
    """
    if hasattr(test_field, "support_radius"):
        if test_field.support_radius(field.center) > field.r_max - 2 * field.dr:
            raise SupportError("test field support reaches the grid boundary")
    else:
        edge = field.center[1] + field.r_max * np.cos(np.linspace(0, PI, 64))
        outer = field.center[0] + (field.r_max - field.dr) * np.sin(field.theta), field.center[1] + (
            field.r_max - field.dr
        ) * np.cos(field.theta)
        if np.max(np.abs(test_field(*outer)[0])) + np.max(np.abs(test_field(*outer)[1])) > 0:
            raise SupportError("test field does not vanish near the grid boundary")
        if not field.full_circle and np.max(np.abs(test_field(np.zeros_like(edge), edge)[0])) > 1e-12:
            raise SupportError("first component of the test field must vanish on the axis")
    x1 = field.x1
    phi1, phi2, d = test_field(x1, field.x2)
    div = d[0][0] + d[1][1]
    gp1, gp2 = field.cartesian_gradient(GAS)
    gm1, gm2 = field.cartesian_gradient(FLUID)

    def quad(g1, g2):
        return g1 * (d[0][0] * g1 + d[0][1] * g2) + g2 * (d[1][0] * g1 + d[1][1] * g2)

    gp = gp1**2 + gp2**2
    gm = gm1**2 + gm2**2
    gas = x1 * gp * div - 2.0 * x1 * quad(gp1, gp2) + gp * phi1
    fluid = gm / x1 * div - 2.0 / x1 * quad(gm1, gm2) - gm / x1**2 * phi1
    cells = gas * field.cell_lengths(GAS) + fluid * field.cell_lengths(FLUID)
    ring = np.sum(cells * field._mesh[0], axis=1)
    return float(_cumulative(field.r, ring)[-1])


# ---------------------------------------------------------------------------
# rescaling, Caccioppoli, cusp shape


def rescale_field(field: MeridianField, r_m: float, gamma: float, resample: bool = False) -> MeridianField:
    """Blow-up rescaling ``u+(r_m x) / r_m^gamma + u-(r_m x) / r_m^(gamma+1)``.

    By default the result lives on the scaled grid ``dr / r_m`` (exact, no
    interpolation, covering radius ``r_max / r_m``).  With ``resample=True``
    it is interpolated back onto the original radii along each ray, which
    needs a field centered at the origin with ``u(0) = 0``.
    """
    if not 0.0 < r_m <= 1.0:
        raise ValidationError(f"r_m must lie in (0, 1], got {r_m!r}")
    if not 0.0 < gamma < 0.5:
        raise ValidationError(f"gamma must lie in (0, 1/2), got {gamma!r}")
    factor = np.where(field.phase == GAS, r_m**-gamma, np.where(field.phase == FLUID, r_m ** -(gamma + 1.0), 1.0))
    note = f"{field.provenance} | rescaled r_m={r_m!r} gamma={gamma!r}".strip(" |")
    if not resample:
        center = (field.center[0] / r_m, field.center[1] / r_m)
        return MeridianField(field.values * factor, field.dr / r_m, field.phase, center, field.full_circle, note)
    if field.center != (0.0, 0.0):
        raise ValidationError("resampling needs a field centered at the origin")
    src = np.concatenate(([0.0], field.r))
    targets = r_m * field.r
    values = np.empty_like(field.values)
    phase = np.empty_like(field.phase)
    for j in range(field.n_theta):
        values[:, j] = CubicSpline(src, np.concatenate(([0.0], field.values[:, j])))(targets)
        idx = np.clip(np.rint(targets / field.dr).astype(int) - 1, 0, field.n_r - 1)
        phase[:, j] = field.phase[idx, j]
    values *= np.where(phase == GAS, r_m**-gamma, np.where(phase == FLUID, r_m ** -(gamma + 1.0), 1.0))
    return MeridianField(values, field.dr, phase, field.center, field.full_circle, note)


@dataclass(frozen=True)
class CaccioppoliReport:
    radius: float
    lhs_plus: float
    rhs_plus: float
    lhs_minus: float
    rhs_minus: float
    C_min: float


def caccioppoli_check(field: MeridianField, radius: float | None = None) -> CaccioppoliReport:
    """Smallest ``C`` with ``I(R) <= C int_{B_2R \\ B_R} w u^2`` for both phases.

    ``R`` defaults to 1 when the grid reaches radius 2, else ``r_max / 2``.
    0/0 counts as 0.
    """
    if radius is None:
        radius = 1.0 if field.r_max >= 2.0 - 1e-12 else field.r_max / 2
    outer = 2.0 * radius
    lhs_p = energy_ring(field, radius, "gas")
    lhs_m = energy_ring(field, radius, "fluid")
    rhs_p = field.ring_value("cum_mass_plus", outer) - field.ring_value("cum_mass_plus", radius)
    rhs_m = field.ring_value("cum_mass_minus", outer) - field.ring_value("cum_mass_minus", radius)

    def ratio(lhs, rhs):
        if lhs <= 0.0:
            return 0.0
        return lhs / rhs if rhs > 0.0 else math.inf

    return CaccioppoliReport(radius, lhs_p, rhs_p, lhs_m, rhs_m, max(ratio(lhs_p, rhs_p), ratio(lhs_m, rhs_m)))


def cusp_ratio(curve: FreeBoundaryCurve) -> MonitorCurve:
    """``|sigma1 / sigma2|`` per vertex against arclength, with a log-log slope.

    The slope fits ``log ratio`` against ``log |sigma|`` over vertices with a
    finite positive ratio.  Vertices with ``sigma2 = 0`` get ``+inf`` and are
    flagged in ``meta["infinite"]``.
    """
    pts = curve.points
    if len(pts) < 2:
        raise ValidationError("cusp ratio needs at least two vertices")
    if math.hypot(*pts[0]) > 1e-3:
        raise ValidationError("curve must start within 1e-3 of the origin")
    s1, s2 = np.abs(pts[:, 0]), np.abs(pts[:, 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(s2 > 0.0, s1 / np.where(s2 > 0.0, s2, 1.0), math.inf)
    dist = np.hypot(pts[:, 0], pts[:, 1])
    ok = np.isfinite(ratio) & (ratio > 0.0) & (dist > 0.0)
    slope = math.nan
    if ok.sum() >= 2:
        slope = float(np.polyfit(np.log(dist[ok]), np.log(ratio[ok]), 1)[0])
    radii = curve.arclength + math.hypot(*pts[0])
    meta = {"slope": slope, "infinite": np.flatnonzero(~np.isfinite(ratio)).tolist()}
    return MonitorCurve(radii, ratio, "cusp_ratio", meta)


def fluid_velocity(field: MeridianField):
    """Meridional velocity ``(-d2 u- / x1, d1 u- / x1)`` from the stream function."""
    g1, g2 = field.cartesian_gradient(FLUID)
    return -g2 / field.x1, g1 / field.x1


__all__ = [
    "BumpVectorField",
    "CaccioppoliReport",
    "FreeBoundaryCurve",
    "GrowthParams",
    "MeridianField",
    "MonitorCurve",
    "acf_phi",
    "boundary_flux",
    "boundary_mass",
    "caccioppoli_check",
    "cauchy_schwarz_chain",
    "cusp_ratio",
    "energy_ring",
    "field_from_function",
    "first_variation_residual",
    "flux_identity_residual",
    "fluid_velocity",
    "jm_relation_residual",
    "make_homogeneous_field",
    "matched_field",
    "monitor",
    "random_test_fields",
    "rescale_field",
    "weiss_m",
    "weiss_m_prime_residual",
    "weiss_m_prime_rhs",
]
