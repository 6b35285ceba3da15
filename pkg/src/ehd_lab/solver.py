"""Finite-difference solver for the regularized transformed equation

    L v := dv/dx1^2 + dv/dx2^2 - (1/x1) dv/dx1 + x1^-2 v B_eps(v) = 0

on a rectangle ``[x1_min, x1_max] x [x2_min, x2_max]`` kept away from the
axis, with Dirichlet data on the boundary.  ``v > 0`` is the gas phase
(``v = x1 u``), ``v < 0`` the fluid phase (``v = u``).

Discretization: 5-point Laplacian plus a central difference for ``d/dx1``.
Newton's method uses the exact derivative of ``B_eps`` and a sparse LU
factorization; a backtracking line search guards each step and Picard
iteration (freeze ``B_eps``) takes over when the Newton direction stalls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np
import scipy.sparse as sp
from scipy import ndimage
from scipy.interpolate import RegularGridInterpolator
from scipy.sparse.linalg import splu
from skimage.measure import find_contours

from .errors import IterationFailure, ValidationError
from .fields import FLUID, GAS, NONE, FreeBoundaryCurve, MeridianField

# smoothstep ramps eta on [0, 1], indexed by continuity order
_RAMPS = {
    1: (lambda t: t * t * (3 - 2 * t), lambda t: 6 * t * (1 - t)),
    2: (lambda t: t**3 * (10 + t * (-15 + 6 * t)), lambda t: 30 * t * t * (1 - t) ** 2),
    3: (lambda t: t**4 * (35 + t * (-84 + t * (70 - 20 * t))), lambda t: 140 * t**3 * (1 - t) ** 3),
}


def b_eps(z, epsilon: float, order: int = 2):
    """Ramp ``eta(1 + z/eps)``: 0 for ``z <= -eps``, 1 for ``z >= 0``, C^order between."""
    if not epsilon > 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon!r}")
    if order not in _RAMPS:
        raise ValidationError(f"ramp order must be one of {sorted(_RAMPS)}, got {order!r}")
    t = np.clip(1.0 + np.asarray(z, dtype=float) / epsilon, 0.0, 1.0)
    eta = _RAMPS[order][0]
    # eta(t) = 1 - eta(1 - t); the reflected form is exact near t = 1
    out = np.where(t > 0.5, 1.0 - eta(1.0 - t), eta(t))
    return float(out) if out.ndim == 0 else out


def db_eps(z, epsilon: float, order: int = 2):
    """Derivative of :func:`b_eps` with respect to ``z``."""
    b_eps(0.0, epsilon, order)
    t = 1.0 + np.asarray(z, dtype=float) / epsilon
    inside = (t > 0.0) & (t < 1.0)
    out = np.where(inside, _RAMPS[order][1](np.clip(t, 0.0, 1.0)) / epsilon, 0.0)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# boundary data

_SAFE = {
    "np": np,
    "pi": math.pi,
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "where": np.where,
    "minimum": np.minimum,
    "maximum": np.maximum,
}


PRESETS = {
    "x1x2": lambda x1, x2: x1 * x2,
    "neg_x1sq": lambda x1, x2: -x1 * x1 + 0 * x2,
    # smooth sign-changing data: the gas branch x1 x2 carried into x2 < 0,
    # where it is not a solution, so the solver has work to do
    "mixed": lambda x1, x2: x1 * x2,
    "point_charge": lambda x1, x2: x1 / np.hypot(x1, x2),
    "source_stream": lambda x1, x2: -2.0 - x2 / np.hypot(x1, x2),
}


def dirichlet_function(data):
    """Callable ``g(x1, x2)`` from a preset name, ``"expr:<formula>"`` or a callable."""
    if callable(data):
        return data
    if data in PRESETS:
        return PRESETS[data]
    if isinstance(data, str) and data.startswith("expr:"):
        code = compile(data[5:].strip(), "<dirichlet>", "eval")
        for name in code.co_names:
            if name not in _SAFE and name not in ("x1", "x2"):
                raise ValidationError(f"name {name!r} not allowed in Dirichlet expression")

        def g(x1, x2):
            return np.asarray(eval(code, {"__builtins__": {}}, dict(_SAFE, x1=x1, x2=x2)), dtype=float)

        return g
    raise ValidationError(f"unknown Dirichlet data {data!r}; use one of {sorted(PRESETS)} or 'expr:...'")


# ---------------------------------------------------------------------------
# config and state


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 0.05
    h: float = 0.02
    x1_min: float = 0.5
    x1_max: float = 1.5
    x2_min: float = -0.5
    x2_max: float = 0.5
    dirichlet: object = "mixed"
    max_iter: int = 25
    tol: float = 1e-10
    damping: float = 1.0
    ramp_order: int = 2
    init: str = "supersolution"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValidationError("epsilon must be positive")
        if not self.h > 0:
            raise ValidationError("h must be positive")
        if not self.tol > 0:
            raise ValidationError("tol must be positive")
        if not self.x1_min >= 4 * self.h * (1 - 1e-12):
            raise ValidationError(f"x1_min = {self.x1_min!r} must be >= 4h = {4 * self.h!r}")
        if not (self.x1_max > self.x1_min and self.x2_max > self.x2_min):
            raise ValidationError("empty domain")
        if not 0.0 < self.damping <= 1.0:
            raise ValidationError("damping must lie in (0, 1]")
        if self.max_iter < 1:
            raise ValidationError("max_iter must be >= 1")
        if self.ramp_order not in _RAMPS:
            raise ValidationError(f"ramp_order must be one of {sorted(_RAMPS)}")
        if self.init not in ("supersolution", "zero"):
            raise ValidationError("init must be 'supersolution' or 'zero'")
        self.shape  # validates that h divides the domain
        dirichlet_function(self.dirichlet)

    @property
    def shape(self) -> tuple:
        """Node counts ``(n1 + 1, n2 + 1)``."""
        out = []
        for lo, hi in ((self.x1_min, self.x1_max), (self.x2_min, self.x2_max)):
            n = round((hi - lo) / self.h)
            if n < 2 or abs(n * self.h - (hi - lo)) > 1e-9 * (hi - lo):
                raise ValidationError(f"h = {self.h!r} does not divide [{lo!r}, {hi!r}] into >= 2 cells")
            out.append(n + 1)
        return tuple(out)

    @property
    def axes(self):
        n1, n2 = self.shape
        return (
            self.x1_min + self.h * np.arange(n1),
            self.x2_min + self.h * np.arange(n2),
        )

    def refined(self, factor: int = 2) -> "SolverConfig":
        return replace(self, h=self.h / factor)

    def as_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        if callable(out["dirichlet"]):
            out["dirichlet"] = getattr(out["dirichlet"], "__name__", "callable")
        return out


_CONFIG_TYPES = {f.name: f.type for f in fields(SolverConfig)}


def parse_config(text: str) -> SolverConfig:
    """Parse ``key = value`` lines (``#`` starts a comment)."""
    kwargs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CONFIG_TYPES:
            raise ValidationError(f"config line {lineno}: unknown key {key!r}")
        kind = _CONFIG_TYPES[key]
        try:
            if kind == "float":
                kwargs[key] = float(value)
            elif kind == "int":
                kwargs[key] = int(value)
            else:
                kwargs[key] = value
        except ValueError:
            raise ValidationError(f"config line {lineno}: bad value for {key}: {value!r}") from None
    return SolverConfig(**kwargs)


def read_config(path) -> SolverConfig:
    with open(path) as fh:
        return parse_config(fh.read())


@dataclass(frozen=True, eq=False)
class SolverState:
    v: np.ndarray
    config: SolverConfig
    residual_norm: float
    iterations: int
    converged: bool
    history: tuple = ()
    picard_steps: int = 0
    note: str = ""

    def __post_init__(self):
        if not np.all(np.isfinite(self.v)):
            raise ValidationError("solver state holds non-finite values")
        if self.converged and not self.residual_norm <= self.config.tol:
            raise ValidationError("converged state must meet the residual tolerance")
        self.v.setflags(write=False)

    @property
    def axes(self):
        return self.config.axes

    @property
    def mesh(self):
        return np.meshgrid(*self.config.axes, indexing="ij")

    @property
    def h(self) -> float:
        return self.config.h


def state_from_values(v, config: SolverConfig, note: str = "sampled") -> SolverState:
    """Wrap given grid samples (no solve); residual is evaluated, not enforced."""
    v = np.array(v, dtype=float)
    if v.shape != config.shape:
        raise ValidationError(f"values have shape {v.shape}, grid is {config.shape}")
    res = float(np.max(np.abs(residual(v, config)), initial=0.0))
    return SolverState(v, config, res, 0, False, note=note)


# ---------------------------------------------------------------------------
# discrete operator


def _linear_part(config: SolverConfig):
    """Sparse matrix of the linear part on interior nodes (row-major in (i, j))."""
    n1, n2 = config.shape
    m1, m2 = n1 - 2, n2 - 2
    h = config.h
    x1 = config.axes[0][1:-1]
    xi = np.repeat(x1, m2)
    idx = np.arange(m1 * m2).reshape(m1, m2)
    rows, cols, vals = [idx.ravel()], [idx.ravel()], [np.full(m1 * m2, -4.0 / h**2)]
    east = 1.0 / h**2 - 1.0 / (2 * h * xi)
    west = 1.0 / h**2 + 1.0 / (2 * h * xi)
    ii, jj = np.divmod(np.arange(m1 * m2), m2)
    for di, dj, coef in ((1, 0, east), (-1, 0, west), (0, 1, None), (0, -1, None)):
        ok = (ii + di >= 0) & (ii + di < m1) & (jj + dj >= 0) & (jj + dj < m2)
        rows.append(idx.ravel()[ok])
        cols.append(((ii + di) * m2 + jj + dj)[ok])
        vals.append((coef[ok] if coef is not None else np.full(ok.sum(), 1.0 / h**2)))
    return sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(m1 * m2,) * 2)


def _linear_apply(v: np.ndarray, config: SolverConfig) -> np.ndarray:
    h = config.h
    x1 = config.axes[0][1:-1, None]
    c = v[1:-1, 1:-1]
    lap = (v[2:, 1:-1] + v[:-2, 1:-1] + v[1:-1, 2:] + v[1:-1, :-2] - 4 * c) / h**2
    return lap - (v[2:, 1:-1] - v[:-2, 1:-1]) / (2 * h * x1)


def residual(v: np.ndarray, config: SolverConfig) -> np.ndarray:
    """Discrete ``L v`` on interior nodes."""
    x1 = config.axes[0][1:-1, None]
    c = v[1:-1, 1:-1]
    return _linear_apply(v, config) + c * b_eps(c, config.epsilon, config.ramp_order) / x1**2


def boundary_values(config: SolverConfig) -> np.ndarray:
    g = dirichlet_function(config.dirichlet)
    x1, x2 = np.meshgrid(*config.axes, indexing="ij")
    data = np.asarray(g(x1, x2), dtype=float) * np.ones_like(x1)
    if not np.all(np.isfinite(data)):
        raise ValidationError("Dirichlet data must be finite")
    v = np.zeros_like(x1)
    v[0, :], v[-1, :], v[:, 0], v[:, -1] = data[0, :], data[-1, :], data[:, 0], data[:, -1]
    return v


def solve(config: SolverConfig, strict: bool = False) -> SolverState:
    """Damped Newton solve from the ``B_eps = 1`` supersolution (or zero).

    Returns an unconverged state (``converged=False``) on stagnation, or
    raises :class:`IterationFailure` when ``strict``.
    """
    v = boundary_values(config)
    shape = (config.shape[0] - 2, config.shape[1] - 2)
    lin = _linear_part(config)
    const = _linear_apply(v, config).ravel()  # boundary contribution, interior zero
    q = 1.0 / np.repeat(config.axes[0][1:-1], shape[1]) ** 2
    eps, order = config.epsilon, config.ramp_order

    if config.init == "supersolution":
        v[1:-1, 1:-1] = splu(sp.csc_matrix(lin + sp.diags(q))).solve(-const).reshape(shape)

    def resid(vi):
        return lin @ vi + const + q * vi * b_eps(vi, eps, order)

    vi = v[1:-1, 1:-1].ravel().copy()
    f = resid(vi)
    norm = float(np.max(np.abs(f)))
    history = [norm]
    picard = 0
    it = 0
    use_picard = False
    while norm > config.tol and it < config.max_iter:
        it += 1
        b = b_eps(vi, eps, order)
        if use_picard:
            new = splu(sp.csc_matrix(lin + sp.diags(q * b))).solve(-const)
            step = new - vi
            picard += 1
        else:
            jac = lin + sp.diags(q * (b + vi * db_eps(vi, eps, order)))
            step = -splu(sp.csc_matrix(jac)).solve(f)
        t = config.damping
        accepted = False
        while t >= 1.0 / 64:
            trial = vi + t * step
            f_trial = resid(trial)
            n_trial = float(np.max(np.abs(f_trial)))
            if np.isfinite(n_trial) and n_trial <= (1 - 1e-4 * t) * norm:
                accepted = True
                break
            t /= 2
        if not accepted:
            if use_picard:
                break
            use_picard = True
            continue
        vi, f, norm = trial, f_trial, n_trial
        history.append(norm)
        use_picard = False
    v[1:-1, 1:-1] = vi.reshape(shape)
    converged = norm <= config.tol
    note = f"init={config.init}"
    if picard:
        note += f"; picard fallback steps={picard}"
    if not converged:
        note += "; not converged"
        if strict:
            raise IterationFailure(f"Newton stalled after {it} iterations", norm)
    return SolverState(v, config, norm, it, converged, tuple(history), picard, note)


# ---------------------------------------------------------------------------
# two-phase field on the solver grid


@dataclass(frozen=True, eq=False)
class CartesianField:
    """Two-phase ``u`` sampled on the solver's rectangular grid."""

    x1: np.ndarray
    x2: np.ndarray
    values: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        for name in ("x1", "x2", "values", "phase"):
            getattr(self, name).setflags(write=False)

    @property
    def h(self) -> float:
        return float(self.x1[1] - self.x1[0])


def recover_u(state: SolverState) -> CartesianField:
    """``u = v / x1`` where ``v > 0`` and ``u = v`` where ``v < 0``."""
    x1, _ = state.mesh
    v = state.v
    u = np.where(v > 0, v / x1, np.where(v < 0, v, 0.0))
    phase = np.where(v > 0, GAS, np.where(v < 0, FLUID, NONE)).astype(np.int8)
    a1, a2 = state.axes
    return CartesianField(a1.copy(), a2.copy(), u, phase)


def inverse_transform(field_: CartesianField) -> np.ndarray:
    """``v = x1 u`` on the gas phase, ``v = u`` on the fluid phase."""
    x1 = field_.x1[:, None]
    return np.where(field_.phase == GAS, x1 * field_.values, field_.values)


def phase_equation_residual(state: SolverState) -> dict:
    """Discrete ``div(x1 grad u)`` on ``{v > eps}`` and ``div(grad u / x1)`` on ``{v < -eps}``.

    Only nodes whose whole 5-point stencil lies in the phase are used.
    Returns max-norm residuals per phase (0 when the phase is empty).
    """
    u = recover_u(state)
    h, eps = state.h, state.config.epsilon
    a1 = state.axes[0]
    xm = (a1[1:-1] - h / 2)[:, None]
    xp = (a1[1:-1] + h / 2)[:, None]
    v = state.v
    out = {}
    for name, sel, w in (("gas", v > eps, lambda x: x), ("fluid", v < -eps, lambda x: 1.0 / x)):
        U = u.values
        c = U[1:-1, 1:-1]
        div = (
            w(xp) * (U[2:, 1:-1] - c) - w(xm) * (c - U[:-2, 1:-1]) + w(a1[1:-1, None]) * (U[1:-1, 2:] + U[1:-1, :-2] - 2 * c)
        ) / h**2
        stencil = sel[1:-1, 1:-1] & sel[2:, 1:-1] & sel[:-2, 1:-1] & sel[1:-1, 2:] & sel[1:-1, :-2]
        out[name] = float(np.max(np.abs(div[stencil]), initial=0.0))
    return out


def to_meridian(state: SolverState, center, r_max: float, n_r: int, n_theta: int) -> MeridianField:
    """Interpolate ``v`` (cubic) onto a full polar disk about ``center`` and recover ``u``.

    The disk must lie inside the solver rectangle.
    """
    c1, c2 = center
    cfg = state.config
    if not (
        c1 - r_max >= cfg.x1_min and c1 + r_max <= cfg.x1_max and c2 - r_max >= cfg.x2_min and c2 + r_max <= cfg.x2_max
    ):
        raise ValidationError("polar disk does not fit inside the solver domain")
    probe = MeridianField(np.zeros((n_r, n_theta)), r_max / n_r, center=center, full_circle=True)
    interp = RegularGridInterpolator(state.axes, state.v, method="cubic")
    x1, x2 = probe.x1, probe.x2
    v = interp(np.stack([x1.ravel(), x2.ravel()], axis=-1)).reshape(x1.shape)
    u = np.where(v > 0, v / x1, v)
    return MeridianField(u, r_max / n_r, None, center, True, "solver state")


# ---------------------------------------------------------------------------
# free boundary and singular set


def extract_free_boundary(state: SolverState) -> FreeBoundaryCurve:
    """Longest zero contour of ``v`` (marching squares, linear interpolation).

    Ordered from the end nearest the domain corner closest to the origin;
    coordinates are solver coordinates (the origin is outside the domain).
    """
    cfg = state.config
    corners = [(a, b) for a in (cfg.x1_min, cfg.x1_max) for b in (cfg.x2_min, cfg.x2_max)]
    anchor = np.array(min(corners, key=lambda p: (math.hypot(*p), p)))
    contours = find_contours(state.v, 0.0)
    meta = {"n_contours": len(contours), "anchor": tuple(anchor.tolist()), "frame": "solver coordinates"}
    if not contours:
        return FreeBoundaryCurve(np.zeros((0, 2)), meta)
    best = max(contours, key=lambda c: (len(c), c[0, 0], c[0, 1]))
    pts = np.column_stack((cfg.x1_min + cfg.h * best[:, 0], cfg.x2_min + cfg.h * best[:, 1]))
    if np.linalg.norm(pts[-1] - anchor) < np.linalg.norm(pts[0] - anchor):
        pts = pts[::-1]
    return FreeBoundaryCurve(pts, meta)


def detect_singular_set(state: SolverState, tol_grad: float) -> list:
    """Centroids of node clusters with ``|v| <= tol_grad h`` and ``|grad v| <= tol_grad``."""
    if not tol_grad > 0:
        raise ValidationError("tol_grad must be positive")
    h = state.h
    v = state.v
    c = v[1:-1, 1:-1]
    g1 = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2 * h)
    g2 = (v[1:-1, 2:] - v[1:-1, :-2]) / (2 * h)
    hit = (np.abs(c) <= tol_grad * h) & (np.hypot(g1, g2) <= tol_grad)
    labels, count = ndimage.label(hit, structure=np.ones((3, 3)))
    if count == 0:
        return []
    centers = ndimage.center_of_mass(hit, labels, range(1, count + 1))
    cfg = state.config
    return [(cfg.x1_min + h * (1 + i), cfg.x2_min + h * (1 + j)) for i, j in centers]


__all__ = [
    "CartesianField",
    "PRESETS",
    "SolverConfig",
    "SolverState",
    "b_eps",
    "boundary_values",
    "db_eps",
    "detect_singular_set",
    "dirichlet_function",
    "extract_free_boundary",
    "inverse_transform",
    "parse_config",
    "phase_equation_residual",
    "read_config",
    "recover_u",
    "residual",
    "solve",
    "state_from_values",
    "to_meridian",
]
