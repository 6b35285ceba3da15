"""Weighted eigenvalues on arcs of the unit half-circle.

Arcs are parameterized by the polar angle ``theta`` measured from the
positive ``x2`` semi-axis, so that ``x1 = sin(theta)`` and ``x2 = cos(theta)``
on the unit circle.  The gas phase carries the weight ``sin(theta)``, the
fluid phase the weight ``1/sin(theta)``.  For an arc ``G`` the smallest
eigenvalue of

    -(w f')' = lam w f    on G

is the infimum of the Rayleigh quotient ``int w f'^2 / int w f^2`` over
functions vanishing at the endpoints interior to ``(0, pi)``.  Endpoints on the
symmetry axis are natural for the gas weight (the weight degenerates there)
and Dirichlet for the fluid weight (``int f^2/sin`` must stay finite).

Two independent solvers are provided: a finite-difference pencil solved by
Sturm bisection / inverse iteration (:func:`eigenvalue`) and a Pruefer-angle
shooting method (:func:`shoot_oracle`).
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.linalg import LinAlgError, eigh_tridiagonal
from scipy.optimize import brentq

from .errors import (
    BracketFailure,
    DegenerateArcError,
    IterationFailure,
    MonotonicityViolation,
    ValidationError,
)

PI = math.pi
DEFAULT_N = 2048
MIN_CELLS = 4


class Phase(enum.Enum):
    GAS = "gas"
    FLUID = "fluid"

    @classmethod
    def coerce(cls, value) -> "Phase":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValidationError(f"unknown phase {value!r}; expected 'gas' or 'fluid'") from None

    def weight(self, theta):
        s = np.sin(theta)
        return s if self is Phase.GAS else 1.0 / s

    def alpha(self, lam: float) -> float:
        return alpha_of(lam, self)


@dataclass(frozen=True, order=True)
class Arc:
    """Open subarc ``(theta_lo, theta_hi)`` of ``[0, pi]``."""

    theta_lo: float
    theta_hi: float

    def __post_init__(self):
        lo, hi = float(self.theta_lo), float(self.theta_hi)
        if not (0.0 <= lo < hi <= PI):
            raise ValidationError(f"invalid arc ({lo!r}, {hi!r}); need 0 <= lo < hi <= pi")
        object.__setattr__(self, "theta_lo", lo)
        object.__setattr__(self, "theta_hi", hi)

    @property
    def touches_north(self) -> bool:
        return self.theta_lo == 0.0

    @property
    def touches_south(self) -> bool:
        return self.theta_hi == PI

    @property
    def length(self) -> float:
        return self.theta_hi - self.theta_lo

    def reflected(self) -> "Arc":
        lo = 0.0 if self.touches_south else PI - self.theta_hi
        hi = PI if self.touches_north else PI - self.theta_lo
        return Arc(lo, hi)

    def contains(self, other: "Arc") -> bool:
        return self.theta_lo <= other.theta_lo and other.theta_hi <= self.theta_hi


@dataclass(frozen=True)
class ArcSet:
    """Finite union of disjoint open arcs, sorted by lower endpoint."""

    arcs: tuple

    def __post_init__(self):
        arcs = tuple(sorted(as_arc(a) for a in self.arcs))
        if not arcs:
            raise ValidationError("empty arc set")
        for left, right in zip(arcs, arcs[1:]):
            if not left.theta_hi < right.theta_lo:
                raise ValidationError(f"arcs {left} and {right} overlap or touch")
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def of(cls, *pairs) -> "ArcSet":
        return cls(tuple(pairs))

    def __iter__(self):
        return iter(self.arcs)

    def __len__(self):
        return len(self.arcs)

    def reflected(self) -> "ArcSet":
        return ArcSet(tuple(a.reflected() for a in self.arcs))

    def contains(self, other: "ArcSet") -> bool:
        return all(any(big.contains(small) for big in self.arcs) for small in other.arcs)

    @property
    def measure(self) -> float:
        return sum(a.length for a in self.arcs)


def as_arc(obj) -> Arc:
    if isinstance(obj, Arc):
        return obj
    lo, hi = obj
    return Arc(lo, hi)


def as_arcset(obj) -> ArcSet:
    if isinstance(obj, ArcSet):
        return obj
    if isinstance(obj, Arc):
        return ArcSet((obj,))
    items = list(obj)
    if len(items) == 2 and all(isinstance(v, (int, float, np.floating)) for v in items):
        return ArcSet((Arc(*items),))
    return ArcSet(tuple(items))


@dataclass(frozen=True)
class EigenResult:
    """Ground state of one phase on an arc set.

    ``grid`` and ``eigenfunction`` live on the minimizing component; the
    eigenfunction is nonnegative and has unit weighted L2 norm under the
    lumped quadrature used by the discretization.
    """

    lam: float
    alpha: float
    phase: Phase
    arc: Arc
    grid: np.ndarray = field(repr=False)
    eigenfunction: np.ndarray = field(repr=False)
    bc: tuple = ("dirichlet", "dirichlet")
    n_grid: int = DEFAULT_N
    components: tuple = ()

    def rayleigh_quotient(self) -> float:
        return rayleigh_quotient(self.grid, self.eigenfunction, self.phase)

    def reflected(self) -> "EigenResult":
        """Same eigenpair on the mirror arc under ``theta -> pi - theta``."""
        return EigenResult(
            lam=self.lam,
            alpha=self.alpha,
            phase=self.phase,
            arc=self.arc.reflected(),
            grid=(PI - self.grid[::-1]).copy(),
            eigenfunction=self.eigenfunction[::-1].copy(),
            bc=self.bc[::-1],
            n_grid=self.n_grid,
            components=tuple(a.reflected() for a in self.components),
        )


def alpha_of(lam: float, phase) -> float:
    """Homogeneity exponent belonging to an eigenvalue.

    gas: alpha (alpha + 1) = lam, fluid: alpha (alpha - 1) = lam.
    """
    phase = Phase.coerce(phase)
    if not lam >= 0.0:
        raise ValidationError(f"eigenvalue must be nonnegative, got {lam!r}")
    root = math.sqrt(1.0 + 4.0 * lam)
    return (root - 1.0) / 2.0 if phase is Phase.GAS else (1.0 + root) / 2.0


def lambda_of(alpha: float, phase) -> float:
    phase = Phase.coerce(phase)
    return alpha * (alpha + 1.0) if phase is Phase.GAS else alpha * (alpha - 1.0)


# ---------------------------------------------------------------------------
# finite-difference pencil


def _boundary_conditions(arc: Arc, phase: Phase) -> tuple:
    natural = phase is Phase.GAS
    lo = "natural" if (natural and arc.touches_north) else "dirichlet"
    hi = "natural" if (natural and arc.touches_south) else "dirichlet"
    return lo, hi


def _dual_cell_mass(theta: np.ndarray, lo: float, hi: float, h: float, phase: Phase) -> np.ndarray:
    """Exact weight integrals over the dual cells ``[theta_i - h/2, theta_i + h/2]``."""
    left = np.maximum(theta - h / 2, lo)
    right = np.minimum(theta + h / 2, hi)
    if phase is Phase.GAS:
        # cos(a) - cos(b) = 2 sin((a+b)/2) sin((b-a)/2), cancellation-free
        return 2.0 * np.sin((left + right) / 2) * np.sin((right - left) / 2)
    with np.errstate(divide="ignore"):
        return np.log(np.tan(right / 2)) - np.log(np.tan(left / 2))


def rayleigh_quotient(theta: np.ndarray, f: np.ndarray, phase) -> float:
    """Discrete Rayleigh quotient with the same stiffness/mass rules as the pencil."""
    phase = Phase.coerce(phase)
    h = theta[1] - theta[0]
    mid = 0.5 * (theta[1:] + theta[:-1])
    stiff = np.sum(phase.weight(mid) * np.diff(f) ** 2) / h
    mass_w = _dual_cell_mass(theta, theta[0], theta[-1], h, phase)
    keep = np.isfinite(mass_w)
    mass = np.sum(mass_w[keep] * f[keep] ** 2)
    return float(stiff / mass)


@functools.lru_cache(maxsize=16384)
def _component_solve(lo: float, hi: float, phase_value: str, n: int):
    phase = Phase(phase_value)
    arc = Arc(lo, hi)
    h = (hi - lo) / n
    theta = lo + h * np.arange(n + 1)
    theta[-1] = hi
    mid = 0.5 * (theta[1:] + theta[:-1])
    k = phase.weight(mid) / h
    diag = np.zeros(n + 1)
    diag[:-1] += k
    diag[1:] += k
    mass = _dual_cell_mass(theta, lo, hi, h, phase)
    bc = _boundary_conditions(arc, phase)
    keep = np.ones(n + 1, dtype=bool)
    keep[0] = bc[0] == "natural"
    keep[-1] = bc[1] == "natural"
    idx = np.flatnonzero(keep)
    scale = 1.0 / np.sqrt(mass[idx])
    d = diag[idx] * scale * scale
    e = -k[idx[:-1]] * scale[:-1] * scale[1:]
    try:
        lam, vec = eigh_tridiagonal(d, e, select="i", select_range=(0, 0), lapack_driver="stebz")
    except LinAlgError as exc:
        raise IterationFailure(f"eigen-iteration failed on {arc} ({phase.value}): {exc}") from exc
    y = vec[:, 0]
    residual = float(np.linalg.norm(d * y + np.r_[e * y[1:], 0.0] + np.r_[0.0, e * y[:-1]] - lam[0] * y))
    norm_a = float(np.max(np.abs(d)) + 2 * np.max(np.abs(e), initial=0.0))
    if not np.isfinite(residual) or residual > 1e-8 * max(norm_a, 1.0):
        raise IterationFailure(f"inverse iteration did not converge on {arc}", residual)
    f = np.zeros(n + 1)
    f[idx] = y * scale
    if f[np.argmax(np.abs(f))] < 0:
        f = -f
    f[np.abs(f) < 1e-300] = 0.0
    # Rayleigh-quotient polish: quadratic in the eigenvector error, exact zero for constants
    lam_rq = rayleigh_quotient(theta, f, phase)
    norm = math.sqrt(np.sum(mass[idx] * f[idx] ** 2))
    f /= norm
    theta.setflags(write=False)
    f.setflags(write=False)
    return lam_rq, theta, f, bc


def _check_grid(arcset: ArcSet, n_grid: int):
    if int(n_grid) != n_grid or n_grid < 16:
        raise ValidationError(f"n_grid must be an integer >= 16, got {n_grid!r}")
    cell = PI / n_grid
    for arc in arcset:
        if arc.length < MIN_CELLS * cell:
            raise DegenerateArcError(
                f"arc {arc} is narrower than {MIN_CELLS} lattice cells (pi/{n_grid})"
            )


def eigenvalue(arcset, phase, n_grid: int = DEFAULT_N) -> EigenResult:
    """Smallest weighted eigenvalue of ``phase`` on ``arcset``.

    Each component is discretized with ``n_grid`` uniform cells; stiffness
    weights are taken at cell midpoints and mass weights are the exact weight
    integrals over the dual cells, so the singular weight is never evaluated
    on the axis.  The union of components decouples, so the result is the
    minimum over components (ties go to the lower component).

    Raises :class:`DegenerateArcError` for components narrower than four cells
    of the lattice ``pi / n_grid``.
    """
    arcset = as_arcset(arcset)
    phase = Phase.coerce(phase)
    _check_grid(arcset, n_grid)
    best = None
    for arc in arcset:
        lam, theta, f, bc = _component_solve(arc.theta_lo, arc.theta_hi, phase.value, int(n_grid))
        if best is None or lam < best[0]:
            best = (lam, arc, theta, f, bc)
    lam, arc, theta, f, bc = best
    return EigenResult(
        lam=lam,
        alpha=alpha_of(lam, phase),
        phase=phase,
        arc=arc,
        grid=theta,
        eigenfunction=f,
        bc=bc,
        n_grid=int(n_grid),
        components=arcset.arcs,
    )


def extrapolated_eigenvalue(arcset, phase, n_grid: int = DEFAULT_N) -> float:
    """One Richardson step over ``(n_grid // 2, n_grid)`` assuming an h^2 error."""
    coarse = eigenvalue(arcset, phase, n_grid // 2).lam
    fine = eigenvalue(arcset, phase, n_grid).lam
    return (4.0 * fine - coarse) / 3.0


# ---------------------------------------------------------------------------
# shooting oracle


def _frobenius_gas(t: float, lam: float):
    """Regular branch at the axis for the sin-weight: f = 1 + a1 t^2 + ..."""
    a1 = -lam / 4.0
    a2 = lam * (3.0 * lam - 2.0) / 192.0
    a3 = -lam * (5.0 * lam**2 - 10.0 * lam + 8.0) / 11520.0
    t2 = t * t
    f = 1.0 + t2 * (a1 + t2 * (a2 + t2 * a3))
    df = t * (2 * a1 + t2 * (4 * a2 + t2 * 6 * a3))
    return f, math.sin(t) * df


def _frobenius_fluid(t: float, lam: float):
    """Vanishing branch at the axis for the 1/sin-weight: f = t^2 (1 + a1 t^2 + ...)."""
    a1 = -(3.0 * lam + 2.0) / 24.0
    a2 = (15.0 * lam**2 + 30.0 * lam + 8.0) / 2880.0
    a3 = -(35.0 * lam**3 + 140.0 * lam**2 + 84.0 * lam + 16.0) / 322560.0
    t2 = t * t
    f = t2 * (1.0 + t2 * (a1 + t2 * (a2 + t2 * a3)))
    df = t * (2.0 + t2 * (4 * a1 + t2 * (6 * a2 + t2 * 8 * a3)))
    return f, df / math.sin(t)


def _pruefer_angle(phase: Phase, lam: float, start: float, stop: float, phi0: float) -> float:
    gas = phase is Phase.GAS

    def rhs(t, y):
        s = math.sin(t)
        c2 = math.cos(y[0]) ** 2
        s2 = math.sin(y[0]) ** 2
        if gas:
            return [c2 / s + lam * s * s2]
        return [c2 * s + lam * s2 / s]

    sol = solve_ivp(rhs, (start, stop), [phi0], method="DOP853", rtol=1e-12, atol=1e-13)
    if not sol.success:
        raise IterationFailure(f"shooting integration failed: {sol.message}")
    return float(sol.y[0, -1])


def _mismatch(arc: Arc, phase: Phase, lam: float) -> float:
    frob = _frobenius_gas if phase is Phase.GAS else _frobenius_fluid
    delta = 1e-3 * min(1.0, arc.length)
    mid = 0.5 * (arc.theta_lo + arc.theta_hi)
    if arc.touches_north:
        f, pf = frob(delta, lam)
        left = _pruefer_angle(phase, lam, delta, mid, math.atan2(f, pf))
    else:
        left = _pruefer_angle(phase, lam, arc.theta_lo, mid, 0.0)
    if arc.touches_south:
        f, pf = frob(delta, lam)
        right = _pruefer_angle(phase, lam, PI - delta, mid, math.atan2(f, -pf))
    else:
        right = _pruefer_angle(phase, lam, arc.theta_hi, mid, PI)
    return left - right


def shoot_oracle(arc, phase, tol: float = 1e-10) -> float:
    """Ground-state eigenvalue by Pruefer-angle shooting.

    The left solution starts from the endpoint data (regular Frobenius branch
    at an axis endpoint, ``f = 0, w f' = 1`` at an interior endpoint), the
    right solution is integrated backwards the same way, and the angle
    mismatch at the midpoint, which is increasing in ``lam``, is driven to
    zero by safeguarded bisection.
    """
    arc = as_arc(arc)
    phase = Phase.coerce(phase)
    if not tol >= 1e-12:
        raise ValidationError(f"tol must be >= 1e-12, got {tol!r}")
    if _mismatch(arc, phase, 0.0) >= -1e-13:
        return 0.0
    hi = 1.0
    while _mismatch(arc, phase, hi) <= 0.0:
        hi *= 4.0
        if hi > 1e6:
            raise BracketFailure(f"no sign change of the shooting mismatch on {arc} below 1e6")
    lo = hi / 4.0 if hi > 1.0 else 0.0
    return brentq(lambda lam: _mismatch(arc, phase, lam), lo, hi, xtol=tol, rtol=1e-15, maxiter=400)


# ---------------------------------------------------------------------------
# arcs starting at the north pole


def _check_angle(theta: float):
    if not (0.0 < theta < PI):
        raise ValidationError(f"angle must lie in (0, pi), got {theta!r}")


def i_plus(theta: float, n_grid: int = DEFAULT_N) -> float:
    """Gas eigenvalue of the arc ``(0, theta)``."""
    _check_angle(theta)
    return eigenvalue(Arc(0.0, theta), Phase.GAS, n_grid).lam


def i_minus(theta: float, n_grid: int = DEFAULT_N) -> float:
    """Fluid eigenvalue of the arc ``(0, theta)``."""
    _check_angle(theta)
    return eigenvalue(Arc(0.0, theta), Phase.FLUID, n_grid).lam


def _cap_eigen(method: str, n_grid: int, tol: float):
    if method == "grid":
        return (lambda t: i_plus(t, n_grid)), (lambda t: i_minus(t, n_grid))
    if method == "shoot":
        shoot_tol = max(1e-12, min(tol, 1e-10))
        return (
            lambda t: shoot_oracle(Arc(0.0, t), Phase.GAS, shoot_tol),
            lambda t: shoot_oracle(Arc(0.0, t), Phase.FLUID, shoot_tol),
        )
    raise ValidationError(f"unknown method {method!r}; expected 'grid' or 'shoot'")


@dataclass(frozen=True)
class MatchedHomogeneity:
    theta1: float
    alpha_star: float
    lambda_star: float
    residual: float
    gas_arc: Arc
    fluid_arc: Arc
    method: str = "grid"

    @property
    def reflected_pair(self) -> tuple:
        """The same solution with the gas phase touching the south pole."""
        return self.gas_arc.reflected(), self.fluid_arc.reflected()

    @property
    def split_value(self) -> float:
        return 2.0 * math.sqrt(self.alpha_star * (self.alpha_star + 1.0))


def matched_homogeneity(tol: float = 1e-8, n_grid: int = DEFAULT_N, method: str = "grid") -> MatchedHomogeneity:
    """Locate the angle where gas degree plus one equals fluid degree.

    Solves ``I+(pi - theta) = I-(theta)`` for ``theta`` by bracketed bisection.
    The gas arc is ``(0, pi - theta1)`` (natural at the north pole) and the
    fluid arc its complement ``(pi - theta1, pi)``.
    """
    if not tol >= 1e-10:
        raise ValidationError(f"tol must be >= 1e-10, got {tol!r}")
    ip, im = _cap_eigen(method, n_grid, tol)

    def gap(theta):
        return ip(PI - theta) - im(theta)

    edge = (MIN_CELLS + 4) * PI / n_grid
    lo, hi = edge, PI - edge
    g_lo, g_hi = gap(lo), gap(hi)
    if not (g_lo < 0.0 < g_hi):
        raise MonotonicityViolation(
            f"I+(pi-theta) - I-(theta) does not change sign on [{lo:.3g}, {hi:.3g}]: {g_lo:.3g}, {g_hi:.3g}"
        )
    theta1 = brentq(gap, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=500)
    lam_plus = ip(PI - theta1)
    lam_minus = im(theta1)
    a_plus = alpha_of(lam_plus, Phase.GAS)
    a_minus = alpha_of(lam_minus, Phase.FLUID)
    residual = abs(1.0 + a_plus - a_minus)
    if residual >= tol:
        raise IterationFailure("matched homogeneity residual above tolerance", residual)
    return MatchedHomogeneity(
        theta1=theta1,
        alpha_star=a_plus,
        lambda_star=lam_plus,
        residual=residual,
        gas_arc=Arc(0.0, PI - theta1),
        fluid_arc=Arc(PI - theta1, PI),
        method=method,
    )


@dataclass(frozen=True)
class TaylorCone:
    theta_T: float
    opening_deg: float
    lam: float
    alpha: float
    method: str = "grid"

    @property
    def theta_T_deg(self) -> float:
        return math.degrees(self.theta_T)


def taylor_cone(tol: float = 1e-8, n_grid: int = DEFAULT_N, method: str = "grid") -> TaylorCone:
    """Degree-1/2 gas cap: solve ``I+(theta_T) = 3/4``.

    The fluid cone is the complement ``(theta_T, pi)``, so its full opening
    angle is ``2 (pi - theta_T)``.
    """
    if not tol >= 1e-10:
        raise ValidationError(f"tol must be >= 1e-10, got {tol!r}")
    ip, _ = _cap_eigen(method, n_grid, tol)
    target = 0.75
    lo, hi = PI / 2, PI - (MIN_CELLS + 4) * PI / n_grid
    g_lo, g_hi = ip(lo) - target, ip(hi) - target
    if not (g_lo > 0.0 > g_hi):
        raise MonotonicityViolation(f"I+ - 3/4 does not change sign on [{lo:.3g}, {hi:.3g}]")
    theta_T = brentq(lambda t: ip(t) - target, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=500)
    lam = ip(theta_T)
    if abs(lam - target) > max(tol, 1e-12):
        raise IterationFailure("Taylor-cone eigenvalue residual above tolerance", abs(lam - target))
    return TaylorCone(
        theta_T=theta_T,
        opening_deg=2.0 * (PI - theta_T) * 180.0 / PI,
        lam=lam,
        alpha=alpha_of(lam, Phase.GAS),
        method=method,
    )


# ---------------------------------------------------------------------------
# Legendre functions of fractional degree (series oracle)


def legendre_p(nu: float, x: float, eps: float = 1e-17, max_terms: int = 200000) -> float:
    """P_nu(x) from the hypergeometric series 2F1(-nu, nu+1; 1; (1-x)/2).

    Converges for ``-1 < x <= 1``; slow as ``x -> -1``.  Summation stops once
    the geometric tail bound ``|t_k| z / (1 - z)`` drops below ``eps``.
    """
    z = (1.0 - x) / 2.0
    if not (0.0 <= z < 1.0):
        raise ValidationError(f"series needs -1 < x <= 1, got {x!r}")
    term = 1.0
    total = 1.0
    for k in range(1, max_terms):
        term *= (k - 1 - nu) * (nu + k) / (k * k) * z
        total += term
        if k > 2 * abs(nu) + 2 and abs(term) * z / (1.0 - z) < eps:
            return total
    raise IterationFailure("Legendre series did not converge", abs(term))


def legendre_first_zero(nu: float, tol: float = 1e-14) -> float:
    """Smallest ``theta`` in ``(0, pi)`` with ``P_nu(cos theta) = 0`` (bisection)."""
    n = 512
    grid = np.linspace(0.0, 0.98 * PI, n)
    values = [legendre_p(nu, math.cos(t)) for t in grid]
    for k in range(1, n):
        if values[k - 1] > 0.0 >= values[k]:
            lo, hi = grid[k - 1], grid[k]
            break
    else:
        raise BracketFailure(f"P_{nu} has no zero on (0, pi)")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if legendre_p(nu, math.cos(mid)) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def clear_cache():
    _component_solve.cache_clear()


def substitution_terms(f, df, arc) -> tuple:
    """Both sides of the identity behind ``lam-(G) >= 1 + lam+(G)``.

    With ``g = sin(theta) f`` and ``f`` vanishing at both ends of ``arc``:

        int (g')^2 / sin  =  int f^2 / sin  +  int sin (f')^2.

    Returns ``(lhs, rhs, int sin f^2)`` computed by adaptive quadrature.
    """
    arc = as_arc(arc)
    lo, hi = arc.theta_lo, arc.theta_hi

    def dg(t):
        return math.cos(t) * f(t) + math.sin(t) * df(t)

    opts = {"epsabs": 1e-13, "epsrel": 1e-12, "limit": 200}
    lhs = quad(lambda t: dg(t) ** 2 / math.sin(t), lo, hi, **opts)[0]
    rhs = quad(lambda t: f(t) ** 2 / math.sin(t), lo, hi, **opts)[0] + quad(
        lambda t: math.sin(t) * df(t) ** 2, lo, hi, **opts
    )[0]
    mass = quad(lambda t: math.sin(t) * f(t) ** 2, lo, hi, **opts)[0]
    return lhs, rhs, mass


def random_arcs(rng: np.random.Generator, count: int, min_length: float = 0.05) -> list:
    """Pseudorandom interior and axis-touching arcs for property checks."""
    arcs = []
    while len(arcs) < count:
        kind = rng.integers(0, 4)
        a, b = np.sort(rng.uniform(0.0, PI, 2))
        if kind == 1:
            a = 0.0
        elif kind == 2:
            b = PI
        if b - a < min_length or (kind == 3 and a == 0.0 and b == PI):
            continue
        arcs.append(Arc(float(a), float(b)))
    return arcs


__all__ = [
    "Arc",
    "ArcSet",
    "EigenResult",
    "MatchedHomogeneity",
    "Phase",
    "TaylorCone",
    "alpha_of",
    "as_arc",
    "as_arcset",
    "eigenvalue",
    "extrapolated_eigenvalue",
    "i_minus",
    "i_plus",
    "lambda_of",
    "legendre_first_zero",
    "legendre_p",
    "matched_homogeneity",
    "random_arcs",
    "rayleigh_quotient",
    "shoot_oracle",
    "substitution_terms",
    "taylor_cone",
]
