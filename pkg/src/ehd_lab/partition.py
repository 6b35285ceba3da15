"""Search for the infimum of sqrt(lam+(G)) + sqrt(lam-(complement of G)).

Two families of gas sets ``G`` are searched: a single cap ``(0, theta)`` and
two polar caps ``(0, a) U (b, pi)`` with the fluid band ``(a, b)`` between
them.  Both searches are deterministic: a uniform scan followed by golden
section (1-D) or alternating golden section (2-D).  The two-component result
is numerical evidence about whether the infimum prefers a connected gas set;
it proves nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ._parallel import parallel_map
from .arcs import MIN_CELLS, PI, Arc, ArcSet, Phase, eigenvalue
from .errors import ValidationError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
SCAN_N_GRID = 1024


@dataclass(frozen=True)
class SplitConfig:
    gamma_plus: ArcSet
    gamma_minus: ArcSet
    family: str

    def __post_init__(self):
        if self.family not in ("connected", "two_component"):
            raise ValidationError(f"unknown family {self.family!r}")
        pieces = sorted(
            [(a.theta_lo, a.theta_hi, "+") for a in self.gamma_plus]
            + [(a.theta_lo, a.theta_hi, "-") for a in self.gamma_minus]
        )
        if pieces[0][0] != 0.0 or pieces[-1][1] != PI:
            raise ValidationError("split does not cover [0, pi]")
        for left, right in zip(pieces, pieces[1:]):
            if left[1] != right[0]:
                raise ValidationError(f"split pieces {left[:2]} and {right[:2]} leave a gap or overlap")

    @classmethod
    def connected(cls, theta: float) -> "SplitConfig":
        return cls(ArcSet.of((0.0, theta)), ArcSet.of((theta, PI)), "connected")

    @classmethod
    def two_component(cls, a: float, b: float) -> "SplitConfig":
        if not 0.0 < a < b < PI:
            raise ValidationError(f"need 0 < a < b < pi, got a={a!r}, b={b!r}")
        return cls(ArcSet.of((0.0, a), (b, PI)), ArcSet.of((a, b)), "two_component")

    def reflected(self) -> "SplitConfig":
        plus, minus = self.gamma_plus.reflected(), self.gamma_minus.reflected()
        return SplitConfig(plus, minus, self.family)

    @property
    def params(self) -> tuple:
        if self.family == "connected":
            return (self.gamma_plus.arcs[0].theta_hi,)
        return (self.gamma_minus.arcs[0].theta_lo, self.gamma_minus.arcs[0].theta_hi)


@dataclass
class BetaStarReport:
    best_value: float
    best_config: SplitConfig
    scan: list = field(repr=False)
    certified_lower_bound_ok: bool
    tol: float
    grid_error: float
    n_grid: int
    evaluations: int = 0
    connected_value: float | None = None
    undercuts_connected: bool | None = None
    note: str = ""

    @property
    def minimizer(self) -> tuple:
        return self.best_config.params


def split_value(config: SplitConfig, n_grid: int = SCAN_N_GRID) -> float:
    lam_plus = eigenvalue(config.gamma_plus, Phase.GAS, n_grid).lam
    lam_minus = eigenvalue(config.gamma_minus, Phase.FLUID, n_grid).lam
    return math.sqrt(lam_plus) + math.sqrt(lam_minus)


def golden_section(f, a: float, b: float, tol: float = 1e-10, max_iter: int = 200):
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _margin(n_grid: int) -> float:
    return (MIN_CELLS + 1) * PI / n_grid


def beta_star_connected(n_scan: int = 256, tol: float = 1e-6, n_grid: int = SCAN_N_GRID) -> BetaStarReport:
    """Minimize the split value over single gas caps ``(0, theta)``.

    Caps touching the south pole are covered by reflection symmetry.
    """
    if n_scan < 64:
        raise ValidationError(f"n_scan must be >= 64, got {n_scan}")
    lo = _margin(n_grid)
    hi = PI - lo
    step = (hi - lo) / (n_scan - 1)
    thetas = [lo + k * step for k in range(n_scan)]

    def value(theta):
        return split_value(SplitConfig.connected(theta), n_grid)

    values = parallel_map(value, thetas)
    scan = [(SplitConfig.connected(t), v) for t, v in zip(thetas, values)]
    k = min(range(n_scan), key=lambda i: (values[i], thetas[i]))
    a = thetas[max(k - 1, 0)]
    b = thetas[min(k + 1, n_scan - 1)]
    theta_best, best = golden_section(value, a, b, tol=1e-10)
    if values[k] < best:
        theta_best, best = thetas[k], values[k]
    config = SplitConfig.connected(theta_best)
    best = split_value(config, n_grid)
    grid_error = abs(split_value(config, 2 * n_grid) - best)
    return BetaStarReport(
        best_value=best,
        best_config=config,
        scan=scan,
        certified_lower_bound_ok=best + grid_error >= 2.0 - tol,
        tol=tol,
        grid_error=grid_error,
        n_grid=n_grid,
        evaluations=n_scan,
    )


def beta_star_two_component(
    n_scan: int = 64,
    tol: float = 1e-6,
    n_grid: int = SCAN_N_GRID,
    connected: BetaStarReport | None = None,
) -> BetaStarReport:
    """Minimize over two polar gas caps around a fluid band ``(a, b)``.

    The comparison with the connected family is reported in
    ``undercuts_connected``; it is numerical evidence only.
    """
    if n_scan < 32:
        raise ValidationError(f"n_scan must be >= 32 per axis, got {n_scan}")
    lo = _margin(n_grid)
    hi = PI - lo
    step = (hi - lo) / (n_scan - 1)
    axis = [lo + k * step for k in range(n_scan)]
    min_band = 2 * lo
    pairs = [(a, b) for a in axis for b in axis if b - a >= min_band]

    def value(ab):
        return split_value(SplitConfig.two_component(*ab), n_grid)

    values = parallel_map(value, pairs)
    scan = [(SplitConfig.two_component(*p), v) for p, v in zip(pairs, values)]
    k = min(range(len(pairs)), key=lambda i: (values[i], pairs[i]))
    a, b = pairs[k]
    best = values[k]
    for _ in range(20):
        prev = best
        a_lo, a_hi = max(lo, a - step), min(b - min_band, a + step)
        if a_hi > a_lo:
            a_new, v = golden_section(lambda t: value((t, b)), a_lo, a_hi, tol=1e-9)
            if v < best:
                a, best = a_new, v
        b_lo, b_hi = max(a + min_band, b - step), min(hi, b + step)
        if b_hi > b_lo:
            b_new, v = golden_section(lambda t: value((a, t)), b_lo, b_hi, tol=1e-9)
            if v < best:
                b, best = b_new, v
        if prev - best <= 1e-12:
            break
    config = SplitConfig.two_component(a, b)
    best = split_value(config, n_grid)
    grid_error = abs(split_value(config, 2 * n_grid) - best)
    if connected is None:
        connected = beta_star_connected(max(64, n_scan), tol, n_grid)
    return BetaStarReport(
        best_value=best,
        best_config=config,
        scan=scan,
        certified_lower_bound_ok=best + grid_error >= 2.0 - tol,
        tol=tol,
        grid_error=grid_error,
        n_grid=n_grid,
        evaluations=len(pairs),
        connected_value=connected.best_value,
        undercuts_connected=best < connected.best_value - tol,
        note="numerical evidence only; the connectedness of the minimizer is not proven",
    )


def chain_inequality(gamma: ArcSet, n_grid: int = SCAN_N_GRID) -> tuple:
    """Both sides of sqrt(l+(G)) + sqrt(1 + l+(G^c)) <= sqrt(l+(G)) + sqrt(l-(G^c)).

    ``gamma`` must be a single cap ``(0, theta)``; returns ``(left, right)``.
    """
    theta = gamma.arcs[0].theta_hi
    comp = ArcSet.of((theta, PI))
    lp = eigenvalue(gamma, Phase.GAS, n_grid).lam
    left = math.sqrt(lp) + math.sqrt(1.0 + eigenvalue(comp, Phase.GAS, n_grid).lam)
    right = math.sqrt(lp) + math.sqrt(eigenvalue(comp, Phase.FLUID, n_grid).lam)
    return left, right


__all__ = [
    "BetaStarReport",
    "SplitConfig",
    "beta_star_connected",
    "beta_star_two_component",
    "chain_inequality",
    "golden_section",
    "split_value",
]
