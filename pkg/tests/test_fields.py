import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ehd_lab.arcs import PI, eigenvalue, matched_homogeneity
from ehd_lab.errors import ResolutionError, SupportError, SupportOverlapError, ValidationError
from ehd_lab.fields import (
    FLUID,
    GAS,
    BumpVectorField,
    FreeBoundaryCurve,
    GrowthParams,
    MeridianField,
    MonitorCurve,
    acf_phi,
    boundary_mass,
    caccioppoli_check,
    cauchy_schwarz_chain,
    cusp_ratio,
    energy_ring,
    field_from_function,
    first_variation_residual,
    flux_identity_residual,
    fluid_velocity,
    jm_relation_residual,
    make_homogeneous_field,
    matched_field,
    monitor,
    random_test_fields,
    rescale_field,
    weiss_m,
    weiss_m_prime_residual,
    weiss_m_prime_rhs,
)

N = 128


@pytest.fixture(scope="module")
def fluid_field():
    return field_from_function(lambda x1, x2: -(x1**2), N, N)


@pytest.fixture(scope="module")
def gas_field():
    return field_from_function(lambda x1, x2: x2, N, N, phase="gas")


@pytest.fixture(scope="module")
def matched():
    return matched_homogeneity()


@pytest.fixture(scope="module")
def matched_f(matched):
    return matched_field(N, 2 * N, matched=matched)


def interior_radii(f, lo=0.2, hi=0.9):
    r = f.r
    return r[(r >= lo - 1e-12) & (r <= hi + 1e-12)]


# --- construction ----------------------------------------------------------------


def test_grid_never_touches_axis(gas_field):
    assert gas_field.theta[0] == pytest.approx(PI / (2 * N))
    assert np.all(gas_field.x1 > 0)


def test_field_is_immutable(gas_field):
    with pytest.raises(ValueError):
        gas_field.values[0, 0] = 1.0


def test_default_phase_is_sign():
    f = field_from_function(lambda x1, x2: x2, 16, 16)
    assert set(np.unique(f.phase)) == {GAS, FLUID}


@pytest.mark.parametrize(
    "kwargs",
    [
        {"values": np.zeros((2, 8)), "dr": 0.1},
        {"values": np.zeros((8, 8)), "dr": -0.1},
        {"values": np.full((8, 8), np.nan), "dr": 0.1},
        {"values": np.zeros((8, 8)), "dr": 0.1, "center": (0.5, 0.0)},
        {"values": np.zeros((8, 8)), "dr": 0.1, "center": (0.5, 0.0), "full_circle": True},
    ],
)
def test_field_validation(kwargs):
    with pytest.raises(ValidationError):
        MeridianField(**kwargs)


def test_homogeneous_gas_cap_is_x2():
    eig = eigenvalue((0.0, PI / 2), "gas", 2048)
    f = make_homogeneous_field(1.0, eig, None, 64, 64)
    # r cos(theta) up to normalization on the upper quarter disk
    upper = f.theta < PI / 2
    ratio = f.values[:, upper] / f.x2[:, upper]
    assert np.ptp(ratio) < 1e-5 * np.mean(ratio)
    assert np.all(f.values[:, ~upper] == 0.0)


def test_homogeneous_fluid_is_neg_x1_sq():
    eig = eigenvalue((0.0, PI), "fluid", 2048)
    f = make_homogeneous_field(1.0, None, eig, 64, 64)
    ratio = f.values / -(f.x1**2)
    assert np.ptp(ratio) < 1e-4 * np.mean(ratio)


def test_overlap_rejected():
    g = eigenvalue((0.0, 2.0), "gas", 512)
    m = eigenvalue((1.5, PI), "fluid", 512)
    with pytest.raises(SupportOverlapError):
        make_homogeneous_field(1.0, g, m, 16, 16)


# --- closed forms ----------------------------------------------------------------


@pytest.mark.parametrize("r", [0.3, 0.5, 0.8125])
def test_energy_and_mass_closed_forms(fluid_field, gas_field, r):
    tol = fluid_field.tolerance()
    assert energy_ring(fluid_field, r, "fluid") == pytest.approx(8 * r**3 / 3, abs=tol)
    assert energy_ring(gas_field, r, "gas") == pytest.approx(2 * r**3 / 3, abs=tol)
    assert boundary_mass(fluid_field, r, "fluid") == pytest.approx(4 * r**4 / 3, abs=tol)
    assert boundary_mass(gas_field, r, "gas") == pytest.approx(2 * r**4 / 3, abs=tol)
    assert energy_ring(fluid_field, r, "gas") == 0.0


def test_zero_field_gives_zero():
    z = MeridianField(np.zeros((32, 32)), 1 / 32)
    assert energy_ring(z, 0.5) == 0.0
    assert boundary_mass(z, 0.5) == 0.0
    assert weiss_m(z, 0.5, 1.0) == 0.0
    assert weiss_m_prime_residual(z, z.r[15], 1.0) == 0.0
    assert np.all(jm_relation_residual(z, 1.0).values == 0.0)
    assert caccioppoli_check(z).C_min == 0.0


def test_energy_is_nondecreasing(matched_f):
    curve = monitor(matched_f, "i_total")
    assert np.all(np.diff(curve.values) >= 0)


def test_radius_checks(gas_field):
    with pytest.raises(ResolutionError):
        energy_ring(gas_field, 2 * gas_field.dr)
    with pytest.raises(ValidationError):
        energy_ring(gas_field, 1.5)


def test_off_grid_radius_interpolates(gas_field):
    r = 0.5 + gas_field.dr / 3
    assert energy_ring(gas_field, r) == pytest.approx(2 * r**3 / 3, abs=gas_field.tolerance())


def test_convergence_is_second_order():
    errs = []
    for n in (32, 64, 128):
        f = field_from_function(lambda x1, x2: -(x1**2), n, n)
        errs.append(max(abs(weiss_m(f, r, 1.0)) for r in interior_radii(f)))
    assert errs[0] / errs[1] > 3.5 and errs[1] / errs[2] > 3.5


# --- monitors ----------------------------------------------------------------------


def test_weiss_zero_on_exact_fields(fluid_field, gas_field):
    for f in (fluid_field, gas_field):
        for r in interior_radii(f):
            assert abs(weiss_m(f, r, 1.0)) <= 10 * f.h**2


def test_weiss_derivative_mismatched_beta(fluid_field):
    # u = -x1^2 with beta = 0.5: M = (2/3) r and both sides of M' equal 2/3
    f = fluid_field
    r = f.r[63]
    assert weiss_m(f, r, 0.5) == pytest.approx(2 * r / 3, abs=f.tolerance())
    assert weiss_m_prime_rhs(f, r, 0.5) == pytest.approx(2 / 3, abs=f.tolerance())
    assert weiss_m_prime_residual(f, r, 0.5) <= f.tolerance()


def test_weiss_derivative_matching_beta(gas_field):
    assert weiss_m_prime_residual(gas_field, gas_field.r[63], 1.0) <= gas_field.tolerance()


def test_weiss_zero_on_matched(matched_f, matched):
    for r in interior_radii(matched_f):
        assert abs(weiss_m(matched_f, r, matched.alpha_star)) <= matched_f.tolerance()


def test_jm_relation(fluid_field, gas_field, matched_f, matched):
    for f, beta in ((fluid_field, 1.0), (gas_field, 0.7), (matched_f, matched.alpha_star)):
        c = jm_relation_residual(f, beta)
        sel = (c.radii >= 0.2) & (c.radii <= 0.9)
        assert np.max(np.abs(c.values[sel])) <= 10 * f.h


def test_flux_identity(fluid_field, gas_field, matched_f):
    for f in (fluid_field, gas_field, matched_f):
        assert max(flux_identity_residual(f, r) for r in interior_radii(f)) <= f.tolerance()


def test_flux_identity_detects_non_solution():
    # div(x1 grad(x1^2)) = 4 x1, so the identity picks up a bulk term
    f = field_from_function(lambda x1, x2: x2 + 2 * x1**2, 64, 64, phase="gas")
    assert flux_identity_residual(f, 0.8) > 10 * f.tolerance()


def test_first_variation_exact_and_matched(fluid_field, gas_field, matched_f):
    rng = np.random.default_rng(7)
    for f in (fluid_field, gas_field, matched_f):
        tests = random_test_fields(rng, 15, f)
        worst = max(abs(first_variation_residual(f, t)) for t in tests)
        assert worst <= 10 * f.h**2 * f.scale


def test_first_variation_detects_wrong_balance(matched):
    gas = eigenvalue(matched.gas_arc, "gas", 2048)
    fluid = eigenvalue(matched.fluid_arc, "fluid", 2048)
    good = make_homogeneous_field(matched.alpha_star, gas, fluid, 64, 128)
    bad = make_homogeneous_field(matched.alpha_star, gas, fluid, 64, 128, fluid_scale=3.0)
    bump = BumpVectorField((0.4 * math.sin(PI - matched.theta1), 0.4 * math.cos(PI - matched.theta1)), 0.3, a1=1.0)
    assert abs(first_variation_residual(bad, bump)) > 50 * abs(first_variation_residual(good, bump))


def test_first_variation_support_errors(gas_field):
    with pytest.raises(SupportError):
        first_variation_residual(gas_field, BumpVectorField((0.2, 0.5), 0.5))


def test_bump_derivative_matches_finite_difference():
    b = BumpVectorField((0.3, 0.1), 0.4, a1=0.7, b1=-0.3, a2=0.5, b2=1.1)
    x1, x2, e = 0.35, 0.05, 1e-6
    _, _, d = b(x1, x2)
    for k, (dx1, dx2) in enumerate(((e, 0.0), (0.0, e))):
        p = b(x1 + dx1, x2 + dx2)
        m = b(x1 - dx1, x2 - dx2)
        for a in range(2):
            assert (p[a] - m[a]) / (2 * e) == pytest.approx(d[a][k], rel=1e-6, abs=1e-8)


# --- ACF -------------------------------------------------------------------------------


def test_phi_zero_for_one_phase(fluid_field, gas_field):
    for f in (fluid_field, gas_field):
        assert np.all(monitor(f, "phi", beta_star=3.8).values == 0.0)


def test_phi_constant_at_scaling_exponent(matched_f, matched):
    c = monitor(matched_f, "phi", beta_star=2 * matched.alpha_star + 1)
    sel = c.radii >= 0.2
    assert np.ptp(c.values[sel]) <= 10 * matched_f.h**2 * np.mean(c.values[sel])


def test_phi_nondecreasing_for_true_beta_star(matched_f):
    c = monitor(matched_f, "phi", beta_star=3.8290578703)
    assert np.all(np.diff(c.values) >= -matched_f.tolerance())


def test_acf_decay_below_beta_star(matched_f):
    # r^(-2 alpha) I+ I- -> 0 for alpha < 2 <= beta*
    small = acf_phi(matched_f, 4 * matched_f.dr, 1.5)
    large = acf_phi(matched_f, 0.5, 1.5)
    assert small < 0.05 * large


def test_rescaling_identity(matched_f):
    bs, gamma = 3.8290578703, 0.25
    for rm in (0.5, 0.25):
        g = rescale_field(matched_f, rm, gamma)
        lhs = acf_phi(g, 1.0, bs)
        rhs = rm ** (2 * (bs - 2 * gamma - 1)) * acf_phi(matched_f, rm, bs)
        assert lhs == pytest.approx(rhs, rel=1e-12)
        h = rescale_field(matched_f, rm, gamma, resample=True)
        assert acf_phi(h, 1.0, bs) == pytest.approx(rm ** (2 * (bs - 2 * gamma - 1)) * acf_phi(matched_f, rm, bs), rel=1e-3)


def test_rescale_identity_at_one(gas_field):
    g = rescale_field(gas_field, 1.0, 0.3)
    assert np.array_equal(g.values, gas_field.values)
    with pytest.raises(ValidationError):
        rescale_field(gas_field, 0.5, 0.5)
    with pytest.raises(ValidationError):
        rescale_field(gas_field, 1.5, 0.2)


def test_growth_params():
    assert GrowthParams(gamma=0.2).n == 2
    with pytest.raises(ValidationError):
        GrowthParams(gamma=0.6)


# mass * radial scales like coef^4; keep it representable (no underflow to 0)
COEF = st.floats(-2.0, 2.0).filter(lambda c: c == 0.0 or abs(c) > 1e-50)


@settings(max_examples=20, deadline=None)
@given(st.lists(COEF, min_size=4, max_size=4), st.integers(4, 31))
def test_cauchy_schwarz_chain(coef, k):
    def u(x1, x2):
        return coef[0] * x2 + coef[1] * x1**2 + coef[2] * x1 * x2 + coef[3] * (x1**2 - x2**2)

    f = field_from_function(u, 32, 48)
    chain = cauchy_schwarz_chain(f, f.r[k])
    for part in chain.values():
        assert part["flux"] <= math.sqrt(part["mass"] * part["radial"]) * (1 + 1e-12) + 1e-300
        assert part["energy"] >= 2 * math.sqrt(part["radial"] * part["tangential"]) * (1 - 1e-12)


def test_caccioppoli_reports_constants(fluid_field, gas_field):
    for f in (fluid_field, gas_field):
        rep = caccioppoli_check(f)
        assert rep.radius == pytest.approx(0.5)
        assert 0 < rep.C_min < math.inf


def test_off_axis_full_disk_field():
    # u = x2 around an off-axis center, gas everywhere: flux identity still holds
    f = field_from_function(lambda x1, x2: x2, 48, 96, r_max=0.5, phase="gas", center=(1.0, 0.2), full_circle=True)
    assert flux_identity_residual(f, 0.4) <= f.tolerance()
    rng = np.random.default_rng(3)
    for t in random_test_fields(rng, 5, f):
        assert abs(first_variation_residual(f, t)) <= 10 * f.h**2 * f.scale


def test_fluid_velocity_of_uniform_flow():
    # stream function -x1^2 / 2 is uniform axial flow w = (0, -1)
    f = field_from_function(lambda x1, x2: -0.5 * x1**2, 32, 32)
    w1, w2 = fluid_velocity(f)
    assert np.max(np.abs(w1)) <= 10 * f.h**2
    assert np.max(np.abs(w2 + 1.0)) <= 10 * f.h**2


# --- cusp ratio -----------------------------------------------------------------------


@pytest.mark.parametrize("angle", [0.1, 0.7, 1.3])
def test_cusp_ratio_straight_ray(angle):
    t = np.linspace(0, 1, 50)
    curve = FreeBoundaryCurve(np.column_stack((t * math.sin(angle), t * math.cos(angle))))
    c = cusp_ratio(curve)
    finite = c.values[1:]
    assert np.all(np.abs(finite - math.tan(angle)) <= 1e-12 * max(1.0, math.tan(angle)))
    assert c.meta["infinite"] == [0]


def test_cusp_ratio_parabola():
    t = np.geomspace(1e-4, 0.5, 200)
    curve = FreeBoundaryCurve(np.column_stack((t**2, t)))
    assert cusp_ratio(curve).meta["slope"] == pytest.approx(1.0, abs=0.05)


def test_cusp_ratio_requires_origin_start():
    with pytest.raises(ValidationError):
        cusp_ratio(FreeBoundaryCurve([[0.5, 0.5], [0.6, 0.7]]))


def test_monitor_curve_validation():
    with pytest.raises(ValidationError):
        MonitorCurve([0.2, 0.1], [0.0, 0.0], "phi")
    with pytest.raises(ValidationError):
        MonitorCurve([0.1, 0.2], [0.0, np.inf], "phi")
    with pytest.raises(ValidationError):
        MonitorCurve([0.1], [0.0], "bogus")
