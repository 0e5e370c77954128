import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import relerr

from liecurv.backend import Pair
from liecurv.curvature import curvature_numerator_generic, curvature_numerator_semidirect
from liecurv.errors import NotDivergenceFree
from liecurv.geodesic import geodesic_rhs, rhs_magnetic, rhs_semidirect
from liecurv.sampling import rng_for_seed, sample_planes
from liecurv import torus
from liecurv.torus import (
    COS,
    SIN,
    TrigFunction,
    TrigVectorField,
    ad_transpose_full,
    ad_transpose_vol,
    arnold_flat_curvature,
    directional_derivative,
    divergence_free_modes,
    field_inner,
    function_inner,
    function_modes,
    grad,
    jacobi_lie_bracket,
    jacobian_transpose_apply,
    leray_project,
    mhd_mixed_plane,
    mhd_pure_magnetic_plane,
    multiply,
    q_project,
    scalar_derivative,
    truncate_state,
)

GRID = np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False)
X1, X2 = np.meshgrid(GRID, GRID, indexing="ij")


def grid_close(f: TrigFunction, values, tol=1e-12):
    return float(np.max(np.abs(f.sample(X1, X2) - values))) <= tol


def random_function(rng, band=2, scale=1.0) -> TrigFunction:
    modes = {}
    for k in torus.canonical_wavevectors(band):
        for parity in (COS, SIN):
            modes[(k[0], k[1], parity)] = scale * rng.standard_normal()
    modes[(0, 0, COS)] = scale * rng.standard_normal()
    return TrigFunction(modes)


def random_divfree_field(rng, band=2, scale=1.0) -> TrigVectorField:
    basis = divergence_free_modes(band)
    coeffs = scale * rng.standard_normal(len(basis))
    total = basis[0] * float(coeffs[0])
    for b, c in zip(basis[1:], coeffs[1:]):
        total = total + float(c) * b
    return total


def random_full_field(rng, band=2, scale=1.0) -> TrigVectorField:
    return TrigVectorField(random_function(rng, band, scale), random_function(rng, band, scale))


SHEAR = TrigVectorField(TrigFunction.mode(SIN, (0, 1)), TrigFunction.zero())  # (sin x2, 0)


class TestCanonicalForm:
    def test_sin_zero_mode_forbidden(self):
        assert TrigFunction({(0, 0, SIN): 3.0}).modes == {}

    def test_negative_wavevector_folds(self):
        f = TrigFunction({(-1, 2, COS): 1.0})
        assert f.modes == {(1, -2, COS): 1.0}
        g = TrigFunction({(-1, 2, SIN): 1.0})
        assert g.modes == {(1, -2, SIN): -1.0}

    def test_zero_coefficients_dropped(self):
        f = TrigFunction({(1, 0, COS): 1.0}) - TrigFunction({(1, 0, COS): 1.0})
        assert f.modes == {}

    def test_fold_accumulates(self):
        f = TrigFunction({(0, 1, COS): 1.0, (0, -1, COS): 1.0})
        assert f.modes == {(0, 1, COS): 2.0}


class TestMultiply:
    def test_cos_squared(self):
        c = TrigFunction.mode(COS, (1, 0))
        assert multiply(c, c).modes == {(0, 0, COS): 0.5, (2, 0, COS): 0.5}

    def test_identity_element(self):
        c = TrigFunction.mode(COS, (1, 0))
        assert multiply(c, TrigFunction.constant(1.0)).modes == c.modes

    def test_cos_times_sin_canonical_expansion(self):
        c = TrigFunction.mode(COS, (1, 0))
        s = TrigFunction.mode(SIN, (0, 1))
        prod = multiply(c, s)
        assert prod.modes == {(1, 1, SIN): 0.5, (1, -1, SIN): -0.5}
        assert grid_close(prod, np.cos(X1) * np.sin(X2))

    def test_commutative(self):
        rng = rng_for_seed(1)
        f, g = random_function(rng), random_function(rng)
        diff = multiply(f, g) - multiply(g, f)
        assert diff.coefficient_scale() < 1e-14  # accumulation order only

    def test_support_in_minkowski_sum(self):
        rng = rng_for_seed(2)
        f, g = random_function(rng, band=2), random_function(rng, band=3)
        assert multiply(f, g).max_wavenumber() <= 5

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000))
    def test_grid_validation_random_products(self, seed):
        rng = rng_for_seed(seed)
        f, g = random_function(rng), random_function(rng)
        prod = multiply(f, g)
        assert grid_close(prod, f.sample(X1, X2) * g.sample(X1, X2), tol=1e-11)

    def test_product_rule(self):
        rng = rng_for_seed(3)
        f, g = random_function(rng), random_function(rng)
        lhs = multiply(f, g).partial(0)
        rhs = multiply(f.partial(0), g) + multiply(f, g.partial(0))
        diff = lhs - rhs
        assert diff.coefficient_scale() < 1e-13


class TestDerivatives:
    def test_partial_of_cos(self):
        f = TrigFunction.mode(COS, (2, 0), 3.0)
        assert f.partial(0).modes == {(2, 0, SIN): -6.0}
        assert f.partial(1).modes == {}

    def test_gradient_field(self):
        f = TrigFunction.mode(SIN, (1, 2))
        g = grad(f)
        assert g.comp1.modes == {(1, 2, COS): 1.0}
        assert g.comp2.modes == {(1, 2, COS): 2.0}

    def test_shear_self_transport_vanishes(self):
        assert directional_derivative(SHEAR, SHEAR).coefficient_scale() == 0.0

    def test_constant_field_translates(self):
        unit = TrigVectorField(TrigFunction.constant(1.0), TrigFunction.zero())
        rng = rng_for_seed(4)
        y = random_full_field(rng)
        out = directional_derivative(unit, y)
        assert (out.comp1 - y.comp1.partial(0)).coefficient_scale() < 1e-15
        assert (out.comp2 - y.comp2.partial(0)).coefficient_scale() < 1e-15

    def test_worked_cross_shear(self):
        x = SHEAR
        y = TrigVectorField(TrigFunction.zero(), TrigFunction.mode(SIN, (1, 0)))
        out = directional_derivative(x, y)
        # (0, sin x2 * cos x1), expanded to canonical modes
        assert out.comp1.modes == {}
        assert grid_close(out.comp2, np.sin(X2) * np.cos(X1))
        assert out.comp2.modes == {(1, 1, SIN): 0.5, (1, -1, SIN): -0.5}


class TestLeray:
    def test_gradients_project_to_zero(self):
        f = TrigFunction.mode(COS, (1, 2))
        assert leray_project(grad(f)).coefficient_scale() < 1e-16

    def test_divergence_free_unchanged(self):
        rng = rng_for_seed(5)
        x = random_divfree_field(rng)
        assert (leray_project(x) - x).coefficient_scale() < 1e-13

    def test_parallel_mode_killed(self):
        x = TrigVectorField(TrigFunction.mode(COS, (1, 0)), TrigFunction.zero())
        assert leray_project(x).coefficient_scale() < 1e-16

    def test_idempotent(self):
        rng = rng_for_seed(6)
        x = random_full_field(rng)
        p1 = leray_project(x)
        p2 = leray_project(p1)
        assert (p2 - p1).coefficient_scale() < 1e-14

    def test_result_divergence_free_and_orthogonal_to_gradients(self):
        rng = rng_for_seed(7)
        x = random_full_field(rng)
        p = leray_project(x)
        assert p.is_divergence_free(tol=1e-12)
        for _ in range(5):
            f = random_function(rng)
            assert abs(field_inner(p, grad(f))) < 1e-11

    def test_constant_mode_kept(self):
        x = TrigVectorField(TrigFunction.constant(2.0), TrigFunction.constant(-1.0))
        p = leray_project(x)
        assert (p - x).coefficient_scale() == 0.0

    def test_q_complements_p(self):
        rng = rng_for_seed(8)
        x = random_full_field(rng)
        total = leray_project(x) + q_project(x)
        assert (total - x).coefficient_scale() < 1e-14


class TestMetric:
    def test_mode_norms(self):
        one = TrigFunction.constant(1.0)
        assert function_inner(one, one) == pytest.approx(4.0 * np.pi**2)
        c = TrigFunction.mode(COS, (1, 1))
        s = TrigFunction.mode(SIN, (1, 1))
        assert function_inner(c, c) == pytest.approx(2.0 * np.pi**2)
        assert function_inner(s, s) == pytest.approx(2.0 * np.pi**2)

    def test_distinct_canonical_modes_orthogonal(self):
        a = TrigFunction.mode(COS, (1, 1))
        for other in (TrigFunction.mode(SIN, (1, 1)), TrigFunction.mode(COS, (1, 2)),
                      TrigFunction.constant(1.0)):
            assert function_inner(a, other) == 0.0

    def test_inner_matches_grid_quadrature(self):
        rng = rng_for_seed(9)
        f, g = random_function(rng), random_function(rng)
        # 32x32 rectangle rule is exact for band-4 trigonometric polynomials
        quad = np.sum(f.sample(X1, X2) * g.sample(X1, X2)) * (2 * np.pi / 32) ** 2
        assert relerr(function_inner(f, g), float(quad)) < 1e-12


class TestAdTransposeVol:
    def test_shear_self_ad_transpose_vanishes(self):
        out = ad_transpose_vol(SHEAR, SHEAR)
        assert out.coefficient_scale() < 1e-16

    def test_zero_field(self):
        assert ad_transpose_vol(TrigVectorField.zero(), SHEAR).coefficient_scale() == 0.0

    def test_rejects_compressible_input(self):
        bad = TrigVectorField(TrigFunction.mode(COS, (1, 0)), TrigFunction.zero())
        with pytest.raises(NotDivergenceFree):
            ad_transpose_vol(bad, SHEAR)

    def test_adjointness_on_band1_family(self):
        backend = torus.volume_preserving_backend()
        modes = divergence_free_modes(1)
        for x in modes:
            for z in modes:
                for y in modes:
                    lhs = field_inner(backend.bracket(x, z), y)
                    rhs = field_inner(z, ad_transpose_vol(x, y))
                    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs), abs(rhs)) + 1e-10


class TestAdTransposeFull:
    def test_divergence_free_reduction(self):
        rng = rng_for_seed(10)
        x = random_divfree_field(rng, band=1)
        y = random_full_field(rng, band=1)
        full = ad_transpose_full(x, y)
        unprojected = directional_derivative(x, y) + jacobian_transpose_apply(x, y)
        assert (full - unprojected).coefficient_scale() < 1e-12

    def test_worked_compressible_example(self):
        x = TrigVectorField(TrigFunction.mode(COS, (1, 0)), TrigFunction.zero())
        y = TrigVectorField(TrigFunction.constant(1.0), TrigFunction.zero())
        out = ad_transpose_full(x, y)
        # (div X) Y + (grad X)^T Y = -2 sin(x1) in the first component
        assert out.comp1.modes == {(1, 0, SIN): -2.0}
        assert out.comp2.modes == {}
        vals = out.sample(X1, X2)
        assert np.max(np.abs(vals[0] + 2.0 * np.sin(X1))) < 1e-12

    def test_adjointness_on_band1_family(self):
        backend = torus.full_field_backend()
        modes = torus.full_field_modes(1)[:12]
        for x in modes:
            for z in modes:
                for y in modes:
                    lhs = field_inner(backend.bracket(x, z), y)
                    rhs = field_inner(z, ad_transpose_full(x, y))
                    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs), abs(rhs)) + 1e-10


class TestPassiveScalarBackend:
    def setup_method(self):
        self.backend = torus.passive_scalar_backend()

    def test_h_defining_relation_band1(self):
        gmodes = divergence_free_modes(1)
        hmodes = function_modes(1)
        for x in gmodes:
            for f1 in hmodes:
                for f2 in hmodes:
                    lhs = function_inner(self.backend.b(x, f1), f2)
                    rhs = field_inner(self.backend.h_map(f1, f2), x)
                    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs)) + 1e-10

    def test_isometric(self):
        assert self.backend.isometric
        rng = rng_for_seed(11)
        x = random_divfree_field(rng, band=1)
        f = random_function(rng, band=1)
        skew = self.backend.b(x, f) + self.backend.b_transpose(x, f)
        assert skew.coefficient_scale() == 0.0

    def test_h_diagonal_projects_to_zero(self):
        rng = rng_for_seed(12)
        for _ in range(10):
            f = random_function(rng)
            assert self.backend.h_map(f, f).coefficient_scale() < 1e-14

    def test_geodesic_rhs_matches_displayed_system(self):
        rng = rng_for_seed(13)
        for _ in range(10):
            u = random_divfree_field(rng, band=2, scale=0.5)
            f = random_function(rng, band=2, scale=0.5)
            du, df = rhs_semidirect(self.backend, u, f)
            du_direct, df_direct = torus.passive_scalar_rhs_direct(u, f)
            assert (du - du_direct).coefficient_scale() < 1e-12
            assert (df - df_direct).coefficient_scale() < 1e-12

    def test_transport_example(self):
        f = TrigFunction.mode(COS, (1, 0))
        _, df = torus.passive_scalar_rhs_direct(SHEAR, f)
        assert grid_close(df, np.sin(X2) * np.sin(X1))


class TestCompressibleBackend:
    def setup_method(self):
        self.backend = torus.compressible_scalar_backend()

    def test_assembled_rhs_matches_displayed_system(self):
        rng = rng_for_seed(14)
        for _ in range(20):
            u = random_full_field(rng, band=1, scale=0.5)
            f = random_function(rng, band=1, scale=0.5)
            du, df = rhs_semidirect(self.backend, u, f)
            du_direct, df_direct = torus.compressible_rhs_direct(u, f)
            assert (du - du_direct).coefficient_scale() < 1e-12
            assert (df - df_direct).coefficient_scale() < 1e-12

    def test_divergence_free_velocity_no_scalar(self):
        rng = rng_for_seed(15)
        u = random_divfree_field(rng, band=1)
        du, _ = torus.compressible_rhs_direct(u, TrigFunction.zero())
        speed_sq = multiply(u.comp1, u.comp1) + multiply(u.comp2, u.comp2)
        expected = -directional_derivative(u, u) - 0.5 * grad(speed_sq)
        assert (du - expected).coefficient_scale() < 1e-13

    def test_rest_velocity(self):
        f = TrigFunction.mode(COS, (0, 1))
        du, df = torus.compressible_rhs_direct(TrigVectorField.zero(), f)
        expected = -torus.scale_field(f, grad(f))
        assert (du - expected).coefficient_scale() < 1e-15
        assert df.coefficient_scale() == 0.0

    def test_b_transpose_adjointness_band1(self):
        modes_g = torus.full_field_modes(1)[:8]
        modes_h = function_modes(1)
        for x in modes_g:
            for f1 in modes_h:
                for f2 in modes_h:
                    lhs = function_inner(self.backend.b(x, f1), f2)
                    rhs = function_inner(f1, self.backend.b_transpose(x, f2))
                    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs)) + 1e-10


class TestMhdBackend:
    def setup_method(self):
        self.backend = torus.mhd_backend()
        self.vol = torus.volume_preserving_backend()

    def test_no_field_reduces_to_euler(self):
        rng = rng_for_seed(16)
        u = random_divfree_field(rng, band=2, scale=0.5)
        du, db = rhs_magnetic(self.vol, u, TrigVectorField.zero())
        assert (du - torus.euler_rhs_direct(u)).coefficient_scale() < 1e-13
        assert db.coefficient_scale() == 0.0

    def test_aligned_state_is_stationary(self):
        rng = rng_for_seed(17)
        u = random_divfree_field(rng, band=2)
        du, db = rhs_magnetic(self.vol, u, u)
        assert du.coefficient_scale() < 1e-13
        assert db.coefficient_scale() < 1e-13

    def test_prop_assembly_matches_displayed_mhd(self):
        rng = rng_for_seed(18)
        for _ in range(20):
            u = random_divfree_field(rng, band=1, scale=0.5)
            b = random_divfree_field(rng, band=1, scale=0.5)
            du1, db1 = rhs_magnetic(self.vol, u, b)
            du2, db2 = torus.mhd_rhs_direct(u, b)
            assert (du1 - du2).coefficient_scale() < 1e-12
            assert (db1 - db2).coefficient_scale() < 1e-12
            # the semidirect assembly agrees as well
            du3, db3 = rhs_semidirect(self.backend, u, b)
            assert (du1 - du3).coefficient_scale() < 1e-12
            assert (db1 - db3).coefficient_scale() < 1e-12

    def test_induction_uses_geometric_bracket(self):
        rng = rng_for_seed(19)
        u = random_divfree_field(rng, band=1)
        b = random_divfree_field(rng, band=1)
        _, db = torus.mhd_rhs_direct(u, b)
        assert (db + jacobi_lie_bracket(u, b)).coefficient_scale() < 1e-15

    def test_h_defining_relation_band1(self):
        modes = divergence_free_modes(1)
        for x in modes[:6]:
            for y1 in modes[:6]:
                for y2 in modes[:6]:
                    lhs = field_inner(self.backend.b(x, y1), y2)
                    rhs = field_inner(self.backend.h_map(y1, y2), x)
                    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs)) + 1e-10


class TestPlaneFormulas:
    def test_mixed_plane_matches_expansion(self):
        mhd = torus.mhd_backend()
        rng = rng_for_seed(20)
        for _ in range(25):
            x = random_divfree_field(rng, band=1, scale=0.7)
            y = random_divfree_field(rng, band=1, scale=0.7)
            direct = mhd_mixed_plane(x, y)
            expanded = curvature_numerator_semidirect(
                mhd, Pair(x, TrigVectorField.zero()), Pair(TrigVectorField.zero(), y)
            ).numerator
            assert relerr(direct, expanded) < 1e-10

    def test_mixed_plane_zero_field(self):
        assert mhd_mixed_plane(TrigVectorField.zero(), SHEAR) == 0.0

    def test_pure_magnetic_matches_expansion(self):
        mhd = torus.mhd_backend()
        rng = rng_for_seed(21)
        for _ in range(25):
            y1 = random_divfree_field(rng, band=1, scale=0.7)
            y2 = random_divfree_field(rng, band=1, scale=0.7)
            direct = mhd_pure_magnetic_plane(y1, y2)
            expanded = curvature_numerator_semidirect(
                mhd, Pair(TrigVectorField.zero(), y1), Pair(TrigVectorField.zero(), y2)
            ).numerator
            assert relerr(direct, expanded) < 1e-10

    def test_pure_magnetic_equal_legs_cancel(self):
        rng = rng_for_seed(22)
        y = random_divfree_field(rng, band=2)
        assert abs(mhd_pure_magnetic_plane(y, y)) < 1e-12 * max(1.0, field_inner(y, y) ** 2)

    def test_pure_magnetic_shear_nonnegative(self):
        rng = rng_for_seed(23)
        for _ in range(10):
            y2 = random_divfree_field(rng, band=2)
            value = mhd_pure_magnetic_plane(SHEAR, y2)
            assert value >= -1e-12

    def test_pure_magnetic_zero_leg(self):
        assert mhd_pure_magnetic_plane(SHEAR, TrigVectorField.zero()) == 0.0

    def test_arnold_flat_matches_generic(self):
        vol = torus.volume_preserving_backend()
        rng = rng_for_seed(24)
        for _ in range(25):
            x = random_divfree_field(rng, band=1, scale=0.7)
            y = random_divfree_field(rng, band=1, scale=0.7)
            direct = arnold_flat_curvature(x, y)
            generic = curvature_numerator_generic(vol, x, y).numerator
            assert relerr(direct, generic) < 1e-10

    def test_arnold_flat_self_plane(self):
        rng = rng_for_seed(25)
        x = random_divfree_field(rng, band=2)
        assert abs(arnold_flat_curvature(x, x)) < 1e-12 * max(1.0, field_inner(x, x) ** 2)

    def test_commuting_shears_flat(self):
        # same-direction single modes commute and stay flat
        y = TrigVectorField(TrigFunction.mode(SIN, (0, 2)), TrigFunction.zero())
        assert abs(arnold_flat_curvature(SHEAR, y)) < 1e-14

    def test_rejects_compressible_inputs(self):
        bad = TrigVectorField(TrigFunction.mode(COS, (1, 0)), TrigFunction.zero())
        with pytest.raises(NotDivergenceFree):
            arnold_flat_curvature(bad, SHEAR)
        with pytest.raises(NotDivergenceFree):
            mhd_mixed_plane(bad, SHEAR)
        with pytest.raises(NotDivergenceFree):
            mhd_pure_magnetic_plane(bad, SHEAR)


class TestFlatness:
    def test_sections_containing_function_direction(self):
        ps = torus.passive_scalar_backend()
        planes = sample_planes(ps, seed=2026, count=20, family="contains-h", band=2)
        for plane in planes:
            br = curvature_numerator_semidirect(ps, plane.x, plane.y)
            assert abs(br.numerator) <= 1e-12

    def test_curvature_carried_by_velocity_part_only(self):
        ps = torus.passive_scalar_backend()
        vol = torus.volume_preserving_backend()
        rng = rng_for_seed(27)
        for _ in range(20):
            x1 = random_divfree_field(rng, band=1, scale=0.6)
            x2 = random_divfree_field(rng, band=1, scale=0.6)
            f1 = random_function(rng, band=1, scale=0.6)
            f2 = random_function(rng, band=1, scale=0.6)
            full = curvature_numerator_semidirect(ps, Pair(x1, f1), Pair(x2, f2)).numerator
            gonly = curvature_numerator_generic(vol, x1, x2).numerator
            assert relerr(full, gonly) < 1e-10


class TestEulerReduction:
    def test_transpose_term_is_pure_gradient(self):
        vol = torus.volume_preserving_backend()
        rng = rng_for_seed(28)
        for _ in range(10):
            u = random_divfree_field(rng, band=2, scale=0.5)
            rhs = geodesic_rhs(vol)(u)
            assert (rhs - torus.euler_rhs_direct(u)).coefficient_scale() < 1e-12


class TestTruncation:
    def test_truncate_function(self):
        f = TrigFunction({(1, 0, COS): 1.0, (3, 0, COS): 2.0})
        assert f.truncated(2).modes == {(1, 0, COS): 1.0}

    def test_truncate_pair_state(self):
        state = Pair(SHEAR, TrigFunction.mode(COS, (5, 5)))
        out = truncate_state(state, 2)
        assert out.y.modes == {}
        assert out.x.comp1.modes == SHEAR.comp1.modes

    def test_capped_rhs_stays_in_band(self):
        ps = torus.passive_scalar_backend()
        rng = rng_for_seed(29)
        state = Pair(random_divfree_field(rng, band=2), random_function(rng, band=2))
        rhs = torus.capped_rhs(geodesic_rhs(ps), 3)
        out = rhs(state)
        assert out.x.max_wavenumber() <= 3
        assert out.y.max_wavenumber() <= 3

    def test_operations_do_not_mutate_inputs(self):
        f = TrigFunction.mode(COS, (1, 0))
        before = dict(f.modes)
        multiply(f, f)
        f.partial(0)
        _ = f + f
        assert f.modes == before
