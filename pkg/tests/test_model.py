import math

import numpy as np
import pytest

from pairpulse import model
from pairpulse.model import (
    GridSpec,
    ModelParams,
    derive_modes,
    density,
    entropies,
    gamma1_static,
    hermite_function,
    mehler_coefficients,
    model_wavefunction,
    natural_orbital,
    occupation_spectrum,
)


def quad_2d(f, half, n=501):
    """Trapezoid quadrature of f(x1, x2) on [-half, half]^2."""
    x = np.linspace(-half, half, n)
    vals = f(x[:, None], x[None, :])
    return np.trapezoid(np.trapezoid(vals, x, axis=1), x)


class TestDeriveModes:
    def test_reference_frequency_table(self):
        m = derive_modes(ModelParams(3.0, 0.375))
        assert m.omega2 == 1.5
        assert m.omega_e == pytest.approx(2.372, abs=1e-3)
        assert m.omega_w == pytest.approx(2.121, abs=1e-3)
        assert m.omega_d == pytest.approx(2.0, abs=1e-12)
        assert m.E0 == pytest.approx(2.25)

    def test_noninteracting_limit_degenerate(self):
        m = derive_modes(ModelParams(3.0, 0.0))
        assert m.omega2 == m.omega_e == m.omega_w == m.omega_d == 3.0
        assert m.D == 0.0 and m.Z == 0.0 and m.C1 == 0.0

    def test_kernel_constants(self):
        m = derive_modes(ModelParams(3.0, 0.375))
        assert m.D == pytest.approx(0.125, abs=1e-15)
        assert m.Z == pytest.approx(0.029437251522859424, abs=1e-12)
        assert m.C1 == pytest.approx(0.125, abs=1e-15)

    def test_ratio_matches_grid_eigendecomposition(self):
        # independent spectral oracle for Z: the two largest eigenvalues of
        # the discretized kernel are (1-Z) and (1-Z)Z
        m = derive_modes(ModelParams(3.0, 0.375))
        grid = GridSpec.for_modes(m, n_points=400)
        x = grid.points()
        eigs = np.linalg.eigvalsh(gamma1_static(m, x[:, None], x[None, :]) * grid.spacing)
        eigs = eigs[::-1]
        assert eigs[1] / eigs[0] == pytest.approx(m.Z, abs=1e-9)

    @pytest.mark.parametrize("lam", [-0.01, 0.5, 0.7, float("nan")])
    def test_rejects_unbound_coupling(self, lam):
        with pytest.raises(ValueError):
            ModelParams(3.0, lam)

    @pytest.mark.parametrize("omega0", [0.0, -1.0, float("inf")])
    def test_rejects_bad_frequency(self, omega0):
        with pytest.raises(ValueError):
            ModelParams(omega0, 0.2)

    def test_strict_frequency_ordering_randomized(self):
        rng = np.random.default_rng(1902)
        for _ in range(1000):
            w0 = float(rng.uniform(0.05, 20.0))
            lam = float(rng.uniform(1e-9, 0.5 - 1e-12))
            m = derive_modes(ModelParams(w0, lam))
            assert m.omega2 < m.omega_d < m.omega_w < m.omega_e < m.omega1

    def test_mehler_closure(self):
        for lam in (0.1, 0.375, 0.45):
            m = derive_modes(ModelParams(3.0, lam))
            same, cross = mehler_coefficients(m.Z, m.omega_w)
            assert same == pytest.approx(m.omega_d + m.D, abs=1e-12)
            assert cross == pytest.approx(m.D, abs=1e-12)


class TestGamma1Static:
    def test_unit_trace(self, modes_ref):
        val = np.trapezoid(
            gamma1_static(modes_ref, x := np.linspace(-8, 8, 2001), x), x
        )
        assert val == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_and_positive(self, modes_ref):
        rng = np.random.default_rng(7)
        a = rng.normal(size=40)
        b = rng.normal(size=40)
        ga = gamma1_static(modes_ref, a, b)
        gb = gamma1_static(modes_ref, b, a)
        np.testing.assert_allclose(ga, gb, rtol=0, atol=0)
        assert np.all(ga > 0)

    def test_purity_against_quadrature(self, modes_ref):
        # operator-trace identity: Tr Gamma^2 = (1 + 2 D / omega_d)^(-1/2)
        closed = (1.0 + 2.0 * modes_ref.D / modes_ref.omega_d) ** -0.5
        assert closed == pytest.approx(0.9428090415820634, abs=1e-12)
        quad = quad_2d(
            lambda x1, x2: gamma1_static(modes_ref, x1, x2) ** 2,
            8.0 / math.sqrt(modes_ref.omega_d),
            n=801,
        )
        assert quad == pytest.approx(closed, abs=1e-9)
        assert closed == pytest.approx(modes_ref.omega_d / modes_ref.omega_w, abs=1e-12)

    def test_density_is_diagonal(self, modes_ref):
        x = np.linspace(-3, 3, 17)
        np.testing.assert_allclose(density(modes_ref, x), gamma1_static(modes_ref, x, x), rtol=1e-14)


class TestOccupationSpectrum:
    def test_noninteracting_is_pure(self):
        m = derive_modes(ModelParams(3.0, 0.0))
        spec = occupation_spectrum(m, 10)
        assert spec.weights[0] == 1.0
        assert np.all(spec.weights[1:] == 0.0)
        assert spec.tail_mass == 0.0

    def test_leading_occupation_against_eigen_oracle(self, modes_ref):
        spec = occupation_spectrum(modes_ref, 5)
        assert spec.weights[0] == pytest.approx(0.9705627484771405, abs=1e-12)
        grid = GridSpec.for_modes(modes_ref, n_points=400)
        x = grid.points()
        eigs = np.linalg.eigvalsh(
            gamma1_static(modes_ref, x[:, None], x[None, :]) * grid.spacing
        )
        assert eigs[-1] == pytest.approx(spec.weights[0], abs=1e-9)

    @pytest.mark.parametrize("lam,k_max", [(0.0, 5), (0.1, 3), (0.375, 60), (0.49, 200)])
    def test_normalization_with_tail(self, lam, k_max):
        spec = occupation_spectrum(derive_modes(ModelParams(2.0, lam)), k_max)
        assert spec.total() == pytest.approx(1.0, abs=1e-12)

    def test_strictly_decreasing(self, modes_ref):
        spec = occupation_spectrum(modes_ref, 30)
        assert np.all(np.diff(spec.weights) < 0)

    def test_spectral_oracle_three_couplings(self):
        for lam in (0.1, 0.375, 0.45):
            m = derive_modes(ModelParams(3.0, lam))
            grid = GridSpec.for_modes(m, n_points=400)
            x = grid.points()
            eigs = np.linalg.eigvalsh(
                gamma1_static(m, x[:, None], x[None, :]) * grid.spacing
            )[::-1]
            spec = occupation_spectrum(m, 10)
            np.testing.assert_allclose(eigs[:11], spec.weights, rtol=0, atol=1e-6)

    def test_purity_trace_identity(self, modes_ref):
        spec = occupation_spectrum(modes_ref, 200)
        assert float(np.sum(spec.weights**2)) == pytest.approx(
            modes_ref.omega_d / modes_ref.omega_w, abs=1e-10
        )

    def test_escort_transform(self, modes_ref):
        spec = occupation_spectrum(modes_ref, 50)
        esc = spec.escort(2.5)
        assert esc.Z == pytest.approx(modes_ref.Z**2.5, rel=1e-14)
        assert esc.total() == pytest.approx(1.0, abs=1e-12)

    def test_rejects_negative_k_max(self, modes_ref):
        with pytest.raises(ValueError):
            occupation_spectrum(modes_ref, -1)


class TestNaturalOrbital:
    def test_ground_orbital_at_origin(self, modes_ref):
        expect = (modes_ref.omega_w / math.pi) ** 0.25
        assert float(natural_orbital(modes_ref, 0, 0.0)) == pytest.approx(expect, rel=1e-14)

    def test_orthonormality(self, modes_ref):
        x = np.linspace(-12, 12, 4001)
        orbs = np.array([natural_orbital(modes_ref, k, x) for k in range(11)])
        gram = orbs @ orbs.T * (x[1] - x[0])
        np.testing.assert_allclose(gram, np.eye(11), atol=1e-10)

    def test_mehler_reconstruction_matches_kernel(self, modes_ref):
        # bilinear sum over 40 natural orbitals reproduces the closed kernel
        spec = occupation_spectrum(modes_ref, 40)
        rng = np.random.default_rng(11)
        x1 = rng.uniform(-2.5, 2.5, size=25)
        x2 = rng.uniform(-2.5, 2.5, size=25)
        recon = sum(
            spec.weights[k] * natural_orbital(modes_ref, k, x1) * natural_orbital(modes_ref, k, x2)
            for k in range(41)
        )
        np.testing.assert_allclose(recon, gamma1_static(modes_ref, x1, x2), atol=1e-8)

    def test_high_index_stays_bounded(self, modes_ref):
        vals = natural_orbital(modes_ref, 60, np.linspace(-10, 10, 101))
        assert np.all(np.isfinite(vals))
        assert np.max(np.abs(vals)) < 1.5

    def test_rejects_out_of_range_index(self, modes_ref):
        with pytest.raises(ValueError):
            natural_orbital(modes_ref, -1, 0.0)
        with pytest.raises(ValueError):
            natural_orbital(modes_ref, model.MAX_ORBITAL_INDEX + 1, 0.0)

    def test_hermite_recurrence_against_explicit_low_orders(self):
        xi = np.linspace(-3, 3, 7)
        h0 = math.pi**-0.25 * np.exp(-xi * xi / 2)
        np.testing.assert_allclose(hermite_function(0, xi), h0, rtol=1e-14)
        np.testing.assert_allclose(hermite_function(1, xi), math.sqrt(2) * xi * h0, rtol=1e-14)
        h2 = (2 * xi * xi - 1) / math.sqrt(2) * h0
        np.testing.assert_allclose(hermite_function(2, xi), h2, rtol=1e-13, atol=1e-15)


class TestEntropies:
    def test_pure_state_zero(self):
        m = derive_modes(ModelParams(3.0, 0.0))
        ent = entropies(occupation_spectrum(m, 20), renyi_orders=(0.5, 2.0))
        assert ent.von_neumann == 0.0
        assert ent.renyi == (0.0, 0.0)

    def test_closed_form_against_truncated_sum(self, modes_ref):
        spec = occupation_spectrum(modes_ref, 200)
        ent = entropies(spec, renyi_orders=(0.5, 2.0, 3.0))
        w = spec.weights
        svn_sum = -float(np.sum(w * np.log(w)))
        assert ent.von_neumann == pytest.approx(svn_sum, abs=1e-12)
        for q, s_q in zip((0.5, 2.0, 3.0), ent.renyi):
            direct = math.log(float(np.sum(w**q))) / (1.0 - q)
            assert s_q == pytest.approx(direct, abs=1e-10)

    def test_renyi_bracket_converges_to_von_neumann(self, modes_ref):
        spec = occupation_spectrum(modes_ref, 100)
        ent = entropies(spec, renyi_orders=(1.0 - 1e-4, 1.0 + 1e-4))
        mid = 0.5 * (ent.renyi[0] + ent.renyi[1])
        assert mid == pytest.approx(ent.von_neumann, abs=1e-6)

    def test_rejects_bad_orders(self, modes_ref):
        spec = occupation_spectrum(modes_ref, 20)
        with pytest.raises(ValueError):
            entropies(spec, renyi_orders=(-1.0,))
        with pytest.raises(ValueError):
            entropies(spec, renyi_orders=(0.0,))
        with pytest.raises(ValueError):
            entropies(spec, renyi_orders=(1.0,))


class TestModelWavefunction:
    def test_noninteracting_all_kinds_coincide(self):
        m = derive_modes(ModelParams(3.0, 0.0))
        rng = np.random.default_rng(3)
        x1 = rng.normal(size=30)
        x2 = rng.normal(size=30)
        ref = model_wavefunction("exact", m, x1, x2)
        for kind in ("hf", "ks", "natural"):
            np.testing.assert_allclose(model_wavefunction(kind, m, x1, x2), ref, rtol=1e-12)

    @pytest.mark.parametrize("kind", ["exact", "hf", "ks", "natural"])
    def test_unit_normalization(self, modes_ref, kind):
        half = 7.0 / math.sqrt(modes_ref.omega2)
        norm = quad_2d(
            lambda x1, x2: model_wavefunction(kind, modes_ref, x1, x2) ** 2, half, n=601
        )
        assert norm == pytest.approx(1.0, abs=1e-9)

    def test_natural_product_has_maximal_overlap(self, modes_ref):
        half = 7.0 / math.sqrt(modes_ref.omega2)
        overlaps = {}
        for kind in ("hf", "ks", "natural"):
            val = quad_2d(
                lambda x1, x2: model_wavefunction(kind, modes_ref, x1, x2)
                * model_wavefunction("exact", modes_ref, x1, x2),
                half,
                n=601,
            )
            overlaps[kind] = val**2
        assert overlaps["natural"] > overlaps["hf"]
        assert overlaps["natural"] > overlaps["ks"]

    def test_virial_split(self, modes_ref):
        # kinetic and full potential (confinement + coupling) each carry E0/2
        half = 7.0 / math.sqrt(modes_ref.omega2)
        n = 701
        x = np.linspace(-half, half, n)
        psi = model_wavefunction("exact", modes_ref, x[:, None], x[None, :])
        d1, d2 = np.gradient(psi, x, x)
        kinetic = 0.5 * np.trapezoid(np.trapezoid(d1**2 + d2**2, x, axis=1), x)
        w0, lam = modes_ref.params.omega0, modes_ref.params.lam
        x1, x2 = x[:, None], x[None, :]
        vmat = 0.5 * w0**2 * (x1**2 + x2**2) - 0.5 * lam * w0**2 * (x1 - x2) ** 2
        potential = np.trapezoid(np.trapezoid(vmat * psi**2, x, axis=1), x)
        assert kinetic == pytest.approx(modes_ref.E0 / 2, rel=2e-3)
        assert potential == pytest.approx(modes_ref.E0 / 2, rel=1e-6)

    def test_rejects_unknown_kind(self, modes_ref):
        with pytest.raises(ValueError):
            model_wavefunction("mp2", modes_ref, 0.0, 0.0)


class TestGridSpec:
    def test_spacing_and_points(self):
        g = GridSpec(-1.0, 1.0, 5)
        assert g.spacing == pytest.approx(0.5)
        np.testing.assert_allclose(g.points(), [-1, -0.5, 0, 0.5, 1])

    def test_rejects_degenerate(self):
        with pytest.raises(ValueError):
            GridSpec(1.0, -1.0, 10)
        with pytest.raises(ValueError):
            GridSpec(0.0, 1.0, 2)

    def test_default_grid_tail_below_threshold(self, modes_ref):
        g = GridSpec.for_modes(modes_ref)
        assert g.n_points == 512
        assert float(density(modes_ref, g.x_max)) < 1e-13
