import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moyal_lab.operator_core import commutator
from moyal_lab.moyal_rep import HSSpace, ModelConfig, block_norm
from moyal_lab.oscillator_models import (
    MODELS,
    OscParams,
    alpha_beta,
    analytic_spectrum,
    critical_point,
    h1,
    h2,
    h3,
    h_commutative,
    lambdas,
    renormalize,
    renormalized_params,
    zeeman_decomposition,
)
from moyal_lab.schwinger_su2 import schwinger_noncommutative

positive = st.floats(min_value=0.1, max_value=10.0, allow_nan=False)


@pytest.fixture(scope="module")
def hs():
    return HSSpace(ModelConfig(theta=1.0, truncation=10))


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            OscParams(mu=0.0, omega=1.0)
        with pytest.raises(ValueError):
            OscParams(mu=1.0, omega=-1.0)

    def test_alpha_beta_frozen_values(self):
        # mu = omega = theta = 1: alpha = 5/4, beta = -3/4.
        a, b = alpha_beta(OscParams(1.0, 1.0), 1.0)
        assert a == pytest.approx(1.25, abs=1e-15)
        assert b == pytest.approx(-0.75, abs=1e-15)

    def test_critical_point(self):
        for theta in (0.25, 1.0, 4.0):
            p = critical_point(theta)
            assert p.mu == pytest.approx(1.0 / math.sqrt(theta))
            assert p.omega == pytest.approx(2.0 / math.sqrt(theta))
            # At the critical point the off-diagonal coefficient vanishes.
            _, b = alpha_beta(p, theta)
            assert abs(b) < 1e-15

    def test_renormalize_frozen_values(self):
        mu_p, om_p = renormalize(OscParams(1.0, 1.0), 1.0)
        assert mu_p == pytest.approx(0.8, abs=1e-15)
        assert om_p == pytest.approx(math.sqrt(1.25), abs=1e-15)

    def test_lambdas_frozen_values(self):
        lp, lm = lambdas(OscParams(1.0, 1.0), 1.0)
        assert lp == pytest.approx((math.sqrt(5) + 1) / 2, abs=1e-14)
        assert lm == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-14)

    def test_commutative_limit(self):
        p = OscParams(1.3, 0.7)
        mu_p, om_p = renormalize(p, 0.0)
        assert mu_p == pytest.approx(p.mu)
        assert om_p == pytest.approx(p.omega)
        lp, lm = lambdas(p, 0.0)
        assert lp == pytest.approx(p.mu * p.omega)
        assert lm == pytest.approx(p.mu * p.omega)


class TestParamIdentities:
    @settings(max_examples=60, deadline=None)
    @given(positive, positive, positive)
    def test_lambda_identities(self, mu, omega, theta):
        p = OscParams(mu, omega)
        lp, lm = lambdas(p, theta)
        # Conditioning: the product amplifies the rounding of theta*lm by
        # the factor (1 + theta*lp), so the bound scales with it.
        cond = 1.0 + theta * lp
        assert (1.0 + theta * lp) * (1.0 - theta * lm) == pytest.approx(
            1.0, abs=max(1e-14, 5e-16 * cond)
        )
        assert lp * lm == pytest.approx(mu**2 * omega**2, rel=1e-12)

    def test_lambda_identity_grid(self):
        # Moderate 5 x 5 x 3 grid: the identity holds to 1e-12 absolute.
        for mu in (0.5, 0.75, 1.0, 1.5, 2.0):
            for omega in (0.5, 0.75, 1.0, 1.5, 2.0):
                for theta in (0.25, 1.0, 4.0):
                    lp, lm = lambdas(OscParams(mu, omega), theta)
                    assert (1.0 + theta * lp) * (1.0 - theta * lm) == pytest.approx(
                        1.0, abs=1e-12
                    )

    @settings(max_examples=60, deadline=None)
    @given(positive, positive, positive)
    def test_invariant_combination(self, mu, omega, theta):
        p = OscParams(mu, omega)
        mu_p, om_p = renormalize(p, theta)
        assert mu_p * om_p**2 == pytest.approx(mu * omega**2, rel=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(positive, positive, positive)
    def test_lambda_sum_difference(self, mu, omega, theta):
        p = OscParams(mu, omega)
        lp, lm = lambdas(p, theta)
        mu_p, om_p = renormalize(p, theta)
        assert (lp + lm) / (2.0 * mu) == pytest.approx(om_p, rel=1e-12)
        assert (lp - lm) / mu == pytest.approx(mu * theta * omega**2, rel=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(positive, positive, positive)
    def test_tanh_phi_relations(self, mu, omega, theta):
        rp = renormalized_params(OscParams(mu, omega), theta)
        t = abs(math.tanh(rp.phi))
        assert t == pytest.approx(1.0 - theta * rp.lambda_minus, abs=1e-12)
        assert t == pytest.approx(rp.lambda_minus / rp.lambda_plus, abs=1e-12)
        assert t == pytest.approx(1.0 / (1.0 + theta * rp.lambda_plus), abs=1e-12)
        assert rp.phi < 0.0


class TestCommutativeModel:
    def test_spectrum_is_harmonic(self):
        h = h_commutative(8, OscParams(1.0, 1.5))
        evals = np.linalg.eigvalsh(h.mat)
        # Lowest levels 1.5 * (m + n + 1), degeneracy m + n + 1.
        expected = sorted(1.5 * (m + n + 1) for m in range(8) for n in range(8))
        assert np.allclose(np.sort(evals)[:10], expected[:10], atol=1e-12)

    def test_ground_is_vacuum(self):
        h = h_commutative(6, OscParams(1.0, 1.0))
        evals, evecs = np.linalg.eigh(h.mat)
        ground = np.abs(evecs[:, 0])
        assert ground[0] == pytest.approx(1.0)
        assert np.linalg.norm(ground[1:]) < 1e-12


class TestHamiltonians:
    def test_h1_ladder_diagonal(self, hs):
        h = h1(hs)
        # Diagonal entries m + n + 1 on the lattice.
        diag = np.real(np.diagonal(h.mat))
        for k in hs.safe_indices:
            m, n = hs.label(int(k))
            assert diag[k] == pytest.approx(m + n + 1, abs=1e-13)

    def test_h2_hermitian_and_psd(self, hs):
        h = h2(hs, OscParams(1.0, 1.0))
        assert np.allclose(h.mat, h.mat.conj().T, atol=1e-13)
        evals = np.linalg.eigvalsh(h.mat)
        assert evals[0] > 0.0

    def test_h2_at_critical_point_is_scaled_h1(self, hs):
        # At (mu0, omega0) the off-diagonal term vanishes and h2 = omega0 h1.
        p = critical_point(hs.theta)
        diff = h2(hs, p) - p.omega * h1(hs)
        assert block_norm(diff, hs.safe_indices) < 1e-12

    def test_h3_equals_decomposition(self, hs):
        p = OscParams(1.0, 1.0)
        decomp = zeeman_decomposition(hs, p)
        recomposed = decomp.h2_part + decomp.zeeman_coeff * decomp.J3
        assert block_norm(h3(hs, p) - recomposed, hs.safe_indices) < 1e-12

    def test_zeeman_coefficient_value(self, hs):
        decomp = zeeman_decomposition(hs, OscParams(1.0, 1.0))
        assert decomp.zeeman_coeff == pytest.approx(1.0, abs=1e-15)

    def test_zeeman_j3_matches_generators(self, hs):
        decomp = zeeman_decomposition(hs, OscParams(1.0, 1.0))
        j3 = schwinger_noncommutative(hs).J3
        assert np.allclose(decomp.J3.mat, j3.mat)

    def test_h1_commutes_with_su2(self, hs):
        # Quadratic-times-quadratic products are exact on the depth-2 block.
        gens = schwinger_noncommutative(hs)
        ix = hs.safe_block(depth=2)
        h = h1(hs)
        for j in gens.as_tuple():
            assert block_norm(commutator(h, j), ix) <= 1e-10 * h.norm()

    def test_h2_commutes_with_primed_su2(self, hs):
        """Generic h2 is SU(2) symmetric in its own Bogoliubov frame.

        The bare generators satisfy [h2, J1] = (beta/2)(B_L^2 - B_R^2 - h.c.),
        so only the frame-changed (primed-ladder) generators commute.
        """
        from moyal_lab.bogoliubov_flow import bogoliubov_pair, phi_for
        from moyal_lab.schwinger_su2 import schwinger_from_ladders

        p = OscParams(2.0, 0.5)
        h = h2(hs, p)
        ix = hs.safe_block(depth=2)
        bare = schwinger_noncommutative(hs)
        primed = schwinger_from_ladders(
            *bogoliubov_pair(hs, phi_for(p, hs.theta, "h2")), context="primed"
        )
        for j in primed.as_tuple():
            assert block_norm(commutator(h, j), ix) <= 1e-10 * h.norm()
        # J3 is frame-invariant, the transverse bare generators are broken.
        assert block_norm(commutator(h, bare.J3), ix) <= 1e-10 * h.norm()
        assert block_norm(commutator(h, bare.J1), ix) > 1e-3 * h.norm()

    def test_h2_critical_commutes_with_bare_su2(self, hs):
        gens = schwinger_noncommutative(hs)
        ix = hs.safe_block(depth=2)
        h = h2(hs, critical_point(hs.theta))
        for j in gens.as_tuple():
            assert block_norm(commutator(h, j), ix) <= 1e-10 * h.norm()

    def test_h3_commutes_only_with_j3(self, hs):
        gens = schwinger_noncommutative(hs)
        h = h3(hs, OscParams(1.0, 1.0))
        ix = hs.safe_block(depth=2)
        assert block_norm(commutator(h, gens.J3), ix) <= 1e-10 * h.norm()
        assert block_norm(commutator(h, gens.J1), ix) > 1e-3 * h.norm()
        assert block_norm(commutator(h, gens.J2), ix) > 1e-3 * h.norm()


class TestAnalyticSpectrum:
    def test_model_list(self):
        assert MODELS == ("commutative", "h1", "h2", "h3")

    def test_h1_energy(self):
        f = analytic_spectrum("h1")
        assert f.energy(2, 3) == 6.0
        assert f.energy_jj3(2.5, 0.5) == 6.0

    def test_h2_energy(self):
        f = analytic_spectrum("h2", OscParams(1.0, 2.0))
        assert f.energy(1, 1) == pytest.approx(6.0)

    def test_h3_energy_frozen_values(self):
        f = analytic_spectrum("h3", OscParams(1.0, 1.0), 1.0)
        assert f.energy(0, 0) == pytest.approx(math.sqrt(5) / 2.0, abs=1e-14)
        lp, lm = lambdas(OscParams(1.0, 1.0), 1.0)
        assert f.energy(1, 0) == pytest.approx((3 * lp + lm) / 2.0, abs=1e-14)

    def test_h3_two_forms_agree(self):
        """lambda form over (m, n) equals the (j, j3) form to 1e-12."""
        f = analytic_spectrum("h3", OscParams(1.3, 0.8), 0.6)
        for m in range(6):
            for n in range(6):
                j = (m + n) / 2.0
                j3 = (m - n) / 2.0
                assert f.energy(m, n) == pytest.approx(f.energy_jj3(j, j3), abs=1e-12)

    def test_unknown_model_rejected(self):
        with pytest.raises(ValueError):
            analytic_spectrum("h4")

    def test_missing_params_rejected(self):
        with pytest.raises(ValueError):
            analytic_spectrum("h3", OscParams(1.0, 1.0), None)
