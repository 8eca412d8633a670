"""
Tests for the energy harvester and the TS/PS rate-energy regions
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from core.hpa.memory_polynomial import MemoryPolynomial, eval_mpm, limit_drive
from core.mimo.beamforming import DRIVE_REFERENCE_W, LinkNoise, hpa_aware_weights, simulate_antenna_chain
from core.mimo.channel import gen_channel, gen_channels, principal_eig
from core.signals.waveforms import ComplexSignal, gen_ofdm_like, scale_to_power
from core.swipt.harvester import EhModel, dbm_to_w, harvest, w_to_dbm
from core.swipt.re_region import (
	LinkBudget,
	ReRegion,
	RePoint,
	eh_input_power,
	endpoint_gains,
	link_budget,
	re_region,
	region_from_budgets,
	region_gain,
	split_energy,
	split_rate,
)
from core.utils.errors import ConfigurationError, UndefinedStatisticError

NOISE = LinkNoise.from_dbm(-70.0, -50.0)
EH = EhModel.from_dbm(-10.0, 2.0, 0.24)


def _budget(zeta=1, distortion=1e-9, xi=1e-3):
	return LinkBudget(zeta, 0.025, 2e-2, 1.0, distortion, xi)


budgets_strategy = st.builds(
	_budget,
	zeta=st.sampled_from([0, 1]),
	distortion=st.floats(min_value=0.0, max_value=1e-6),
	xi=st.floats(min_value=0.0, max_value=1e-1),
)


def test_unit_conversions():
	assert dbm_to_w(0.0) == pytest.approx(1e-3)
	assert dbm_to_w(30.0) == pytest.approx(1.0)
	assert w_to_dbm(1e-3) == pytest.approx(0.0)
	np.testing.assert_allclose(dbm_to_w([0.0, 10.0]), [1e-3, 1e-2])


def test_harvester_branches():
	assert harvest(EH, dbm_to_w(-20.0)) == 0.0
	assert harvest(EH, dbm_to_w(0.0)) == pytest.approx(2.4e-4)
	assert harvest(EH, dbm_to_w(10.0)) == pytest.approx(3.803e-4, rel=1e-3)
	assert harvest(EH, dbm_to_w(10.0)) == pytest.approx(EH.max_output_w)


def test_harvester_knee_belongs_to_harvesting_branch():
	assert harvest(EH, EH.p_h_l_w) == pytest.approx(0.24 * EH.p_h_l_w)
	assert harvest(EH, np.nextafter(EH.p_h_l_w, 0.0)) == 0.0


def test_harvester_rejects_negative_input():
	with pytest.raises(ConfigurationError):
		harvest(EH, -1e-6)


def test_harvester_validation():
	with pytest.raises(ConfigurationError):
		EhModel(1e-3, 1e-4, 0.2)
	with pytest.raises(ConfigurationError):
		EhModel(1e-4, 1e-3, 1.5)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
def test_harvester_is_monotone_and_bounded(a, b):
	low, high = sorted((a, b))
	assert harvest(EH, low) <= harvest(EH, high)
	assert harvest(EH, high) <= EH.max_output_w


def test_gamma_of_budget():
	budget = _budget(zeta=1, distortion=1e-9)
	expected = 0.025 * 2e-2 / (1e-9 + NOISE.sigma_v_sq)
	assert budget.gamma(NOISE) == pytest.approx(expected)
	assert _budget(zeta=0, distortion=1e-9).gamma(NOISE) == pytest.approx(0.025 * 2e-2 / NOISE.sigma_v_sq)


@settings(max_examples=100, deadline=None)
@given(budgets_strategy, st.floats(min_value=0.0, max_value=1.0))
def test_time_switching_rate_is_affine_in_split(budget, tau):
	full = split_rate("TS", 0.0, budget, NOISE)
	assert split_rate("TS", tau, budget, NOISE) == pytest.approx((1.0 - tau) * full, rel=1e-12, abs=1e-15)
	assert split_rate("TS", 1.0, budget, NOISE) == 0.0


@settings(max_examples=100, deadline=None)
@given(budgets_strategy, st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
def test_power_splitting_trades_rate_for_energy(budget, a, b):
	low, high = sorted((a, b))
	assert split_rate("PS", high, budget, NOISE) <= split_rate("PS", low, budget, NOISE) + 1e-12
	assert split_energy(high, budget, EH) >= split_energy(low, budget, EH)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=1e-6), st.floats(min_value=0.0, max_value=1.0))
def test_removing_distortion_never_lowers_rate(distortion, split):
	with_dpd = _budget(zeta=0, distortion=distortion)
	without_dpd = _budget(zeta=1, distortion=distortion)
	for architecture in ("TS", "PS"):
		assert split_rate(architecture, split, with_dpd, NOISE) >= split_rate(architecture, split, without_dpd, NOISE)


def test_unknown_architecture():
	with pytest.raises(ConfigurationError):
		split_rate("XX", 0.5, _budget(), NOISE)
	with pytest.raises(ConfigurationError):
		ReRegion("XX", 0, ())


def test_re_point_validation():
	with pytest.raises(ConfigurationError):
		RePoint(-1.0, 0.0, 0.5)
	with pytest.raises(ConfigurationError):
		RePoint(1.0, 0.0, 1.5)


def test_region_endpoints_and_grid():
	budgets = [_budget(zeta=1, xi=1e-3), _budget(zeta=1, xi=5e-3)]
	region = region_from_budgets("PS", 11, budgets, NOISE, EH)
	np.testing.assert_allclose(region.splits, np.linspace(0.0, 1.0, 11))
	assert region.energies[0] == 0.0
	assert region.rates[-1] == 0.0
	assert region.energies[-1] == pytest.approx(np.mean([harvest(EH, 1e-3), harvest(EH, 5e-3)]))
	assert list(region.to_frame().columns) == ["split", "rate_bps_hz", "energy_w"]


def test_region_rejects_mixed_zeta_and_bad_grid():
	with pytest.raises(ConfigurationError):
		region_from_budgets("TS", 11, [_budget(zeta=0), _budget(zeta=1)], NOISE, EH)
	with pytest.raises(ConfigurationError):
		region_from_budgets("TS", 1, [_budget()], NOISE, EH)
	with pytest.raises(ConfigurationError):
		region_from_budgets("TS", 11, [], NOISE, EH)


def test_time_switching_region_area_is_a_triangle():
	budget = _budget(zeta=1)
	region = region_from_budgets("TS", 101, [budget], NOISE, EH)
	rate = split_rate("TS", 0.0, budget, NOISE)
	energy = split_energy(1.0, budget, EH)
	assert region.area == pytest.approx(0.5 * rate * energy, rel=1e-9)


def test_region_gain_and_endpoints():
	with_dpd = region_from_budgets("PS", 21, [_budget(zeta=0, distortion=1e-8)], NOISE, EH)
	without_dpd = region_from_budgets("PS", 21, [_budget(zeta=1, distortion=1e-8)], NOISE, EH)
	gain = region_gain(with_dpd, without_dpd)
	assert gain > 0
	gains = endpoint_gains(with_dpd, without_dpd)
	assert gains["pure_eh_gain"] == pytest.approx(0.0)
	assert gains["pure_id_gain"] > 0


def test_region_gain_needs_comparable_regions():
	ts = region_from_budgets("TS", 11, [_budget()], NOISE, EH)
	ps = region_from_budgets("PS", 11, [_budget()], NOISE, EH)
	coarse = region_from_budgets("TS", 5, [_budget()], NOISE, EH)
	with pytest.raises(ConfigurationError):
		region_gain(ts, ps)
	with pytest.raises(ConfigurationError):
		region_gain(ts, coarse)


def test_region_gain_with_zero_baseline():
	dark = region_from_budgets("TS", 11, [_budget(xi=0.0)], NOISE, EH)
	with pytest.raises(UndefinedStatisticError):
		region_gain(dark, dark)
	assert endpoint_gains(dark, dark)["pure_eh_gain"] is None


def test_memory_distortion_equals_tap_power_on_white_input():
	# linear amplifier with memory on white input: D equals the memory tap power through the link
	rng = np.random.default_rng(3)
	x = scale_to_power(ComplexSignal(rng.standard_normal(20000) + 1j * rng.standard_normal(20000), 1.0))
	model = MemoryPolynomial(1, 1, [[1.0, 0.3]])
	channel = gen_channel(3, 2, 12.0, 2.6, seed=2)
	p_t = DRIVE_REFERENCE_W
	budget = link_budget(channel, model, x, p_t, NOISE, zeta=1)
	expected_distortion = 0.09 * p_t * budget.lambda_max * budget.w_r_norm_sq
	assert budget.distortion_power_w == pytest.approx(expected_distortion, rel=2e-2)
	expected_xi = budget.signal_power_w + budget.distortion_power_w + NOISE.sigma_v_sq * budget.w_r_norm_sq
	assert budget.xi_w == pytest.approx(expected_xi, rel=2e-2)


def test_energy_input_matches_independent_chain():
	x = gen_ofdm_like(16, 4, "QPSK", 4, seed=5)
	model = MemoryPolynomial(3, 2, [
		[1.0 + 0.05j, 0.12 - 0.03j, -0.04 + 0.01j],
		[0.0, 0.0, 0.0],
		[-0.06 + 0.02j, 0.01j, 0.005],
	])
	channel = gen_channel(3, 2, 12.0, 2.6, seed=21)
	p_t = dbm_to_w(14.0)
	budget = link_budget(channel, model, x, p_t, NOISE, zeta=1)

	_, w_r = principal_eig(channel)
	sol = hpa_aware_weights(channel, w_r, model, p_t, x)
	reference = np.sqrt(DRIVE_REFERENCE_W / 3.0)
	outputs = np.array([
		reference * eval_mpm(model, limit_drive(model, np.sqrt(p_t) * w * x.samples / reference))
		for w in sol.w_t
	])
	received = (w_r.conj() @ channel.gain_matrix) @ outputs
	expected = np.mean(np.abs(received) ** 2) + NOISE.sigma_v_sq * np.real(np.vdot(w_r, w_r))
	assert budget.xi_w == pytest.approx(expected, rel=1e-6)
	assert budget.xi_w > budget.signal_power_w


def test_energy_input_rejects_negative_noise():
	x = gen_ofdm_like(16, 4, "QPSK", 4, seed=5)
	channel = gen_channel(3, 2, 12.0, 2.6, seed=21)
	model = MemoryPolynomial(1, 0, [[1.0]])
	_, w_r = principal_eig(channel)
	sol = hpa_aware_weights(channel, w_r, model, DRIVE_REFERENCE_W, x)
	chain = simulate_antenna_chain(model, np.sqrt(DRIVE_REFERENCE_W) * np.outer(sol.w_t, x.samples))
	with pytest.raises(ConfigurationError):
		eh_input_power(channel, sol, chain, -1e-9)


def test_clipping_residual_lowers_gamma():
	budget = LinkBudget(0, 0.025, 2e-2, 1.0, 1e-9, 1e-3, clipping_power_w=1e-8)
	assert budget.impairment_w == 1e-8
	assert budget.gamma(NOISE) == pytest.approx(0.025 * 2e-2 / (1e-8 + NOISE.sigma_v_sq))


def test_ergodic_region_over_channel_draws():
	x = gen_ofdm_like(16, 4, "QPSK", 4, seed=1)
	model = MemoryPolynomial(3, 1, [[1.0, 0.1], [0.0, 0.0], [-0.02, 0.0]])
	channels = gen_channels(3, 3, 2, 2.0, 2.6, base_seed=4)
	regions = {zeta: re_region("PS", zeta, 11, channels, model, x, DRIVE_REFERENCE_W, NOISE, EH)
			   for zeta in (0, 1)}
	assert regions[0].zeta == 0 and regions[1].zeta == 1
	assert np.all(regions[0].rates >= regions[1].rates)
	assert np.all(np.diff(regions[0].energies) >= 0)
	assert regions[0].area > 0
