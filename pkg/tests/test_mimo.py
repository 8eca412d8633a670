"""
Tests for the MIMO channel, eigen-beamforming and per-antenna amplifier chains
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from core.dpd.predistorter import DpdConfig
from core.hpa.memory_polynomial import MemoryPolynomial
from core.mimo.beamforming import (
	DRIVE_REFERENCE_W,
	LinkNoise,
	antenna_signals,
	combine,
	hpa_aware_weights,
	link_snr,
	mrt_direction,
	simulate_antenna_chain,
)
from core.mimo.channel import (
	ChannelMatrix,
	gen_channel,
	gen_channels,
	load_channels,
	principal_eig,
	save_channels,
)
from core.signals.waveforms import gen_ofdm_like
from core.utils.errors import (
	ConfigurationError,
	DegenerateChannelWarning,
	NonInvertibleOperatingPointError,
	UndefinedStatisticError,
)

NOISE = LinkNoise.from_dbm(-70.0, -50.0)


@pytest.fixture
def link_signal():
	return gen_ofdm_like(16, 4, "QPSK", 4, seed=8)


def _closed_form_lambda(gram):
	a, d = gram[0, 0].real, gram[1, 1].real
	b = gram[0, 1]
	return (a + d) / 2.0 + np.sqrt(((a - d) / 2.0) ** 2 + abs(b) ** 2)


def test_channel_generation_is_seeded():
	a = gen_channel(3, 2, 12.0, 2.6, seed=1)
	b = gen_channel(3, 2, 12.0, 2.6, seed=1)
	assert (a.n_r, a.n_t) == (2, 3)
	np.testing.assert_array_equal(a.h, b.h)
	assert a.pathloss_linear == pytest.approx(12.0 ** -2.6)
	np.testing.assert_allclose(a.gain_matrix, np.sqrt(12.0 ** -2.6) * a.h)


def test_channel_draws_are_independent():
	draws = gen_channels(3, 3, 2, 12.0, 2.6, base_seed=5)
	assert not np.array_equal(draws[0].h, draws[1].h)
	again = gen_channels(3, 3, 2, 12.0, 2.6, base_seed=5)
	np.testing.assert_array_equal(draws[2].h, again[2].h)


def test_channel_validation():
	with pytest.raises(ConfigurationError):
		gen_channel(0, 2, 12.0, 2.6, seed=0)
	with pytest.raises(ConfigurationError):
		gen_channel(3, 2, -1.0, 2.6, seed=0)
	with pytest.raises(ConfigurationError):
		ChannelMatrix(np.ones(3))
	with pytest.raises(ConfigurationError):
		ChannelMatrix(np.ones((2, 2)), pathloss_linear=0.0)


def test_principal_eig_matches_closed_form_on_two_receivers():
	for channel in gen_channels(1000, 3, 2, 1.0, 2.0, base_seed=99, stream="oracle"):
		lam, w_r = principal_eig(channel)
		expected = _closed_form_lambda(channel.gram)
		assert lam == pytest.approx(expected, rel=1e-10)
		assert np.linalg.norm(w_r) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(
	st.integers(min_value=0, max_value=2 ** 32 - 1),
	st.integers(min_value=1, max_value=4),
	st.integers(min_value=1, max_value=4),
)
def test_principal_eig_is_an_eigenpair(seed, n_t, n_r):
	channel = gen_channel(n_t, n_r, 1.0, 2.0, seed)
	lam, w_r = principal_eig(channel)
	gram = channel.gram
	assert lam == pytest.approx(np.linalg.eigvalsh(gram)[-1], rel=1e-8)
	np.testing.assert_allclose(gram @ w_r, lam * w_r, atol=1e-6 * lam)
	first = w_r[np.argmax(np.abs(w_r) > 1e-12)]
	assert first.imag == pytest.approx(0.0, abs=1e-12)
	assert first.real > 0


def test_zero_channel_has_no_eigenvector():
	with pytest.raises(UndefinedStatisticError):
		principal_eig(ChannelMatrix(np.zeros((2, 3))))


def test_degenerate_channel_warns():
	with pytest.warns(DegenerateChannelWarning):
		lam, w_r = principal_eig(ChannelMatrix(np.eye(2)))
	assert lam == pytest.approx(1.0)


def test_channel_file_round_trip(tmp_path):
	draws = gen_channels(2, 3, 2, 12.0, 2.6, base_seed=3)
	loaded = load_channels(save_channels(draws, str(tmp_path / "channels.json")))
	assert len(loaded) == 2
	np.testing.assert_array_equal(loaded[1].h, draws[1].h)
	assert loaded[1].pathloss_linear == draws[1].pathloss_linear


def test_drive_reference_is_14_dbm():
	assert DRIVE_REFERENCE_W == pytest.approx(10 ** 1.4 / 1000.0)


def test_noise_must_be_positive():
	with pytest.raises(ConfigurationError):
		LinkNoise(0.0, 1e-8)


def test_mrt_direction():
	channel = gen_channel(3, 2, 12.0, 2.6, seed=4)
	_, w_r = principal_eig(channel)
	v = mrt_direction(channel, w_r)
	assert np.linalg.norm(v) == pytest.approx(1.0)
	with pytest.raises(ConfigurationError):
		mrt_direction(ChannelMatrix(np.array([[1.0, 0.0], [0.0, 0.0]])), np.array([0.0, 1.0]))


def test_linear_gain_is_compensated(link_signal):
	channel = gen_channel(3, 2, 12.0, 2.6, seed=4)
	_, w_r = principal_eig(channel)
	model = MemoryPolynomial(1, 0, [[2.0]])
	sol = hpa_aware_weights(channel, w_r, model, DRIVE_REFERENCE_W, link_signal)
	np.testing.assert_allclose(sol.w_t, sol.mrt)
	np.testing.assert_allclose(sol.effective_weights, 2.0 * sol.mrt)
	assert np.linalg.norm(sol.w_t) == pytest.approx(1.0)


def test_compressed_gains_are_equalized_to_mrt(link_signal, cubic_model):
	channel = gen_channel(3, 2, 12.0, 2.6, seed=4)
	_, w_r = principal_eig(channel)
	sol = hpa_aware_weights(channel, w_r, cubic_model, 0.5 * DRIVE_REFERENCE_W, link_signal)
	assert np.linalg.norm(sol.w_t) == pytest.approx(1.0, abs=1e-12)
	ratio = sol.effective_weights / sol.mrt
	np.testing.assert_allclose(ratio, ratio[0], rtol=1e-6)


def test_vanishing_gain_is_not_invertible(link_signal):
	channel = gen_channel(3, 2, 12.0, 2.6, seed=4)
	_, w_r = principal_eig(channel)
	model = MemoryPolynomial(2, 0, [[0.0], [0.0]])
	with pytest.raises(NonInvertibleOperatingPointError):
		hpa_aware_weights(channel, w_r, model, DRIVE_REFERENCE_W, link_signal)


def test_distortion_free_snr_is_classical(link_signal):
	channel = gen_channel(3, 2, 12.0, 2.6, seed=6)
	lam, w_r = principal_eig(channel)
	model = MemoryPolynomial(1, 0, [[1.0]])
	p_t = 0.025
	sol = hpa_aware_weights(channel, w_r, model, p_t, link_signal)
	gamma, distortion = link_snr(channel, sol, model, link_signal, p_t, NOISE, zeta=1)
	assert distortion == 0.0
	assert gamma == pytest.approx(p_t * lam / NOISE.sigma_v_sq, rel=1e-12)


def test_memoryless_amplifier_makes_zeta_irrelevant(link_signal):
	channel = gen_channel(3, 2, 12.0, 2.6, seed=7)
	_, w_r = principal_eig(channel)
	model = MemoryPolynomial(3, 0, [[1.0], [0.0], [-0.05]])
	p_t = 0.1 * DRIVE_REFERENCE_W
	sol = hpa_aware_weights(channel, w_r, model, p_t, link_signal)
	with_dpd, _ = link_snr(channel, sol, model, link_signal, p_t, NOISE, zeta=0)
	without_dpd, distortion = link_snr(channel, sol, model, link_signal, p_t, NOISE, zeta=1)
	assert distortion == 0.0
	assert with_dpd == without_dpd


def test_predistortion_never_lowers_snr(link_signal, memory_model):
	channel = gen_channel(3, 2, 12.0, 2.6, seed=9)
	_, w_r = principal_eig(channel)
	p_t = 0.05 * DRIVE_REFERENCE_W
	sol = hpa_aware_weights(channel, w_r, memory_model, p_t, link_signal)
	with_dpd, residual = link_snr(channel, sol, memory_model, link_signal, p_t, NOISE, zeta=0)
	without_dpd, distortion = link_snr(channel, sol, memory_model, link_signal, p_t, NOISE, zeta=1)
	assert distortion > 0.0
	assert with_dpd > without_dpd
	assert residual < distortion


def test_predistorted_chain_reproduces_targets(link_signal, memory_model):
	channel = gen_channel(3, 2, 12.0, 2.6, seed=9)
	_, w_r = principal_eig(channel)
	p_t = 0.05 * DRIVE_REFERENCE_W
	sol = hpa_aware_weights(channel, w_r, memory_model, p_t, link_signal)
	targets = antenna_signals(sol, link_signal, p_t, zeta=0)
	chain = simulate_antenna_chain(memory_model, targets, DRIVE_REFERENCE_W, zeta=0,
								   dpd_cfg=DpdConfig(tolerance=1e-12, max_iterations=200))
	assert targets.shape == (3, len(link_signal))
	assert len(chain.reports) == 3
	np.testing.assert_allclose(chain.output, targets, atol=1e-9 * np.abs(targets).max())
	np.testing.assert_allclose(combine(channel, sol, chain.distortion), 0.0, atol=1e-9 * np.abs(targets).max())


def test_chain_rejects_unknown_zeta(link_signal):
	with pytest.raises(ConfigurationError):
		simulate_antenna_chain(MemoryPolynomial(1, 0, [[1.0]]), np.ones((1, 8)), zeta=2)


def test_raw_chain_has_no_clipping_residual(link_signal, memory_model):
	signals = np.sqrt(DRIVE_REFERENCE_W) * np.outer(np.ones(3) / np.sqrt(3.0), link_signal.samples)
	chain = simulate_antenna_chain(memory_model, signals, DRIVE_REFERENCE_W, zeta=1)
	assert chain.reports == ()
	assert not np.any(chain.clipping)


def test_chain_drive_is_held_at_saturation(cubic_model):
	peak = np.sqrt(10.0 / 3.0)
	reference = np.sqrt(DRIVE_REFERENCE_W)
	signals = reference * np.array([[0.5, 3.0, 10.0]], dtype=complex)
	chain = simulate_antenna_chain(cubic_model, signals, DRIVE_REFERENCE_W, zeta=1)
	peak_output = peak * (1.0 - 0.1 * peak ** 2)
	np.testing.assert_allclose(np.abs(chain.output[0]) / reference, [0.4875, peak_output, peak_output], rtol=1e-9)


def test_rayleigh_entries_have_unit_power():
	draws = gen_channels(25000, 2, 2, 12.0, 2.6, base_seed=17, stream="power")
	entries = np.concatenate([c.h.reshape(-1) for c in draws])
	assert entries.size == 100000
	assert np.mean(np.abs(entries) ** 2) == pytest.approx(1.0, abs=0.02)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.floats(min_value=0.1, max_value=10.0))
def test_channel_gain_scales_eigenvalue_not_combiner(seed, alpha):
	channel = gen_channel(3, 2, 12.0, 2.6, seed)
	lam, w_r = principal_eig(channel)
	scaled_lam, scaled_w_r = principal_eig(ChannelMatrix(alpha * channel.h, channel.pathloss_linear))
	assert scaled_lam == pytest.approx(alpha ** 2 * lam, rel=1e-9)
	np.testing.assert_allclose(scaled_w_r, w_r, atol=1e-6)


LINK_SIGNAL = gen_ofdm_like(16, 4, "QPSK", 4, seed=8)
MEMORY_MODEL = MemoryPolynomial(3, 2, [
	[1.0 + 0.05j, 0.12 - 0.03j, -0.04 + 0.01j],
	[0.0, 0.0, 0.0],
	[-0.06 + 0.02j, 0.01j, 0.005],
])


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.floats(min_value=1e-4, max_value=0.05))
def test_predistortion_never_lowers_snr_over_channels(seed, power_fraction):
	channel = gen_channel(3, 2, 12.0, 2.6, seed)
	_, w_r = principal_eig(channel)
	p_t = power_fraction * DRIVE_REFERENCE_W
	sol = hpa_aware_weights(channel, w_r, MEMORY_MODEL, p_t, LINK_SIGNAL)
	with_dpd, _ = link_snr(channel, sol, MEMORY_MODEL, LINK_SIGNAL, p_t, NOISE, zeta=0)
	without_dpd, _ = link_snr(channel, sol, MEMORY_MODEL, LINK_SIGNAL, p_t, NOISE, zeta=1)
	assert with_dpd >= without_dpd


@settings(max_examples=100, deadline=None)
@given(
	st.integers(min_value=0, max_value=2 ** 32 - 1),
	st.floats(min_value=-0.2, max_value=0.0),
	st.floats(min_value=0.01, max_value=2.0),
)
def test_memoryless_amplifier_makes_zeta_irrelevant_over_channels(seed, c3, power_fraction):
	channel = gen_channel(3, 2, 12.0, 2.6, seed)
	_, w_r = principal_eig(channel)
	model = MemoryPolynomial(3, 0, [[1.0], [0.0], [c3]])
	p_t = power_fraction * DRIVE_REFERENCE_W
	sol = hpa_aware_weights(channel, w_r, model, p_t, LINK_SIGNAL)
	with_dpd, _ = link_snr(channel, sol, model, LINK_SIGNAL, p_t, NOISE, zeta=0)
	without_dpd, distortion = link_snr(channel, sol, model, LINK_SIGNAL, p_t, NOISE, zeta=1)
	assert distortion == 0.0
	assert with_dpd == without_dpd
