"""
Test waveform generation - multi-sine, OFDM-like and multi-channel surrogates
"""
import re
from dataclasses import dataclass
import numpy as np
from scipy import signal as sps
from core.utils.errors import ConfigurationError, UndefinedStatisticError


CONSTELLATIONS = {
	"QPSK": np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2.0),
	"16QAM": np.array([complex(i, q) for i in (-3, -1, 1, 3) for q in (-3, -1, 1, 3)]) / np.sqrt(10.0),
}

_RANDOM_PHASES = re.compile(r"^random\((-?\d+)\)$")


@dataclass(frozen=True, eq=False)
class ComplexSignal:
	"""Uniformly sampled complex baseband sequence; samples are read-only"""
	samples: np.ndarray
	sample_rate_hz: float

	def __post_init__(self):
		samples = np.array(self.samples, dtype=np.complex128).reshape(-1)
		if samples.size == 0:
			raise ConfigurationError("signal must contain at least one sample")
		rate = float(self.sample_rate_hz)
		if not np.isfinite(rate) or rate <= 0:
			raise ConfigurationError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")
		samples.setflags(write=False)
		object.__setattr__(self, "samples", samples)
		object.__setattr__(self, "sample_rate_hz", rate)

	def __len__(self):
		return self.samples.size

	@property
	def mean_power(self):
		return float(np.mean(np.abs(self.samples) ** 2))

	def with_samples(self, samples):
		"""New signal on the same sample grid"""
		return ComplexSignal(samples, self.sample_rate_hz)


def as_samples(sig):
	"""Complex sample array of a ComplexSignal or array-like"""
	if isinstance(sig, ComplexSignal):
		return sig.samples
	return np.asarray(sig, dtype=np.complex128).reshape(-1)


def scale_to_power(sig, mean_power=1.0):
	"""Rescale a signal to the requested mean power"""
	current = sig.mean_power
	if current <= 0 or not np.isfinite(current):
		raise UndefinedStatisticError("cannot rescale a zero-power signal")
	return sig.with_samples(sig.samples * np.sqrt(mean_power / current))


def _require_positive(name, value, integer=False):
	if integer and (int(value) != value):
		raise ConfigurationError(f"{name} must be an integer, got {value}")
	if not value > 0:
		raise ConfigurationError(f"{name} must be positive, got {value}")


def _resolve_phases(phases, n_tones):
	"""Phase vector from 'zero', 'random(seed)' or an explicit sequence"""
	if isinstance(phases, str):
		if phases == "zero":
			return np.zeros(n_tones)
		match = _RANDOM_PHASES.match(phases.strip())
		if match:
			rng = np.random.default_rng(int(match.group(1)))
			return rng.uniform(0.0, 2.0 * np.pi, n_tones)
		raise ConfigurationError(f"unknown phase specification: {phases!r}")

	values = np.asarray(phases, dtype=float).reshape(-1)
	if values.size != n_tones:
		raise ConfigurationError(f"expected {n_tones} phases, got {values.size}")
	return values


def gen_multisine(n_tones, tone_spacing_hz, n_samples, sample_rate_hz, phases="zero"):
	"""Unit-power sum of equal-amplitude tones centred on 0 Hz"""
	_require_positive("n_tones", n_tones, integer=True)
	_require_positive("tone_spacing_hz", tone_spacing_hz)
	_require_positive("n_samples", n_samples, integer=True)
	_require_positive("sample_rate_hz", sample_rate_hz)
	if n_tones * tone_spacing_hz >= sample_rate_hz:
		raise ConfigurationError(
			f"{n_tones} tones at {tone_spacing_hz} Hz spacing alias at {sample_rate_hz} Hz sampling"
		)

	phase_values = _resolve_phases(phases, int(n_tones))
	offsets_hz = (np.arange(n_tones) - (n_tones - 1) / 2.0) * tone_spacing_hz
	n = np.arange(int(n_samples))
	arguments = 2.0 * np.pi * np.outer(offsets_hz, n) / sample_rate_hz + phase_values[:, None]
	samples = np.exp(1j * arguments).sum(axis=0)
	return scale_to_power(ComplexSignal(samples, sample_rate_hz))


def ofdm_baseband(n_subcarriers, n_symbols, constellation="QPSK", seed=0):
	"""Critically sampled multicarrier samples (one IFFT per symbol, no cyclic prefix)"""
	_require_positive("n_subcarriers", n_subcarriers, integer=True)
	_require_positive("n_symbols", n_symbols, integer=True)
	if constellation not in CONSTELLATIONS:
		raise ConfigurationError(f"constellation must be one of {sorted(CONSTELLATIONS)}, got {constellation!r}")

	rng = np.random.default_rng(seed)
	alphabet = CONSTELLATIONS[constellation]
	data = alphabet[rng.integers(0, alphabet.size, size=(int(n_symbols), int(n_subcarriers)))]
	symbols = np.fft.ifft(data, axis=1) * np.sqrt(n_subcarriers)
	return symbols.reshape(-1)


def gen_ofdm_like(n_subcarriers, n_symbols, constellation="QPSK", oversampling=4, seed=0,
				  subcarrier_spacing_hz=15e3):
	"""
	Unit-power OFDM-like waveform, oversampled by ideal band-limited interpolation

	The occupied band is n_subcarriers * subcarrier_spacing_hz wide, centred on 0 Hz;
	the returned sample rate is oversampling times that bandwidth.
	"""
	if int(oversampling) != oversampling or oversampling < 2:
		raise ConfigurationError(f"oversampling must be an integer >= 2, got {oversampling}")
	_require_positive("subcarrier_spacing_hz", subcarrier_spacing_hz)

	baseband = ofdm_baseband(n_subcarriers, n_symbols, constellation, seed)
	interpolated = sps.resample(baseband, baseband.size * int(oversampling))
	sample_rate_hz = n_subcarriers * subcarrier_spacing_hz * oversampling
	return scale_to_power(ComplexSignal(interpolated, sample_rate_hz))


def gen_multichannel(n_channels=4, n_subcarriers=64, n_symbols=64, constellation="QPSK",
					 oversampling=16, channel_spacing_hz=None, subcarrier_spacing_hz=15e3, seed=0):
	"""
	Multi-channel surrogate: frequency-shifted OFDM-like sub-bands summed to unit power

	Each channel is an independent gen_ofdm_like signal (seed spawned from `seed`);
	channels are centred symmetrically around 0 Hz at channel_spacing_hz
	(default 1.3 channel bandwidths).
	"""
	_require_positive("n_channels", n_channels, integer=True)
	channel_bandwidth_hz = n_subcarriers * subcarrier_spacing_hz
	if channel_spacing_hz is None:
		channel_spacing_hz = 1.3 * channel_bandwidth_hz
	sample_rate_hz = channel_bandwidth_hz * oversampling
	span_hz = multichannel_span_hz(n_channels, n_subcarriers, subcarrier_spacing_hz, channel_spacing_hz)
	if span_hz >= sample_rate_hz:
		raise ConfigurationError(
			f"{n_channels} channels span {span_hz} Hz, beyond the {sample_rate_hz} Hz sample rate"
		)

	child_seeds = np.random.SeedSequence(seed).generate_state(int(n_channels))
	total = None
	for index, child_seed in enumerate(child_seeds):
		channel = gen_ofdm_like(n_subcarriers, n_symbols, constellation, oversampling,
								int(child_seed), subcarrier_spacing_hz)
		centre_hz = (index - (n_channels - 1) / 2.0) * channel_spacing_hz
		n = np.arange(len(channel))
		shifted = channel.samples * np.exp(2j * np.pi * centre_hz * n / sample_rate_hz)
		total = shifted if total is None else total + shifted

	return scale_to_power(ComplexSignal(total, sample_rate_hz))


def multichannel_span_hz(n_channels, n_subcarriers, subcarrier_spacing_hz=15e3, channel_spacing_hz=None):
	"""Occupied bandwidth of a gen_multichannel waveform"""
	channel_bandwidth_hz = n_subcarriers * subcarrier_spacing_hz
	if channel_spacing_hz is None:
		channel_spacing_hz = 1.3 * channel_bandwidth_hz
	return (n_channels - 1) * channel_spacing_hz + channel_bandwidth_hz
