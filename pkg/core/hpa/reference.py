"""
Synthetic reference amplifier - FIR memory followed by a Rapp AM/AM nonlinearity
"""
from dataclasses import dataclass
import numpy as np
from scipy import signal as sps
from core.signals.waveforms import ComplexSignal, as_samples
from core.utils.errors import ConfigurationError


DEFAULT_MEMORY_TAPS = (1.0, 0.15, -0.05, 0.01)


@dataclass(frozen=True, eq=False)
class ReferenceAmplifier:
	"""Wiener amplifier: x -> FIR -> g(a) = G·a / (1 + (a/a_sat)^(2s))^(1/2s), phase kept"""
	memory_fir: np.ndarray
	smoothness: float = 2.0
	saturation_amplitude: float = 1.0
	small_signal_gain: float = 1.0

	def __post_init__(self):
		taps = np.array(self.memory_fir, dtype=np.complex128).reshape(-1)
		if taps.size == 0 or not np.any(taps):
			raise ConfigurationError("memory_fir needs at least one nonzero tap")
		for name in ("smoothness", "saturation_amplitude", "small_signal_gain"):
			value = float(getattr(self, name))
			if not np.isfinite(value) or value <= 0:
				raise ConfigurationError(f"{name} must be positive, got {value}")
			object.__setattr__(self, name, value)
		taps.setflags(write=False)
		object.__setattr__(self, "memory_fir", taps)

	@property
	def memory_depth(self):
		return self.memory_fir.size - 1

	@property
	def max_output_amplitude(self):
		return self.small_signal_gain * self.saturation_amplitude


def _rapp_gain(amp, amplitude):
	ratio = (amplitude / amp.saturation_amplitude) ** (2.0 * amp.smoothness)
	return amp.small_signal_gain / (1.0 + ratio) ** (1.0 / (2.0 * amp.smoothness))


def eval_reference(amp, x_in):
	"""Reference amplifier output (zero pre-history in the FIR)"""
	x = as_samples(x_in)
	filtered = sps.lfilter(amp.memory_fir, [1.0], x)
	y = filtered * _rapp_gain(amp, np.abs(filtered))
	if isinstance(x_in, ComplexSignal):
		return x_in.with_samples(y)
	return y


def reference_am_am(amp, amplitudes):
	"""Steady-state output amplitude for constant inputs"""
	amplitudes = np.asarray(amplitudes, dtype=float)
	filtered = amplitudes * abs(np.sum(amp.memory_fir))
	return filtered * _rapp_gain(amp, filtered)


def default_reference_amplifier(drive_power=1.0, backoff_db=3.0, smoothness=2.0, small_signal_gain=1.0,
								taps=DEFAULT_MEMORY_TAPS):
	"""
	Reference amplifier whose saturation sits backoff_db above the given mean drive power

	Taps are normalized to unit energy so the FIR leaves the mean power of white input unchanged.
	"""
	if drive_power <= 0:
		raise ConfigurationError(f"drive_power must be positive, got {drive_power}")
	taps = np.asarray(taps, dtype=np.complex128)
	norm = np.linalg.norm(taps)
	if not norm > 0:
		raise ConfigurationError("reference taps must contain a nonzero value")
	taps = taps / norm
	saturation = np.sqrt(drive_power * 10.0 ** (backoff_db / 10.0))
	return ReferenceAmplifier(taps, smoothness, saturation, small_signal_gain)
