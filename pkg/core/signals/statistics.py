"""
Scalar and spectral statistics - PAPR, CCDF, Welch PSD and ACPR
"""
from dataclasses import dataclass
import numpy as np
import pandas as pd
from scipy import signal as sps
from core.utils.errors import ConfigurationError, UndefinedStatisticError
from core.signals.waveforms import ComplexSignal, as_samples


@dataclass(frozen=True, eq=False)
class SpectrumEstimate:
	"""Two-sided PSD on an ascending frequency grid; psd_db is 10·log10 of power per Hz"""
	freqs_hz: np.ndarray
	psd_db: np.ndarray
	segment_length: int
	overlap_fraction: float
	sample_rate_hz: float

	def __post_init__(self):
		freqs = np.asarray(self.freqs_hz, dtype=float).reshape(-1)
		psd_db = np.asarray(self.psd_db, dtype=float).reshape(-1)
		if freqs.size != psd_db.size:
			raise ConfigurationError("freqs_hz and psd_db must have the same length")
		if freqs.size > 1 and not np.all(np.diff(freqs) > 0):
			raise ConfigurationError("freqs_hz must be strictly increasing")
		object.__setattr__(self, "freqs_hz", freqs)
		object.__setattr__(self, "psd_db", psd_db)

	@property
	def psd(self):
		return 10.0 ** (self.psd_db / 10.0)

	@property
	def bin_width_hz(self):
		return self.sample_rate_hz / self.segment_length

	@property
	def total_power(self):
		return float(np.sum(self.psd) * self.bin_width_hz)


def _instantaneous_to_mean(sig):
	power = np.abs(as_samples(sig)) ** 2
	mean = power.mean() if power.size else 0.0
	if not mean > 0:
		raise UndefinedStatisticError("statistic undefined for a zero-power signal")
	return power / mean


def papr_db(sig):
	"""Peak-to-average power ratio in dB, measured on the discrete samples"""
	ratio = _instantaneous_to_mean(sig)
	return max(0.0, float(10.0 * np.log10(ratio.max())))


def ccdf(sig, thresholds_db):
	"""Fraction of samples whose power exceeds each threshold (dB over mean power)"""
	thresholds = np.asarray(thresholds_db, dtype=float).reshape(-1)
	if thresholds.size > 1 and np.any(np.diff(thresholds) < 0):
		raise ConfigurationError("thresholds_db must be sorted ascending")

	ratio_db = 10.0 * np.log10(np.maximum(_instantaneous_to_mean(sig), np.finfo(float).tiny))
	ordered = np.sort(ratio_db)
	exceeding = ordered.size - np.searchsorted(ordered, thresholds, side="right")
	return pd.DataFrame({
		"threshold_db": thresholds,
		"probability": exceeding / ordered.size,
	})


def papr_at_probability(sig, probability=1e-3):
	"""PAPR level exceeded by the given fraction of samples"""
	ratio_db = 10.0 * np.log10(np.maximum(_instantaneous_to_mean(sig), np.finfo(float).tiny))
	return float(np.quantile(ratio_db, 1.0 - probability))


def psd_welch(sig, segment_length, overlap_fraction=0.5):
	"""Hann-windowed two-sided Welch PSD; Σ psd·Δf equals the mean power"""
	if not isinstance(sig, ComplexSignal):
		raise ConfigurationError("psd_welch needs a ComplexSignal (sample rate required)")
	segment_length = int(segment_length)
	if segment_length < 2 or segment_length > len(sig):
		raise ConfigurationError(
			f"segment_length must be in [2, {len(sig)}], got {segment_length}"
		)
	if not 0.0 <= overlap_fraction < 1.0:
		raise ConfigurationError(f"overlap_fraction must be in [0, 1), got {overlap_fraction}")

	noverlap = min(int(np.floor(overlap_fraction * segment_length)), segment_length - 1)
	freqs, psd = sps.welch(
		sig.samples,
		fs=sig.sample_rate_hz,
		window="hann",
		nperseg=segment_length,
		noverlap=noverlap,
		detrend=False,
		return_onesided=False,
		scaling="density",
	)
	order = np.argsort(freqs)
	psd_db = 10.0 * np.log10(np.maximum(psd[order], np.finfo(float).tiny))
	return SpectrumEstimate(freqs[order], psd_db, segment_length, float(overlap_fraction), sig.sample_rate_hz)


def _check_band(spec, band, name):
	lo, hi = float(band[0]), float(band[1])
	nyquist = spec.sample_rate_hz / 2.0
	if not lo < hi:
		raise ConfigurationError(f"{name} must satisfy f_lo < f_hi, got ({lo}, {hi})")
	if lo < -nyquist or hi > nyquist:
		raise ConfigurationError(f"{name} ({lo}, {hi}) lies outside ±{nyquist} Hz")
	return lo, hi


def band_power(spec, band):
	"""Integrated PSD over the bins whose centre lies in [f_lo, f_hi]"""
	lo, hi = _check_band(spec, band, "band")
	mask = (spec.freqs_hz >= lo) & (spec.freqs_hz <= hi)
	if not mask.any():
		raise ConfigurationError(f"band ({lo}, {hi}) contains no frequency bins")
	return float(np.sum(spec.psd[mask]) * spec.bin_width_hz)


def acpr_db(spec, main_band, adjacent_band):
	"""Main-band to adjacent-band power ratio in dBc"""
	main = _check_band(spec, main_band, "main_band")
	adjacent = _check_band(spec, adjacent_band, "adjacent_band")
	if not (main[1] < adjacent[0] or adjacent[1] < main[0]):
		raise ConfigurationError(f"bands overlap: main {main}, adjacent {adjacent}")
	return float(10.0 * np.log10(band_power(spec, main) / band_power(spec, adjacent)))


def acpr_bands(occupied_bandwidth_hz, guard_fraction=0.1):
	"""
	Default ACPR bands around a signal occupying ±occupied_bandwidth_hz/2

	Returns:
		(main_band, upper_adjacent_band, lower_adjacent_band); adjacent bands have the
		main band's width and start guard_fraction·bandwidth past its edge
	"""
	half = occupied_bandwidth_hz / 2.0
	guard = guard_fraction * occupied_bandwidth_hz
	main = (-half, half)
	upper = (half + guard, half + guard + occupied_bandwidth_hz)
	lower = (-upper[1], -upper[0])
	return main, upper, lower


def nmse_db(reference, estimate):
	"""Normalized mean-square error of estimate against reference, in dB"""
	reference = as_samples(reference)
	estimate = as_samples(estimate)
	if reference.size != estimate.size:
		raise ConfigurationError(f"length mismatch: {reference.size} vs {estimate.size}")
	denominator = np.sum(np.abs(reference) ** 2)
	if not denominator > 0:
		raise UndefinedStatisticError("NMSE undefined for a zero-power reference")
	error = np.sum(np.abs(estimate - reference) ** 2)
	return float(10.0 * np.log10(max(error, np.finfo(float).tiny) / denominator))
