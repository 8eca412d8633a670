"""
Sample-by-sample digital predistortion by fixed-point inversion of a memory polynomial
"""
from dataclasses import dataclass
import numpy as np
import pandas as pd
from core.hpa.memory_polynomial import eval_mpm, peak_drive
from core.signals.statistics import nmse_db
from core.signals.waveforms import ComplexSignal, as_samples
from core.utils.errors import ConfigurationError, NonInvertibleOperatingPointError


@dataclass(frozen=True)
class DpdConfig:
	"""Stopping rule and saturation guard of the inversion"""
	tolerance: float = 1e-8
	max_iterations: int = 50
	saturation_guard: float = 1.0

	def __post_init__(self):
		if not self.tolerance > 0:
			raise ConfigurationError(f"tolerance must be positive, got {self.tolerance}")
		if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
			raise ConfigurationError(f"max_iterations must be an integer >= 1, got {self.max_iterations}")
		if not self.saturation_guard > 0:
			raise ConfigurationError(f"saturation_guard must be positive, got {self.saturation_guard}")
		object.__setattr__(self, "max_iterations", int(self.max_iterations))


@dataclass(frozen=True, eq=False)
class DpdReport:
	"""Per-sample outcome of the inversion loop"""
	iterations_per_sample: np.ndarray
	converged: np.ndarray
	residual: np.ndarray
	clipped: np.ndarray

	@property
	def n_converged(self):
		return int(np.count_nonzero(self.converged))

	@property
	def n_clipped(self):
		return int(np.count_nonzero(self.clipped))

	@property
	def mean_iterations(self):
		return float(np.mean(self.iterations_per_sample))

	def to_frame(self):
		"""(n, iterations, converged, residual, clipped) table"""
		return pd.DataFrame({
			"n": np.arange(self.residual.size),
			"iterations": self.iterations_per_sample,
			"converged": self.converged,
			"residual": self.residual,
			"clipped": self.clipped,
		})


def _horner(coefficients, amplitude):
	"""Σ_k coefficients[k]·amplitude^k on Python scalars"""
	value = coefficients[-1]
	for c in coefficients[-2::-1]:
		value = value * amplitude + c
	return value


def guard_amplitude(model, cfg):
	"""Largest admissible |x_dpd|: saturation_guard times the saturation amplitude of the model"""
	return cfg.saturation_guard * peak_drive(model)


def dpd_invert(model, x_in, cfg=None):
	"""
	Predistort x_in so that eval_mpm(model, x_dpd) reproduces it

	Each x_dpd(n) solves x_dpd = (x_in(n) - δ(n)) / Δ(x_dpd), with δ built
	from already-predistorted past samples. Damped iteration starting at
	x_in(n); λ halves when the update grows twice in a row. Samples whose
	iterate leaves the guard radius are placed on it in the direction of
	x_in(n) - δ(n) and flagged.

	Returns:
		(x_dpd, DpdReport); x_dpd has the type of x_in
	"""
	cfg = cfg or DpdConfig()
	if model.coeffs[0, 0] == 0:
		raise NonInvertibleOperatingPointError("c[1,0] = 0: the amplifier has no linear term to invert")

	x = as_samples(x_in)
	n_samples = x.size
	memory_m = model.memory_m
	guard = guard_amplitude(model, cfg)
	tolerance = cfg.tolerance
	max_iterations = cfg.max_iterations

	# Python scalars keep the per-sample loop cheap
	scaling_coeffs = [complex(c) for c in model.coeffs[:, 0]]
	memory_coeffs = [[complex(c) for c in model.coeffs[:, m]] for m in range(1, memory_m + 1)]
	targets = x.tolist()

	out = [0j] * n_samples
	iterations = np.zeros(n_samples, dtype=int)
	converged = np.zeros(n_samples, dtype=bool)
	residual = np.zeros(n_samples)
	clipped = np.zeros(n_samples, dtype=bool)
	# pending[n] accumulates δ(n) as past samples are finalized
	pending = [0j] * (n_samples + memory_m)

	for n in range(n_samples):
		target = targets[n]
		numerator = target - pending[n]
		previous = target
		damping = 1.0
		last_step = float("inf")
		growth = 0
		step = 0.0
		k = 0

		while k < max_iterations:
			k += 1
			scale = _horner(scaling_coeffs, abs(previous))
			if scale == 0:
				previous = _clip(numerator, guard)
				clipped[n] = True
				break

			update = (1.0 - damping) * previous + damping * (numerator / scale)
			step = abs(update - previous)
			growth = growth + 1 if step > last_step else 0
			if growth >= 2:
				damping *= 0.5
				growth = 0
			last_step = step
			previous = update

			if abs(previous) > guard or previous != previous:
				previous = _clip(numerator, guard)
				clipped[n] = True
				break
			if step <= tolerance:
				converged[n] = True
				break

		iterations[n] = k
		residual[n] = step

		out[n] = previous
		if memory_m:
			magnitude = abs(previous)
			for m, coeffs_m in enumerate(memory_coeffs, start=1):
				pending[n + m] += _horner(coeffs_m, magnitude) * previous

	x_dpd = np.asarray(out, dtype=np.complex128)
	report = DpdReport(iterations, converged, residual, clipped)
	if isinstance(x_in, ComplexSignal):
		return x_in.with_samples(x_dpd), report
	return x_dpd, report


def _clip(value, guard):
	"""Project onto the guard circle, keeping the phase when it is defined"""
	if not np.isfinite(guard):
		return value if value == value else 0j
	magnitude = abs(value)
	if magnitude == 0 or value != value or not np.isfinite(magnitude):
		return complex(guard)
	return value * (guard / magnitude)


def linearization_error(model, x_in, x_dpd):
	"""NMSE in dB between the amplified predistorted signal and the desired one"""
	x = as_samples(x_in)
	y = as_samples(x_dpd)
	if x.size != y.size:
		raise ConfigurationError(f"x_in and x_dpd lengths differ: {x.size} vs {y.size}")
	return nmse_db(x, eval_mpm(model, y))
