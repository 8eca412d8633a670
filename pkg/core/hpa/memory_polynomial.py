"""
Memory polynomial amplifier model - evaluation, regression matrix, least-squares
identification and the scaling/distortion decomposition
"""
from dataclasses import dataclass
from functools import lru_cache
import numpy as np
from scipy import linalg
from scipy.optimize import minimize_scalar
from core.signals.waveforms import ComplexSignal, as_samples
from core.signals.statistics import nmse_db
from core.utils.errors import ConfigurationError, IdentifiabilityError
from core.utils.file_ops import save_json, load_json


@dataclass(frozen=True, eq=False)
class MemoryPolynomial:
	"""
	x_out(n) = Σ_p Σ_m c[p-1, m] · x_in(n-m)·|x_in(n-m)|^(p-1),  p = 1..P, m = 0..M

	coeffs has shape (P, M+1); its row-major flattening is the C_HPA ordering
	(p=1, m=0..M), (p=2, m=0..M), ...
	"""
	order_p: int
	memory_m: int
	coeffs: np.ndarray

	def __post_init__(self):
		order_p, memory_m = int(self.order_p), int(self.memory_m)
		if order_p != self.order_p or order_p < 1:
			raise ConfigurationError(f"order_p must be a positive integer, got {self.order_p}")
		if memory_m != self.memory_m or memory_m < 0:
			raise ConfigurationError(f"memory_m must be a non-negative integer, got {self.memory_m}")
		coeffs = np.array(self.coeffs, dtype=np.complex128)
		if coeffs.size != order_p * (memory_m + 1):
			raise ConfigurationError(
				f"expected P(M+1) = {order_p * (memory_m + 1)} coefficients, got {coeffs.size}"
			)
		coeffs = coeffs.reshape(order_p, memory_m + 1)
		coeffs.setflags(write=False)
		object.__setattr__(self, "order_p", order_p)
		object.__setattr__(self, "memory_m", memory_m)
		object.__setattr__(self, "coeffs", coeffs)

	@classmethod
	def from_vector(cls, order_p, memory_m, vector):
		"""Build from a C_HPA-ordered coefficient vector"""
		return cls(order_p, memory_m, np.asarray(vector, dtype=np.complex128).reshape(order_p, memory_m + 1))

	@property
	def vector(self):
		return self.coeffs.reshape(-1)

	@property
	def n_coeffs(self):
		return self.coeffs.size

	def coefficient(self, p, m):
		return complex(self.coeffs[p - 1, m])


@dataclass(frozen=True, eq=False)
class Decomposition:
	"""Per-sample scaling Δ(x_in(n)) and memory distortion δ(x_in(n))"""
	scaling: np.ndarray
	distortion: np.ndarray

	def recompose(self, x_in):
		return self.scaling * as_samples(x_in) + self.distortion


def column_label(index, memory_m):
	"""(p, m) pair of a regression column"""
	return (index // (memory_m + 1) + 1, index % (memory_m + 1))


def _like(template, samples):
	if isinstance(template, ComplexSignal):
		return template.with_samples(samples)
	return samples


def _delayed(x, m):
	"""x(n-m) with zero pre-history"""
	if m == 0:
		return x
	out = np.zeros_like(x)
	out[m:] = x[:-m]
	return out


def _require_length(x, memory_m, minimum):
	if x.size < minimum:
		raise ConfigurationError(f"need at least {minimum} samples for memory depth {memory_m}, got {x.size}")


def eval_mpm(model, x_in):
	"""Amplifier output for input x_in (zero pre-history, same length as input)"""
	x = as_samples(x_in)
	_require_length(x, model.memory_m, model.memory_m + 1)

	y = np.zeros_like(x)
	for m in range(model.memory_m + 1):
		delayed = _delayed(x, m)
		magnitude = np.abs(delayed)
		# Horner in |x|: Σ_p c[p,m] |x|^(p-1)
		gain = np.full(x.shape, model.coeffs[-1, m], dtype=np.complex128)
		for p in range(model.order_p - 1, 0, -1):
			gain = gain * magnitude + model.coeffs[p - 1, m]
		y += gain * delayed
	return _like(x_in, y)


def build_phi(x_in, order_p, memory_m):
	"""Regression matrix Φ: one row per n >= M, columns in C_HPA order"""
	x = as_samples(x_in)
	_require_length(x, memory_m, memory_m + 1)

	rows = x.size - memory_m
	phi = np.empty((rows, order_p * (memory_m + 1)), dtype=np.complex128)
	for m in range(memory_m + 1):
		delayed = x[memory_m - m:memory_m - m + rows]
		magnitude = np.abs(delayed)
		for p in range(1, order_p + 1):
			phi[:, (p - 1) * (memory_m + 1) + m] = delayed * magnitude ** (p - 1)
	return phi


def _equilibrated_qr(phi):
	norms = np.linalg.norm(phi, axis=0)
	safe = np.where(norms > 0, norms, 1.0)
	q, r, perm = linalg.qr(phi / safe, mode="economic", pivoting=True)
	return q, r, perm, norms


def _numerical_rank(r, rtol=1e-10):
	diag = np.abs(np.diag(r))
	if diag.size == 0 or diag[0] == 0:
		return 0
	return int(np.sum(diag > rtol * diag[0]))


def regression_condition(x_in, order_p, memory_m):
	"""2-norm condition number of the column-equilibrated Φ"""
	phi = build_phi(x_in, order_p, memory_m)
	norms = np.linalg.norm(phi, axis=0)
	if np.any(norms == 0):
		return float("inf")
	return float(np.linalg.cond(phi / norms))


def fit_mpm(x_in, x_out, order_p, memory_m):
	"""
	Least-squares MPM identification via column-pivoted QR

	Rows n < M are dropped so every regressor sees real input history.

	Raises:
		ConfigurationError: length mismatch or fewer than 3·P·(M+1) usable rows
		IdentifiabilityError: Φ is rank deficient; lists the (p, m) columns left out
	"""
	x = as_samples(x_in)
	y = as_samples(x_out)
	if x.size != y.size:
		raise ConfigurationError(f"x_in and x_out lengths differ: {x.size} vs {y.size}")
	n_coeffs = order_p * (memory_m + 1)
	usable = x.size - memory_m
	if usable < 3 * n_coeffs:
		raise ConfigurationError(
			f"need at least {3 * n_coeffs} usable rows for P={order_p}, M={memory_m}, got {usable}"
		)

	phi = build_phi(x, order_p, memory_m)
	target = y[memory_m:]
	q, r, perm, norms = _equilibrated_qr(phi)
	rank = _numerical_rank(r)
	if rank < n_coeffs:
		# zero columns stay zero after equilibration and pivot to the tail
		deficient = sorted(column_label(int(i), memory_m) for i in perm[rank:])
		raise IdentifiabilityError(
			f"regression matrix has rank {rank} < {n_coeffs}; unidentifiable columns (p, m): {deficient}",
			deficient,
		)

	solution = linalg.solve_triangular(r, q.conj().T @ target)
	coeffs = np.empty(n_coeffs, dtype=np.complex128)
	coeffs[perm] = solution
	coeffs = coeffs / norms
	return MemoryPolynomial.from_vector(order_p, memory_m, coeffs)


def fit_nmse_db(model, x_in, x_out):
	"""NMSE of the model prediction against measured output, rows n >= M"""
	x = as_samples(x_in)
	y = as_samples(x_out)
	predicted = eval_mpm(model, x)
	return nmse_db(y[model.memory_m:], predicted[model.memory_m:])


def decompose(model, x_in):
	"""Split the output into Δ(x_in(n))·x_in(n) + δ(x_in(n))"""
	x = as_samples(x_in)
	_require_length(x, model.memory_m, model.memory_m + 1)

	magnitude = np.abs(x)
	scaling = np.full(x.shape, model.coeffs[-1, 0], dtype=np.complex128)
	for p in range(model.order_p - 1, 0, -1):
		scaling = scaling * magnitude + model.coeffs[p - 1, 0]

	distortion = np.zeros_like(x)
	for m in range(1, model.memory_m + 1):
		delayed = _delayed(x, m)
		delayed_magnitude = np.abs(delayed)
		gain = np.full(x.shape, model.coeffs[-1, m], dtype=np.complex128)
		for p in range(model.order_p - 1, 0, -1):
			gain = gain * delayed_magnitude + model.coeffs[p - 1, m]
		distortion += gain * delayed
	return Decomposition(scaling, distortion)


def scaling_factor(model, amplitude):
	"""Δ as a function of the current input amplitude: Σ_p c[p,0]·a^(p-1)"""
	amplitude = np.asarray(amplitude, dtype=float)
	gain = np.full(amplitude.shape, model.coeffs[-1, 0], dtype=np.complex128)
	for p in range(model.order_p - 1, 0, -1):
		gain = gain * amplitude + model.coeffs[p - 1, 0]
	return gain


def static_am_am(model, amplitudes):
	"""Steady-state complex output for constant inputs of the given amplitudes"""
	amplitudes = np.asarray(amplitudes, dtype=float)
	branch = model.coeffs.sum(axis=1)
	gain = np.full(amplitudes.shape, branch[-1], dtype=np.complex128)
	for p in range(model.order_p - 1, 0, -1):
		gain = gain * amplitudes + branch[p - 1]
	return gain * amplitudes


def saturation_amplitude(model, max_amplitude=1e3):
	"""
	Input amplitude of the first peak of the static AM/AM curve

	A curve that compresses but never peaks (an odd-order fit turning back up)
	saturates where its slope stops falling; a curve that never compresses
	returns inf.
	"""
	grid = np.concatenate([[0.0], np.geomspace(1e-6, max_amplitude, 20001)])
	output = np.abs(static_am_am(model, grid))
	falling = np.flatnonzero(np.diff(output) < 0)
	if falling.size == 0:
		return _end_of_compression(grid[1:], output[1:])

	i = int(falling[0])
	lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
	result = minimize_scalar(
		lambda a: -abs(static_am_am(model, a)),
		bounds=(lo, hi),
		method="bounded",
		options={"xatol": 1e-12},
	)
	return float(result.x)


def _end_of_compression(grid, output):
	slope = np.gradient(output, grid)
	# slope must have dropped below its small-signal value before it turns
	turning = np.flatnonzero((np.diff(slope) > 0) & (slope[:-1] < (1.0 - 1e-3) * slope[0]))
	return float(grid[turning[0]]) if turning.size else float("inf")


@lru_cache(maxsize=64)
def peak_drive(model):
	# one peak search per (immutable) model object
	return saturation_amplitude(model)


def limit_drive(model, x_in):
	"""Drive with |x_in(n)| held at saturation_amplitude(model), phase kept"""
	x = as_samples(x_in)
	peak = peak_drive(model)
	magnitude = np.abs(x)
	over = magnitude > peak
	if not np.any(over):
		return x_in
	limited = x.copy()
	limited[over] *= peak / magnitude[over]
	return _like(x_in, limited)


def eval_bounded(model, x_in):
	"""Amplifier output with the drive held at saturation; the polynomial is not evaluated past it"""
	return eval_mpm(model, limit_drive(model, x_in))


def with_linear_memory(model, taps):
	"""Copy of model with linear memory taps added: c[1, m] += taps[m-1]"""
	taps = np.asarray(taps, dtype=np.complex128).reshape(-1)
	memory_m = max(model.memory_m, taps.size)
	coeffs = np.zeros((model.order_p, memory_m + 1), dtype=np.complex128)
	coeffs[:, :model.memory_m + 1] = model.coeffs
	coeffs[0, 1:taps.size + 1] += taps
	return MemoryPolynomial(model.order_p, memory_m, coeffs)


def model_to_dict(model):
	"""JSON form {order_p, memory_m, coeffs: [[re, im], ...]} in C_HPA order"""
	return {
		"order_p": model.order_p,
		"memory_m": model.memory_m,
		"coeffs": [[float(c.real), float(c.imag)] for c in model.vector],
	}


def model_from_dict(data):
	"""Inverse of model_to_dict"""
	try:
		pairs = np.asarray(data["coeffs"], dtype=float).reshape(-1, 2)
		return MemoryPolynomial.from_vector(int(data["order_p"]), int(data["memory_m"]), pairs[:, 0] + 1j * pairs[:, 1])
	except (KeyError, TypeError, ValueError) as e:
		if isinstance(e, ConfigurationError):
			raise
		raise ConfigurationError(f"malformed model description: {e}") from e


def save_model(model, filepath):
	"""Write a model as JSON"""
	save_json(model_to_dict(model), filepath)
	return filepath


def load_model(filepath):
	"""Read a model written by save_model"""
	return model_from_dict(load_json(filepath))
