"""
Rayleigh MIMO channel with deterministic pathloss and its dominant eigenpair
"""
import warnings
from dataclasses import dataclass
import numpy as np
from core.experiments.seeding import derive_seed
from core.utils.errors import ConfigurationError, DegenerateChannelWarning, UndefinedStatisticError
from core.utils.file_ops import save_json, load_json


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
	"""N_R x N_T small-scale fading matrix h and the pathloss applied as √pathloss amplitude"""
	h: np.ndarray
	pathloss_linear: float = 1.0

	def __post_init__(self):
		h = np.array(self.h, dtype=np.complex128)
		if h.ndim != 2 or h.size == 0:
			raise ConfigurationError(f"h must be a non-empty N_R x N_T matrix, got shape {h.shape}")
		pathloss = float(self.pathloss_linear)
		if not np.isfinite(pathloss) or pathloss <= 0:
			raise ConfigurationError(f"pathloss_linear must be positive, got {self.pathloss_linear}")
		h.setflags(write=False)
		object.__setattr__(self, "h", h)
		object.__setattr__(self, "pathloss_linear", pathloss)

	@property
	def n_r(self):
		return self.h.shape[0]

	@property
	def n_t(self):
		return self.h.shape[1]

	@property
	def gain_matrix(self):
		"""H with pathloss folded in"""
		return np.sqrt(self.pathloss_linear) * self.h

	@property
	def gram(self):
		g = self.gain_matrix
		return g @ g.conj().T


def gen_channel(n_t, n_r, distance_m, pathloss_exponent, seed):
	"""i.i.d. CN(0, 1) entries, pathloss distance^(-exponent)"""
	for name, value in (("n_t", n_t), ("n_r", n_r)):
		if int(value) != value or value < 1:
			raise ConfigurationError(f"{name} must be a positive integer, got {value}")
	if not distance_m > 0 or not pathloss_exponent > 0:
		raise ConfigurationError(
			f"distance_m and pathloss_exponent must be positive, got {distance_m}, {pathloss_exponent}"
		)
	rng = np.random.default_rng(seed)
	shape = (int(n_r), int(n_t))
	h = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
	return ChannelMatrix(h, float(distance_m) ** (-float(pathloss_exponent)))


def gen_channels(count, n_t, n_r, distance_m, pathloss_exponent, base_seed, stream="channel"):
	"""Independent draws, draw i seeded with derive_seed(base_seed, stream, i)"""
	return [
		gen_channel(n_t, n_r, distance_m, pathloss_exponent, derive_seed(base_seed, stream, i))
		for i in range(int(count))
	]


def _phase_normalize(w):
	"""First nonzero component made real positive"""
	magnitudes = np.abs(w)
	index = int(np.argmax(magnitudes > 1e-12 * magnitudes.max()))
	return w * (np.conj(w[index]) / magnitudes[index])


def principal_eig(channel, tol=1e-12, max_iterations=100_000, gap_threshold=1e-10):
	"""
	Dominant eigenpair of H Hᴴ by power iteration from the normalized all-ones vector

	Stops when the Rayleigh quotient changes by at most tol (relative) and the
	eigen-residual is at most 1e-8·λ. Warns with DegenerateChannelWarning when the
	relative gap to the second eigenvalue is below gap_threshold.

	Returns:
		(lambda_max, w_r) with ‖w_r‖ = 1
	"""
	gram = channel.gram
	n_r = gram.shape[0]
	spectrum = np.linalg.eigvalsh(gram)
	if not spectrum[-1] > 0:
		raise UndefinedStatisticError("channel carries no energy (H Hᴴ = 0)")
	if n_r > 1 and (spectrum[-1] - spectrum[-2]) < gap_threshold * spectrum[-1]:
		warnings.warn(
			f"eigengap {spectrum[-1] - spectrum[-2]:.3e} below {gap_threshold:g}·λ_max; "
			"dominant eigenvector is not unique",
			DegenerateChannelWarning,
			stacklevel=2,
		)

	w = np.ones(n_r, dtype=np.complex128) / np.sqrt(n_r)
	rayleigh = float(np.real(np.vdot(w, gram @ w)))
	for _ in range(max_iterations):
		v = gram @ w
		norm = np.linalg.norm(v)
		if norm == 0:
			# start vector orthogonal to the range; restart on a basis vector
			w = np.zeros(n_r, dtype=np.complex128)
			w[int(np.argmax(np.diag(gram).real))] = 1.0
			continue
		w = v / norm
		updated = float(np.real(np.vdot(w, gram @ w)))
		residual = np.linalg.norm(gram @ w - updated * w)
		settled = abs(updated - rayleigh) <= tol * updated
		rayleigh = updated
		if settled and residual <= 1e-8 * updated:
			break
	else:
		# slow convergence on a nearly degenerate spectrum
		_, vectors = np.linalg.eigh(gram)
		w = vectors[:, -1]
		rayleigh = float(np.real(np.vdot(w, gram @ w)))

	w = _phase_normalize(w / np.linalg.norm(w))
	return rayleigh, w


def channel_to_dict(channel):
	"""JSON form with row-major [re, im] pairs"""
	return {
		"n_r": channel.n_r,
		"n_t": channel.n_t,
		"pathloss_linear": channel.pathloss_linear,
		"h": [[[float(v.real), float(v.imag)] for v in row] for row in channel.h],
	}


def channel_from_dict(data):
	"""Inverse of channel_to_dict"""
	try:
		pairs = np.asarray(data["h"], dtype=float).reshape(int(data["n_r"]), int(data["n_t"]), 2)
		return ChannelMatrix(pairs[..., 0] + 1j * pairs[..., 1], float(data["pathloss_linear"]))
	except (KeyError, TypeError, ValueError) as e:
		if isinstance(e, ConfigurationError):
			raise
		raise ConfigurationError(f"malformed channel description: {e}") from e


def save_channels(channels, filepath):
	"""Write a list of channel draws as JSON"""
	save_json([channel_to_dict(c) for c in channels], filepath)
	return filepath


def load_channels(filepath):
	return [channel_from_dict(d) for d in load_json(filepath)]
