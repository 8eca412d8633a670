"""
HPA-aware MRC/MRT beamforming, per-antenna amplifier chains and post-combining SNR
"""
from dataclasses import dataclass
import numpy as np
from core.dpd.predistorter import DpdConfig, dpd_invert
from core.hpa.memory_polynomial import decompose, limit_drive, peak_drive, scaling_factor
from core.signals.waveforms import as_samples
from core.swipt.harvester import dbm_to_w
from core.utils.errors import ConfigurationError, NonInvertibleOperatingPointError


# Total transmit power at which each of the N_T amplifiers sees unit mean input power
# when the weights are spread evenly (P_ref / N_T per branch)
DRIVE_REFERENCE_DBM = 14.0
DRIVE_REFERENCE_W = dbm_to_w(DRIVE_REFERENCE_DBM)


@dataclass(frozen=True)
class LinkNoise:
	"""Antenna noise σ_v² and RF-to-baseband conversion noise σ_a², both in W"""
	sigma_v_sq: float
	sigma_a_sq: float

	def __post_init__(self):
		if not self.sigma_v_sq > 0 or not self.sigma_a_sq > 0:
			raise ConfigurationError(
				f"noise powers must be positive, got sigma_v_sq={self.sigma_v_sq}, sigma_a_sq={self.sigma_a_sq}"
			)

	@classmethod
	def from_dbm(cls, sigma_v_dbm, sigma_a_dbm):
		return cls(dbm_to_w(sigma_v_dbm), dbm_to_w(sigma_a_dbm))


@dataclass(frozen=True, eq=False)
class BeamformingSolution:
	"""Receive combiner, compensated transmit weights and the operating-point gains"""
	w_r: np.ndarray
	w_t: np.ndarray
	lambda_max: float
	delta_vec: np.ndarray
	mrt: np.ndarray
	iterations: int = 0

	def __post_init__(self):
		for name in ("w_r", "w_t", "delta_vec", "mrt"):
			value = np.array(getattr(self, name), dtype=np.complex128).reshape(-1)
			value.setflags(write=False)
			object.__setattr__(self, name, value)

	@property
	def effective_weights(self):
		"""Δ_i·w_t,i: per-antenna weights seen after the amplifiers"""
		return self.delta_vec * self.w_t


@dataclass(frozen=True, eq=False)
class AntennaChainOutput:
	"""
	Per-antenna amplifier outputs, rows = antennas, in √W units

	distortion is the memory term δ of the raw amplifier (zeta=1) or the
	residual output - desired after predistortion (zeta=0); clipping is the
	part of that residual the predistorter could not cancel on clipped samples
	(all zero for zeta=1).
	"""
	output: np.ndarray
	distortion: np.ndarray
	clipping: np.ndarray
	reports: tuple = ()


@dataclass(frozen=True, eq=False)
class LinkEvaluation:
	"""Post-combining figures of one simulated link, powers in W"""
	gamma: float
	distortion_power_w: float
	clipping_power_w: float
	w_r_norm_sq: float
	chain: AntennaChainOutput


def mrt_direction(channel, w_r):
	"""Hᴴ w_r / ‖Hᴴ w_r‖"""
	v = channel.gain_matrix.conj().T @ np.asarray(w_r, dtype=np.complex128)
	norm = np.linalg.norm(v)
	if norm == 0:
		raise ConfigurationError("w_r is orthogonal to the channel; MRT direction undefined")
	return v / norm


def drive_scale(n_antennas, symbol_power_w, drive_reference_w=DRIVE_REFERENCE_W):
	"""HPA-unit amplitude of a unit-norm weight at symbol power P_t: √(N_T·P_t / P_ref)"""
	return np.sqrt(n_antennas * symbol_power_w / drive_reference_w)


def operating_point_gains(model, w_t, scale, x_in):
	"""
	Time-averaged gain of each antenna's amplifier at drive scale·w_t,i·x(n)

	The drive is held at the saturation amplitude a_pk, so above it the
	instantaneous gain is Δ(a_pk)·a_pk / a.
	"""
	magnitude = np.abs(as_samples(x_in))
	peak = peak_drive(model)
	gains = []
	for w in w_t:
		amplitude = scale * abs(w) * magnitude
		held = np.minimum(amplitude, peak)
		ratio = np.divide(held, amplitude, out=np.ones_like(amplitude), where=amplitude > 0)
		gains.append(np.mean(scaling_factor(model, held) * ratio))
	return np.array(gains, dtype=np.complex128)


def _check_invertible(delta_vec):
	vanishing = np.flatnonzero(np.abs(delta_vec) <= np.finfo(float).tiny)
	if vanishing.size:
		raise NonInvertibleOperatingPointError(
			f"scaling factor vanishes at the operating point of antenna(s) {vanishing.tolist()}"
		)


def _unit(v):
	return v / np.linalg.norm(v)


def hpa_aware_weights(h, w_r, model, symbol_power_w, x, drive_reference_w=DRIVE_REFERENCE_W,
					  tolerance=1e-9, max_iterations=20):
	"""
	Unit-norm MRT weights Hadamard-divided by the per-antenna amplifier gain

	The gain depends on the drive level, which depends on the weights; iterate
	w_t = (mrt ⊘ Δ(w_t)) / ‖mrt ⊘ Δ(w_t)‖ from pure MRT until w_t moves by at
	most tolerance. Antenna i is driven by drive_scale(N_T, P_t)·w_t,i·x(n)
	in HPA units.

	Raises:
		NonInvertibleOperatingPointError: some Δ_i is zero
	"""
	if not symbol_power_w > 0 or not drive_reference_w > 0:
		raise ConfigurationError("symbol_power_w and drive_reference_w must be positive")
	w_r = np.asarray(w_r, dtype=np.complex128)
	mrt = mrt_direction(h, w_r)
	scale = drive_scale(h.n_t, symbol_power_w, drive_reference_w)
	lambda_max = float(np.real(np.vdot(w_r, h.gram @ w_r)) / np.real(np.vdot(w_r, w_r)))

	w_t = mrt.copy()
	iterations = 0
	for iterations in range(1, max_iterations + 1):
		delta_vec = operating_point_gains(model, w_t, scale, x)
		_check_invertible(delta_vec)
		updated = _unit(mrt / delta_vec)
		change = np.max(np.abs(updated - w_t))
		w_t = updated
		if change <= tolerance:
			break

	delta_vec = operating_point_gains(model, w_t, scale, x)
	_check_invertible(delta_vec)
	return BeamformingSolution(w_r, w_t, lambda_max, delta_vec, mrt, iterations)


def antenna_signals(sol, x, symbol_power_w, zeta):
	"""
	Per-antenna signals in √W: the HPA drive √P_t·w_t·x without predistortion (zeta=1),
	or the desired HPA output √P_t·mrt·x handed to the predistorter (zeta=0)
	"""
	weights = sol.w_t if zeta == 1 else sol.mrt
	return np.sqrt(symbol_power_w) * np.outer(weights, as_samples(x))


def uncancelled_distortion(parts, drive, target, clipped):
	"""
	(1 - κ)·δ on clipped samples, zero elsewhere

	κ = Δ(u)·u / (t - δ) is the gain the amplifier actually applied to the
	wanted signal t - δ, so output - κ·t = (1 - κ)·δ.
	"""
	wanted = target - parts.distortion
	delivered = parts.scaling * drive
	kappa = np.divide(delivered, wanted, out=np.zeros_like(wanted), where=wanted != 0)
	return np.where(clipped, (1.0 - kappa) * parts.distortion, 0.0)


def simulate_antenna_chain(model, signals, drive_reference_w=DRIVE_REFERENCE_W, zeta=1, dpd_cfg=None):
	"""
	Run every antenna row through its amplifier (zeta=1) or predistorter + amplifier (zeta=0)

	Each HPA maps √(P_ref / N_T) in √W to unit input amplitude, N_T being the
	number of rows, and holds its drive at the saturation amplitude.

	Returns:
		AntennaChainOutput
	"""
	if zeta not in (0, 1):
		raise ConfigurationError(f"zeta must be 0 or 1, got {zeta}")
	signals = np.atleast_2d(np.asarray(signals, dtype=np.complex128))
	reference = np.sqrt(drive_reference_w / signals.shape[0])
	output = np.empty_like(signals)
	distortion = np.empty_like(signals)
	clipping = np.zeros_like(signals)
	reports = []

	for i, row in enumerate(signals / reference):
		if zeta == 1:
			drive = limit_drive(model, row)
			parts = decompose(model, drive)
			output[i] = reference * parts.recompose(drive)
			distortion[i] = reference * parts.distortion
		else:
			x_dpd, report = dpd_invert(model, row, dpd_cfg or DpdConfig())
			drive = limit_drive(model, x_dpd)
			parts = decompose(model, drive)
			output[i] = reference * parts.recompose(drive)
			distortion[i] = output[i] - signals[i]
			clipping[i] = reference * uncancelled_distortion(parts, drive, row, report.clipped)
			reports.append(report)

	return AntennaChainOutput(output, distortion, clipping, tuple(reports))


def combine(h, sol, antenna_rows):
	"""w_rᴴ H s(n) for per-antenna rows s"""
	return (sol.w_r.conj() @ h.gain_matrix) @ np.atleast_2d(antenna_rows)


def combined_power(h, sol, antenna_rows):
	"""Time-averaged |w_rᴴ H s(n)|²"""
	return float(np.mean(np.abs(combine(h, sol, antenna_rows)) ** 2))


def combined_distortion_power(h, sol, chain):
	"""Time-averaged |w_rᴴ H δ(n)|²"""
	return combined_power(h, sol, chain.distortion)


def evaluate_link(h, sol, model, x, symbol_power_w, noise, zeta, dpd_cfg=None,
				  drive_reference_w=DRIVE_REFERENCE_W):
	"""
	Simulate the antenna chains and measure the post-combining powers

	gamma = P_t·Λ·‖w_r‖² / (ζ·D + D_clip + σ_v²·‖w_r‖²). D is the memory
	distortion (zeta=1) or the full predistortion residual (zeta=0, reported
	only); D_clip is the uncancelled distortion of clipped predistorter samples.
	"""
	signals = antenna_signals(sol, x, symbol_power_w, zeta)
	chain = simulate_antenna_chain(model, signals, drive_reference_w, zeta, dpd_cfg)
	distortion_power = combined_distortion_power(h, sol, chain)
	clipping_power = combined_power(h, sol, chain.clipping)
	norm_sq = float(np.real(np.vdot(sol.w_r, sol.w_r)))
	signal_power = symbol_power_w * sol.lambda_max * norm_sq
	gamma = signal_power / (zeta * distortion_power + clipping_power + noise.sigma_v_sq * norm_sq)
	return LinkEvaluation(
		gamma=gamma,
		distortion_power_w=distortion_power,
		clipping_power_w=clipping_power,
		w_r_norm_sq=norm_sq,
		chain=chain,
	)


def link_snr(h, sol, model, x, symbol_power_w, noise, zeta, dpd_cfg=None, drive_reference_w=DRIVE_REFERENCE_W):
	"""
	Post-combining SNR with D measured on the simulated chain

	Returns:
		(gamma, distortion_power_w)
	"""
	link = evaluate_link(h, sol, model, x, symbol_power_w, noise, zeta, dpd_cfg, drive_reference_w)
	return link.gamma, link.distortion_power_w
