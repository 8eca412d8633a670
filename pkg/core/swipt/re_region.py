"""
Rate-energy regions of time-switching and power-splitting SWIPT receivers
"""
from dataclasses import dataclass
import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from core.mimo.beamforming import DRIVE_REFERENCE_W, combined_power, evaluate_link, hpa_aware_weights
from core.mimo.channel import principal_eig
from core.utils.errors import ConfigurationError, UndefinedStatisticError
from core.swipt.harvester import harvest


ARCHITECTURES = ("TS", "PS")


@dataclass(frozen=True)
class RePoint:
	rate_bps_hz: float
	energy_w: float
	split: float

	def __post_init__(self):
		if self.rate_bps_hz < 0 or self.energy_w < 0:
			raise ConfigurationError(f"rate and energy must be non-negative, got {self.rate_bps_hz}, {self.energy_w}")
		if not 0.0 <= self.split <= 1.0:
			raise ConfigurationError(f"split must be in [0, 1], got {self.split}")


@dataclass(frozen=True)
class ReRegion:
	"""Ergodic (rate, energy) frontier of one architecture and one zeta, ascending split"""
	architecture: str
	zeta: int
	points: tuple

	def __post_init__(self):
		if self.architecture not in ARCHITECTURES:
			raise ConfigurationError(f"architecture must be one of {ARCHITECTURES}, got {self.architecture!r}")
		object.__setattr__(self, "points", tuple(self.points))

	@property
	def splits(self):
		return np.array([p.split for p in self.points])

	@property
	def rates(self):
		return np.array([p.rate_bps_hz for p in self.points])

	@property
	def energies(self):
		return np.array([p.energy_w for p in self.points])

	@property
	def area(self):
		"""Trapezoidal area under the energy-versus-rate frontier"""
		return float(abs(trapezoid(self.energies, self.rates)))

	def to_frame(self):
		return pd.DataFrame({
			"split": self.splits,
			"rate_bps_hz": self.rates,
			"energy_w": self.energies,
		})


@dataclass(frozen=True)
class LinkBudget:
	"""
	One channel draw evaluated at one zeta: Λ_max, measured distortion D, EH input ξ
	and the uncancelled distortion D_clip of clipped predistorter samples
	"""
	zeta: int
	symbol_power_w: float
	lambda_max: float
	w_r_norm_sq: float
	distortion_power_w: float
	xi_w: float
	clipping_power_w: float = 0.0

	@property
	def signal_power_w(self):
		return self.symbol_power_w * self.lambda_max * self.w_r_norm_sq

	def gamma(self, noise):
		"""Post-combining SNR; D counts only when zeta = 1, D_clip always"""
		return self.signal_power_w / (self.impairment_w + noise.sigma_v_sq * self.w_r_norm_sq)

	@property
	def impairment_w(self):
		return self.zeta * self.distortion_power_w + self.clipping_power_w


def eh_input_power(h, sol, chain, sigma_v_sq):
	"""ξ = mean|w_rᴴ H y(n)|² + σ_v²·‖w_r‖², y being the simulated amplifier outputs"""
	if sigma_v_sq < 0:
		raise ConfigurationError(f"sigma_v_sq must be non-negative, got {sigma_v_sq}")
	norm_sq = float(np.real(np.vdot(sol.w_r, sol.w_r)))
	return combined_power(h, sol, chain.output) + sigma_v_sq * norm_sq


def link_budget(channel, model, x, symbol_power_w, noise, zeta, dpd_cfg=None, drive_reference_w=DRIVE_REFERENCE_W):
	"""Beamform, simulate the chain and collect what the TS/PS formulas need for one draw"""
	lambda_max, w_r = principal_eig(channel)
	sol = hpa_aware_weights(channel, w_r, model, symbol_power_w, x, drive_reference_w)
	link = evaluate_link(channel, sol, model, x, symbol_power_w, noise, zeta, dpd_cfg, drive_reference_w)
	xi = eh_input_power(channel, sol, link.chain, noise.sigma_v_sq)
	return LinkBudget(zeta, symbol_power_w, sol.lambda_max, link.w_r_norm_sq, link.distortion_power_w, xi,
					  link.clipping_power_w)


def split_rate(architecture, split, budget, noise):
	"""Achievable rate (bit/s/Hz) of one draw at split τ (TS) or ρ (PS)"""
	signal = budget.signal_power_w
	distortion = budget.impairment_w
	if architecture == "TS":
		return (1.0 - split) * np.log2(1.0 + signal / (distortion + noise.sigma_v_sq + noise.sigma_a_sq))
	if architecture == "PS":
		kept = 1.0 - split
		return np.log2(1.0 + kept * signal / (kept * (distortion + noise.sigma_v_sq) + noise.sigma_a_sq))
	raise ConfigurationError(f"architecture must be one of {ARCHITECTURES}, got {architecture!r}")


def split_energy(split, budget, eh):
	"""Harvested power of one draw: split·p_h(ξ) for both architectures"""
	return split * harvest(eh, budget.xi_w)


def region_from_budgets(architecture, grid_points, budgets, noise, eh):
	"""Average rate and energy over the draws at every split of a uniform grid"""
	if int(grid_points) != grid_points or grid_points < 2:
		raise ConfigurationError(f"grid_points must be an integer >= 2, got {grid_points}")
	if not budgets:
		raise ConfigurationError("at least one channel draw is required")
	zetas = {b.zeta for b in budgets}
	if len(zetas) != 1:
		raise ConfigurationError(f"all budgets must share one zeta, got {sorted(zetas)}")

	points = []
	for split in np.linspace(0.0, 1.0, int(grid_points)):
		rates = np.array([split_rate(architecture, split, b, noise) for b in budgets])
		energies = np.array([split_energy(split, b, eh) for b in budgets])
		points.append(RePoint(max(float(np.mean(rates)), 0.0), float(np.mean(energies)), float(split)))
	return ReRegion(architecture, zetas.pop(), tuple(points))


def re_region(arch, zeta, grid_points, channels, model, x, symbol_power_w, noise, eh, dpd_cfg=None,
			  drive_reference_w=DRIVE_REFERENCE_W):
	"""Ergodic RE region over a channel set (draws evaluated in the given order)"""
	budgets = [link_budget(c, model, x, symbol_power_w, noise, zeta, dpd_cfg, drive_reference_w) for c in channels]
	return region_from_budgets(arch, grid_points, budgets, noise, eh)


def _check_comparable(with_dpd, without_dpd):
	if with_dpd.architecture != without_dpd.architecture:
		raise ConfigurationError(
			f"architectures differ: {with_dpd.architecture} vs {without_dpd.architecture}"
		)
	if not np.array_equal(with_dpd.splits, without_dpd.splits):
		raise ConfigurationError("regions were computed on different split grids")


def region_gain(with_dpd, without_dpd):
	"""Fractional area gain (area_with - area_without) / area_without"""
	_check_comparable(with_dpd, without_dpd)
	baseline = without_dpd.area
	if baseline == 0:
		raise UndefinedStatisticError("baseline region has zero area")
	return (with_dpd.area - baseline) / baseline


def _relative(new, old):
	return None if old == 0 else float((new - old) / old)


def endpoint_gains(with_dpd, without_dpd):
	"""
	Relative gains at the pure-EH end (split = 1, energy) and the pure-ID end (split = 0, rate)

	A gain is None when its baseline is zero.
	"""
	_check_comparable(with_dpd, without_dpd)
	return {
		"pure_eh_gain": _relative(with_dpd.energies[-1], without_dpd.energies[-1]),
		"pure_id_gain": _relative(with_dpd.rates[0], without_dpd.rates[0]),
	}
