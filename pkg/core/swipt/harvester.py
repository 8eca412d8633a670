"""
Piecewise-linear RF energy harvester and power unit conversions
"""
from dataclasses import dataclass
import numpy as np
from core.utils.errors import ConfigurationError


def dbm_to_w(dbm):
	"""dBm to watts"""
	watts = 10.0 ** (np.asarray(dbm, dtype=float) / 10.0) / 1000.0
	return float(watts) if watts.ndim == 0 else watts


def w_to_dbm(watts):
	"""Watts to dBm"""
	dbm = 10.0 * np.log10(np.asarray(watts, dtype=float) * 1000.0)
	return float(dbm) if dbm.ndim == 0 else dbm


@dataclass(frozen=True)
class EhModel:
	"""Sensitivity p_h_l_w, saturation p_h_u_w (input powers, W) and conversion efficiency eta"""
	p_h_l_w: float
	p_h_u_w: float
	eta: float

	def __post_init__(self):
		if not self.p_h_l_w >= 0:
			raise ConfigurationError(f"p_h_l_w must be non-negative, got {self.p_h_l_w}")
		if not self.p_h_l_w < self.p_h_u_w:
			raise ConfigurationError(f"p_h_l_w ({self.p_h_l_w}) must be below p_h_u_w ({self.p_h_u_w})")
		if not 0.0 <= self.eta <= 1.0:
			raise ConfigurationError(f"eta must be in [0, 1], got {self.eta}")

	@classmethod
	def from_dbm(cls, p_h_l_dbm, p_h_u_dbm, eta):
		return cls(dbm_to_w(p_h_l_dbm), dbm_to_w(p_h_u_dbm), eta)

	@property
	def max_output_w(self):
		return self.eta * self.p_h_u_w


def harvest(eh, xi_w):
	"""
	Harvested power for input power xi_w

	0 below p_h_l, eta·xi on [p_h_l, p_h_u], eta·p_h_u above. The knee at
	p_h_l belongs to the harvesting branch.
	"""
	xi = np.asarray(xi_w, dtype=float)
	if np.any(xi < 0) or np.any(np.isnan(xi)):
		raise ConfigurationError("harvester input power must be non-negative")
	out = np.where(xi < eh.p_h_l_w, 0.0, eh.eta * np.minimum(xi, eh.p_h_u_w))
	return float(out) if out.ndim == 0 else out
