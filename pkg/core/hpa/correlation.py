"""
Input-distortion correlation diagnostics for memory polynomial amplifiers
"""
import numpy as np
from core.signals.waveforms import as_samples
from core.utils.errors import ConfigurationError
from core.hpa.memory_polynomial import decompose


def _products(model, x_in):
	x = as_samples(x_in)
	minimum = 10 * (model.memory_m + 1)
	if x.size < minimum:
		raise ConfigurationError(f"need at least {minimum} samples, got {x.size}")
	distortion = decompose(model, x).distortion
	m = model.memory_m
	return np.conj(x[m:]) * distortion[m:]


def input_distortion_correlation(model, x_in):
	"""Time average of conj(x_in(n))·δ(n) over n >= M"""
	return complex(np.mean(_products(model, x_in)))


def correlation_standard_error(model, x_in):
	"""Standard error of input_distortion_correlation (i.i.d. product assumption)"""
	z = _products(model, x_in)
	spread = np.mean(np.abs(z - z.mean()) ** 2)
	return float(np.sqrt(spread / z.size))


def autocorrelation(x_in, lag):
	"""Sample estimate of E{conj(x(n))·x(n-lag)}"""
	x = as_samples(x_in)
	if lag == 0:
		return complex(np.mean(np.abs(x) ** 2))
	return complex(np.mean(np.conj(x[lag:]) * x[:-lag]))


def predicted_correlation(model, x_in):
	"""
	Factorized estimate Σ_p Σ_(m>=1) c[p,m]·R(m)·E{|x|^(p-1)}

	Treats x(n-m) and |x(n-m)| as independent of x(n); only exact for
	linear memory terms (p = 1). Reported next to the empirical value.
	"""
	x = as_samples(x_in)
	magnitude = np.abs(x)
	moments = [np.mean(magnitude ** (p - 1)) for p in range(1, model.order_p + 1)]
	total = 0j
	for m in range(1, model.memory_m + 1):
		r_m = autocorrelation(x, m)
		for p in range(1, model.order_p + 1):
			total += model.coeffs[p - 1, m] * r_m * moments[p - 1]
	return complex(total)
