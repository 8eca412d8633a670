"""
Shared fixtures for the simulator tests
"""
import numpy as np
import pytest
from config.settings import load_config
from core.hpa.memory_polynomial import MemoryPolynomial
from core.signals.waveforms import gen_ofdm_like

# Small run used by the experiment tests; every other key keeps its default
SMALL_RUN = {
	'WAVEFORM_KIND': 'ofdm',
	'N_SUBCARRIERS': '32',
	'N_SYMBOLS': '16',
	'OVERSAMPLING': '8',
	'FIT_ORDER_P': '5',
	'FIT_MEMORY_M': '2',
	'FIT_SWEEP_ORDERS': '[1, 3, 5]',
	'FIT_SWEEP_MEMORY': '[0, 2]',
	'FIT_N_SYMBOLS': '16',
	'PSD_SEGMENT_LENGTH': '256',
	'CCDF_STEP_DB': '0.5',
	'LINK_SYMBOLS': '128',
	'RE_CHANNEL_DRAWS': '3',
	'RE_GRID_POINTS': '11',
	'RATE_CHANNEL_DRAWS': '2',
	'RATE_SWEEP_START_DBM': '0.0',
	'RATE_SWEEP_STOP_DBM': '10.0',
	'RATE_SWEEP_STEP_DBM': '5.0',
	'CORRELATION_SAMPLES': '2000',
}


def write_config(path, values):
	"""Config file with one KEY=value line per entry"""
	lines = []
	for key, value in values.items():
		value = f"'{value}'" if str(value).startswith('[') else value
		lines.append(f"{key}={value}")
	path.write_text("\n".join(lines) + "\n", encoding='utf-8')
	return str(path)


@pytest.fixture
def rng():
	return np.random.default_rng(1234)


@pytest.fixture
def small_config(tmp_path):
	"""Factory: ExperimentConfig for a small run inside tmp_path"""
	def build(experiment, **overrides):
		values = dict(SMALL_RUN)
		values.update({k.upper(): v for k, v in overrides.items()})
		config_file = write_config(tmp_path / f"{experiment}.env", values)
		return load_config(config_file, output_dir=str(tmp_path / "out"), experiment=experiment)
	return build


@pytest.fixture
def cubic_model():
	"""Memoryless y = x - 0.1·x·|x|²; AM/AM peak at |x| = sqrt(10/3)"""
	return MemoryPolynomial(3, 0, [[1.0], [0.0], [-0.1]])


@pytest.fixture
def memory_model():
	"""Mildly nonlinear model with two memory taps"""
	return MemoryPolynomial(3, 2, [
		[1.0 + 0.05j, 0.12 - 0.03j, -0.04 + 0.01j],
		[0.0, 0.0, 0.0],
		[-0.06 + 0.02j, 0.01j, 0.005],
	])


@pytest.fixture
def ofdm_signal():
	return gen_ofdm_like(32, 8, "QPSK", 4, seed=11)
