"""
Configuration settings - experiment parameters loaded from a dotenv-style config file
"""
import os
import json
from dataclasses import dataclass, asdict
import numpy as np
from dotenv import dotenv_values
from core.dpd.predistorter import DpdConfig
from core.mimo.beamforming import LinkNoise
from core.swipt.harvester import EhModel, dbm_to_w
from core.signals.waveforms import CONSTELLATIONS, multichannel_span_hz
from core.utils.errors import ConfigurationError

CONFIG_DIR = os.path.dirname(os.path.abspath(__file__))
DEFAULT_CONFIG_FILE = os.path.join(CONFIG_DIR, 'defaults.env')

EXPERIMENTS = ('fit', 'psd', 'ccdf', 'rate_sweep', 're_region', 'correlation')
WAVEFORM_KINDS = ('multichannel', 'ofdm', 'multisine')

# Every accepted key with its default (string form, as written in a config file)
DEFAULTS = {
	# [run]
	'EXPERIMENT': 'fit',
	'SEED': '20240611',
	'OUTPUT_DIR': 'outputs',
	# [waveform]
	'WAVEFORM_KIND': 'multichannel',
	'N_CHANNELS': '4',
	'N_SUBCARRIERS': '64',
	'N_SYMBOLS': '64',
	'CONSTELLATION': 'QPSK',
	'OVERSAMPLING': '16',
	'SUBCARRIER_SPACING_HZ': '15000',
	'CHANNEL_SPACING_HZ': '',
	'N_TONES': '8',
	'TONE_SPACING_HZ': '100000',
	'N_SAMPLES': '65536',
	'SAMPLE_RATE_HZ': '12800000',
	'MULTISINE_PHASES': 'random(7)',
	# [hpa]
	'HPA_MODEL_FILE': '',
	'REFERENCE_TAPS': '[1.0, 0.15, -0.05, 0.01]',
	'REFERENCE_SMOOTHNESS': '2.0',
	'REFERENCE_BACKOFF_DB': '3.0',
	'REFERENCE_GAIN': '1.0',
	'FIT_ORDER_P': '7',
	'FIT_MEMORY_M': '3',
	'FIT_SWEEP_ORDERS': '[1, 3, 5, 7]',
	'FIT_SWEEP_MEMORY': '[0, 1, 2, 3]',
	'FIT_N_SYMBOLS': '64',
	'FIT_OVERSAMPLING': '4',
	'LINK_MEMORY_TAPS': '[1e-4]',
	# [drive]
	'DRIVE_BACKOFF_DB': '9.0',
	# [dpd]
	'DPD_TOLERANCE': '1e-8',
	'DPD_MAX_ITERATIONS': '50',
	'DPD_SATURATION_GUARD': '1.0',
	# [spectrum]
	'PSD_SEGMENT_LENGTH': '1024',
	'PSD_OVERLAP_FRACTION': '0.5',
	'ACPR_GUARD_FRACTION': '0.1',
	'CCDF_MIN_DB': '0.0',
	'CCDF_MAX_DB': '12.0',
	'CCDF_STEP_DB': '0.1',
	'PAPR_PROBABILITY': '1e-3',
	# [link]
	'N_T': '3',
	'N_R': '2',
	'DISTANCE_M': '12.0',
	'PATHLOSS_EXPONENT': '2.6',
	'TRANSMIT_POWER_DBM': '14.0',
	'DRIVE_REFERENCE_DBM': '14.0',
	'SIGMA_V_DBM': '-70.0',
	'SIGMA_A_DBM': '-50.0',
	'EH_P_L_DBM': '-10.0',
	'EH_P_U_DBM': '2.0',
	'EH_ETA': '0.24',
	'LINK_SYMBOLS': '1024',
	'RE_CHANNEL_DRAWS': '500',
	'RE_GRID_POINTS': '101',
	'RATE_CHANNEL_DRAWS': '50',
	'RATE_SWEEP_START_DBM': '0.0',
	'RATE_SWEEP_STOP_DBM': '30.0',
	'RATE_SWEEP_STEP_DBM': '2.0',
	# [correlation]
	'CORRELATION_SAMPLES': '100000',
	'CORRELATION_FIR': '[1.0, 0.8, 0.5, 0.2]',
	'CORRELATION_MEMORY_COEFF': '0.3',
}


@dataclass(frozen=True)
class WaveformConfig:
	kind: str
	n_channels: int
	n_subcarriers: int
	n_symbols: int
	constellation: str
	oversampling: int
	subcarrier_spacing_hz: float
	channel_spacing_hz: float
	n_tones: int
	tone_spacing_hz: float
	n_samples: int
	sample_rate_hz: float
	phases: str

	@property
	def occupied_bandwidth_hz(self):
		"""Width of the band the waveform occupies"""
		if self.kind == 'multichannel':
			return multichannel_span_hz(self.n_channels, self.n_subcarriers, self.subcarrier_spacing_hz,
										self.channel_spacing_hz)
		if self.kind == 'ofdm':
			return self.n_subcarriers * self.subcarrier_spacing_hz
		return self.n_tones * self.tone_spacing_hz


@dataclass(frozen=True)
class HpaConfig:
	model_file: str
	reference_taps: tuple
	reference_smoothness: float
	reference_backoff_db: float
	reference_gain: float
	fit_order_p: int
	fit_memory_m: int
	fit_sweep_orders: tuple
	fit_sweep_memory: tuple
	fit_n_symbols: int
	fit_oversampling: int
	link_memory_taps: tuple


@dataclass(frozen=True)
class DriveConfig:
	backoff_db: float


@dataclass(frozen=True)
class SpectrumConfig:
	segment_length: int
	overlap_fraction: float
	acpr_guard_fraction: float
	ccdf_min_db: float
	ccdf_max_db: float
	ccdf_step_db: float
	papr_probability: float

	def thresholds_db(self):
		count = int(round((self.ccdf_max_db - self.ccdf_min_db) / self.ccdf_step_db)) + 1
		return np.round(self.ccdf_min_db + self.ccdf_step_db * np.arange(count), 10)


@dataclass(frozen=True)
class LinkConfig:
	n_t: int
	n_r: int
	distance_m: float
	pathloss_exponent: float
	transmit_power_dbm: float
	drive_reference_dbm: float
	sigma_v_dbm: float
	sigma_a_dbm: float
	eh_p_l_dbm: float
	eh_p_u_dbm: float
	eh_eta: float
	link_symbols: int
	re_channel_draws: int
	re_grid_points: int
	rate_channel_draws: int
	rate_sweep_start_dbm: float
	rate_sweep_stop_dbm: float
	rate_sweep_step_dbm: float

	@property
	def transmit_power_w(self):
		return dbm_to_w(self.transmit_power_dbm)

	@property
	def drive_reference_w(self):
		return dbm_to_w(self.drive_reference_dbm)

	def noise(self):
		return LinkNoise.from_dbm(self.sigma_v_dbm, self.sigma_a_dbm)

	def eh_model(self):
		return EhModel.from_dbm(self.eh_p_l_dbm, self.eh_p_u_dbm, self.eh_eta)

	def sweep_dbm(self):
		count = int(np.floor((self.rate_sweep_stop_dbm - self.rate_sweep_start_dbm) / self.rate_sweep_step_dbm + 1e-9)) + 1
		return np.round(self.rate_sweep_start_dbm + self.rate_sweep_step_dbm * np.arange(count), 10)


@dataclass(frozen=True)
class CorrelationConfig:
	samples: int
	fir: tuple
	memory_coeff: float


@dataclass(frozen=True)
class ExperimentConfig:
	"""Everything a run depends on: the config file, the defaults and CLI overrides"""
	experiment: str
	seed: int
	output_dir: str
	waveform: WaveformConfig
	hpa: HpaConfig
	drive: DriveConfig
	dpd: DpdConfig
	spectrum: SpectrumConfig
	link: LinkConfig
	correlation: CorrelationConfig
	source: str = ''

	def as_dict(self):
		"""JSON-serializable form written into metadata sidecars"""
		return json.loads(json.dumps(asdict(self)))


def _as_int(values, key, minimum=None):
	raw = values[key]
	try:
		value = int(str(raw).strip())
	except ValueError:
		raise ConfigurationError(f"{key}: expected an integer, got {raw!r}") from None
	if minimum is not None and value < minimum:
		raise ConfigurationError(f"{key}: must be >= {minimum}, got {value}")
	return value


def _as_float(values, key, positive=False):
	raw = values[key]
	try:
		value = float(str(raw).strip())
	except ValueError:
		raise ConfigurationError(f"{key}: expected a number, got {raw!r}") from None
	if not np.isfinite(value):
		raise ConfigurationError(f"{key}: must be finite, got {raw!r}")
	if positive and value <= 0:
		raise ConfigurationError(f"{key}: must be positive, got {value}")
	return value


def _as_list(values, key, item_type=float):
	raw = values[key]
	try:
		items = json.loads(raw)
	except json.JSONDecodeError as e:
		raise ConfigurationError(f"{key}: malformed JSON list {raw!r}: {e}") from None
	if not isinstance(items, list) or not items:
		raise ConfigurationError(f"{key}: expected a non-empty JSON list, got {raw!r}")
	try:
		return tuple(item_type(v) for v in items)
	except (TypeError, ValueError):
		raise ConfigurationError(f"{key}: list items must be {item_type.__name__}, got {raw!r}") from None


def _as_seed(values):
	seed = _as_int(values, 'SEED', 0)
	if seed >= 2 ** 64:
		raise ConfigurationError(f"SEED: must fit in 64 bits, got {seed}")
	return seed


def _as_choice(values, key, choices):
	value = str(values[key]).strip()
	if value not in choices:
		raise ConfigurationError(f"{key}: must be one of {list(choices)}, got {value!r}")
	return value


def read_config_file(path):
	"""Raw key/value pairs of a config file (never injected into os.environ)"""
	if not os.path.exists(path):
		raise ConfigurationError(f"config file not found: {path}")
	raw = dotenv_values(path)
	unknown = sorted(set(raw) - set(DEFAULTS))
	if unknown:
		raise ConfigurationError(f"unknown config keys in {path}: {unknown}")
	return {k: ('' if v is None else v) for k, v in raw.items()}


def load_config(path=None, seed=None, output_dir=None, experiment=None):
	"""
	Build an ExperimentConfig from DEFAULTS, an optional config file and CLI overrides

	Raises:
		ConfigurationError: unknown key, unparsable or out-of-range value
	"""
	values = dict(DEFAULTS)
	if path:
		values.update(read_config_file(path))
	if seed is not None:
		values['SEED'] = str(seed)
	if output_dir is not None:
		values['OUTPUT_DIR'] = str(output_dir)
	if experiment is not None:
		values['EXPERIMENT'] = str(experiment)

	channel_spacing = str(values['CHANNEL_SPACING_HZ']).strip()
	waveform = WaveformConfig(
		kind=_as_choice(values, 'WAVEFORM_KIND', WAVEFORM_KINDS),
		n_channels=_as_int(values, 'N_CHANNELS', 1),
		n_subcarriers=_as_int(values, 'N_SUBCARRIERS', 1),
		n_symbols=_as_int(values, 'N_SYMBOLS', 1),
		constellation=_as_choice(values, 'CONSTELLATION', tuple(CONSTELLATIONS)),
		oversampling=_as_int(values, 'OVERSAMPLING', 2),
		subcarrier_spacing_hz=_as_float(values, 'SUBCARRIER_SPACING_HZ', positive=True),
		channel_spacing_hz=_as_float(values, 'CHANNEL_SPACING_HZ', positive=True) if channel_spacing else None,
		n_tones=_as_int(values, 'N_TONES', 1),
		tone_spacing_hz=_as_float(values, 'TONE_SPACING_HZ', positive=True),
		n_samples=_as_int(values, 'N_SAMPLES', 1),
		sample_rate_hz=_as_float(values, 'SAMPLE_RATE_HZ', positive=True),
		phases=str(values['MULTISINE_PHASES']).strip(),
	)
	hpa = HpaConfig(
		model_file=str(values['HPA_MODEL_FILE']).strip(),
		reference_taps=_as_list(values, 'REFERENCE_TAPS'),
		reference_smoothness=_as_float(values, 'REFERENCE_SMOOTHNESS', positive=True),
		reference_backoff_db=_as_float(values, 'REFERENCE_BACKOFF_DB'),
		reference_gain=_as_float(values, 'REFERENCE_GAIN', positive=True),
		fit_order_p=_as_int(values, 'FIT_ORDER_P', 1),
		fit_memory_m=_as_int(values, 'FIT_MEMORY_M', 0),
		fit_sweep_orders=_as_list(values, 'FIT_SWEEP_ORDERS', int),
		fit_sweep_memory=_as_list(values, 'FIT_SWEEP_MEMORY', int),
		fit_n_symbols=_as_int(values, 'FIT_N_SYMBOLS', 1),
		fit_oversampling=_as_int(values, 'FIT_OVERSAMPLING', 2),
		link_memory_taps=_as_list(values, 'LINK_MEMORY_TAPS'),
	)
	dpd = DpdConfig(
		tolerance=_as_float(values, 'DPD_TOLERANCE', positive=True),
		max_iterations=_as_int(values, 'DPD_MAX_ITERATIONS', 1),
		saturation_guard=_as_float(values, 'DPD_SATURATION_GUARD', positive=True),
	)
	spectrum = SpectrumConfig(
		segment_length=_as_int(values, 'PSD_SEGMENT_LENGTH', 2),
		overlap_fraction=_as_float(values, 'PSD_OVERLAP_FRACTION'),
		acpr_guard_fraction=_as_float(values, 'ACPR_GUARD_FRACTION'),
		ccdf_min_db=_as_float(values, 'CCDF_MIN_DB'),
		ccdf_max_db=_as_float(values, 'CCDF_MAX_DB'),
		ccdf_step_db=_as_float(values, 'CCDF_STEP_DB', positive=True),
		papr_probability=_as_float(values, 'PAPR_PROBABILITY', positive=True),
	)
	if not 0.0 <= spectrum.overlap_fraction < 1.0:
		raise ConfigurationError(f"PSD_OVERLAP_FRACTION: must be in [0, 1), got {spectrum.overlap_fraction}")
	if spectrum.acpr_guard_fraction < 0:
		raise ConfigurationError(f"ACPR_GUARD_FRACTION: must be non-negative, got {spectrum.acpr_guard_fraction}")
	if spectrum.ccdf_max_db < spectrum.ccdf_min_db:
		raise ConfigurationError("CCDF_MAX_DB must not be below CCDF_MIN_DB")
	if not spectrum.papr_probability < 1:
		raise ConfigurationError(f"PAPR_PROBABILITY: must be in (0, 1), got {spectrum.papr_probability}")

	link = LinkConfig(
		n_t=_as_int(values, 'N_T', 1),
		n_r=_as_int(values, 'N_R', 1),
		distance_m=_as_float(values, 'DISTANCE_M', positive=True),
		pathloss_exponent=_as_float(values, 'PATHLOSS_EXPONENT', positive=True),
		transmit_power_dbm=_as_float(values, 'TRANSMIT_POWER_DBM'),
		drive_reference_dbm=_as_float(values, 'DRIVE_REFERENCE_DBM'),
		sigma_v_dbm=_as_float(values, 'SIGMA_V_DBM'),
		sigma_a_dbm=_as_float(values, 'SIGMA_A_DBM'),
		eh_p_l_dbm=_as_float(values, 'EH_P_L_DBM'),
		eh_p_u_dbm=_as_float(values, 'EH_P_U_DBM'),
		eh_eta=_as_float(values, 'EH_ETA'),
		link_symbols=_as_int(values, 'LINK_SYMBOLS', 16),
		re_channel_draws=_as_int(values, 'RE_CHANNEL_DRAWS', 1),
		re_grid_points=_as_int(values, 'RE_GRID_POINTS', 2),
		rate_channel_draws=_as_int(values, 'RATE_CHANNEL_DRAWS', 1),
		rate_sweep_start_dbm=_as_float(values, 'RATE_SWEEP_START_DBM'),
		rate_sweep_stop_dbm=_as_float(values, 'RATE_SWEEP_STOP_DBM'),
		rate_sweep_step_dbm=_as_float(values, 'RATE_SWEEP_STEP_DBM', positive=True),
	)
	if link.rate_sweep_stop_dbm < link.rate_sweep_start_dbm:
		raise ConfigurationError("RATE_SWEEP_STOP_DBM must not be below RATE_SWEEP_START_DBM")
	# validates the harvester parameters early
	link.eh_model()

	correlation = CorrelationConfig(
		samples=_as_int(values, 'CORRELATION_SAMPLES', 100),
		fir=_as_list(values, 'CORRELATION_FIR'),
		memory_coeff=_as_float(values, 'CORRELATION_MEMORY_COEFF'),
	)

	return ExperimentConfig(
		experiment=_as_choice(values, 'EXPERIMENT', EXPERIMENTS),
		seed=_as_seed(values),
		output_dir=str(values['OUTPUT_DIR']).strip() or 'outputs',
		waveform=waveform,
		hpa=hpa,
		drive=DriveConfig(backoff_db=_as_float(values, 'DRIVE_BACKOFF_DB')),
		dpd=dpd,
		spectrum=spectrum,
		link=link,
		correlation=correlation,
		source=os.path.abspath(path) if path else '',
	)
