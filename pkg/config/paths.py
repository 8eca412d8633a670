"""
File paths configuration - result files of each experiment, relative to the run's output directory
"""
import os

# Base directory
BASE_OUTPUT_DIR = "outputs"

# Experiment sub-directories
EXPERIMENT_DIRS = {
	'fit': 'fit',
	'psd': 'psd',
	'ccdf': 'ccdf',
	'rate_sweep': 'rate_sweep',
	're_region': 're_region',
	'correlation': 'correlation',
}

# Specific paths
PATHS = {
	# Amplifier identification
	'fitted_model': os.path.join('fit', 'hpa_model.json'),
	'fit_report': os.path.join('fit', 'fit_nmse.csv'),
	'fit_sweep': os.path.join('fit', 'fit_sweep.csv'),
	'fit_am_am': os.path.join('fit', 'am_am.csv'),

	# Spectra
	'psd': os.path.join('psd', 'psd.csv'),
	'acpr_summary': os.path.join('psd', 'acpr_summary.csv'),
	'psd_dpd_report': os.path.join('psd', 'dpd_report.csv'),

	# Amplitude statistics
	'ccdf': os.path.join('ccdf', 'ccdf.csv'),
	'papr_summary': os.path.join('ccdf', 'papr_summary.csv'),

	# Link level
	'rate_sweep': os.path.join('rate_sweep', 'rate_sweep.csv'),
	're_gain_summary': os.path.join('re_region', 'gain_summary.csv'),

	# Diagnostics
	'correlation': os.path.join('correlation', 'correlation.csv'),

	# Workbook export
	'workbook': os.path.join('reports', '{experiment}_results.xlsx'),
}


def output_path(output_dir, key, **fields):
	"""Absolute location of a result file inside output_dir"""
	return os.path.join(output_dir, PATHS[key].format(**fields))


def region_path(output_dir, architecture, zeta):
	"""CSV of one rate-energy region"""
	return os.path.join(output_dir, EXPERIMENT_DIRS['re_region'], f"re_{architecture}_zeta{zeta}.csv")


def ensure_directories(output_dir=BASE_OUTPUT_DIR):
	"""Create the experiment directories if they don't exist"""
	for sub_dir in list(EXPERIMENT_DIRS.values()) + ['reports']:
		os.makedirs(os.path.join(output_dir, sub_dir), exist_ok=True)
