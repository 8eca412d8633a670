"""
Results status reporting - which experiments have output in a run directory
"""
import glob
import os
from config.paths import EXPERIMENT_DIRS, output_path
from core.utils.file_ops import load_json, metadata_path


def results_status(output_dir):
	"""
	Per experiment: number of result CSVs and the seed recorded in their sidecars

	Returns:
		dict experiment -> {"csv_files": int, "seeds": sorted list}
	"""
	status = {}
	for experiment, sub_dir in EXPERIMENT_DIRS.items():
		csv_files = sorted(glob.glob(os.path.join(output_dir, sub_dir, '*.csv')))
		seeds = set()
		for csv_path in csv_files:
			sidecar = metadata_path(csv_path)
			if os.path.exists(sidecar):
				seeds.add(load_json(sidecar).get('seed'))
		status[experiment] = {"csv_files": len(csv_files), "seeds": sorted(s for s in seeds if s is not None)}
	return status


def print_results_status(output_dir):
	"""Print current status of a run directory"""
	print("=" * 60)
	print(f"RESULTS STATUS: {output_dir}")
	print("=" * 60)

	status = results_status(output_dir)
	for experiment, info in status.items():
		if info["csv_files"]:
			seeds = ", ".join(str(s) for s in info["seeds"]) or "unknown"
			print(f"✅ {experiment:<12} {info['csv_files']} result file(s), seed {seeds}")
		else:
			print(f"❌ {experiment:<12} no results")

	model_file = output_path(output_dir, 'fitted_model')
	if os.path.exists(model_file):
		model = load_json(model_file)
		print(f"📊 Fitted model: P={model['order_p']}, M={model['memory_m']} ({model_file})")

	print("=" * 60)
	return status
