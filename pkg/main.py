"""
Main orchestration script for the SWIPT amplifier-distortion simulator
"""
import argparse
import os
import sys

# Prevent creation of __pycache__ folders
sys.dont_write_bytecode = True

# Add project root to Python path to enable imports without __init__.py
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config.settings import EXPERIMENTS, load_config
from config.paths import BASE_OUTPUT_DIR
from core.experiments.runners import run_experiment
from core.utils.errors import exit_code_for
from core.utils.excel_export import export_results_workbook
from core.utils.project_status import print_results_status


def build_parser():
	"""Command line: <experiment> --config PATH [--seed N] [--out DIR] [--excel], or status [--out DIR]"""
	parser = argparse.ArgumentParser(description="MIMO SWIPT amplifier distortion and predistortion simulator")
	parser.add_argument('experiment', choices=list(EXPERIMENTS) + ['status'],
						help="experiment to run, or 'status' to list existing results")
	parser.add_argument('--config', default=None, help="config file (defaults are used for missing keys)")
	parser.add_argument('--seed', type=int, default=None, help="override SEED")
	parser.add_argument('--out', default=None, help="override OUTPUT_DIR")
	parser.add_argument('--excel', action='store_true', help="also export the results as an Excel workbook")
	parser.add_argument('--quiet', action='store_true', help="suppress progress output")
	return parser


def run_cli(argv):
	"""Run one command; returns the process exit status"""
	args = build_parser().parse_args(argv)
	try:
		if args.experiment == 'status':
			output_dir = args.out or (load_config(args.config).output_dir if args.config else BASE_OUTPUT_DIR)
			print_results_status(output_dir)
			return 0

		cfg = load_config(args.config, seed=args.seed, output_dir=args.out, experiment=args.experiment)
		result = run_experiment(cfg, quiet=args.quiet)
		if args.excel:
			export_results_workbook(cfg.output_dir, cfg.experiment)
		if not args.quiet:
			print(f"\n✅ {cfg.experiment} finished, {len(result['files'])} file(s) in {cfg.output_dir}")
		return 0
	except Exception as e:
		print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
		return exit_code_for(e)


def main():
	"""Main function with interactive menu"""
	config_path = None

	while True:
		print("\n" + "=" * 60)
		print("SWIPT SIMULATOR - MAIN MENU")
		print("=" * 60)
		for i, experiment in enumerate(EXPERIMENTS, 1):
			print(f"{i}. Run {experiment}")
		print(f"{len(EXPERIMENTS) + 1}. Export results to Excel")
		print(f"{len(EXPERIMENTS) + 2}. Results status")
		print(f"{len(EXPERIMENTS) + 3}. Select config file (current: {config_path or 'defaults'})")
		print("0. Exit")
		print("=" * 60)

		choice = input(f"Enter your choice (0-{len(EXPERIMENTS) + 3}): ").strip()

		try:
			if choice == "0":
				print("Goodbye!")
				break
			elif choice.isdigit() and 1 <= int(choice) <= len(EXPERIMENTS):
				cfg = load_config(config_path, experiment=EXPERIMENTS[int(choice) - 1])
				run_experiment(cfg)
			elif choice == str(len(EXPERIMENTS) + 1):
				experiment = input(f"Experiment ({'/'.join(EXPERIMENTS)}): ").strip()
				export_results_workbook(load_config(config_path).output_dir, experiment)
			elif choice == str(len(EXPERIMENTS) + 2):
				print_results_status(load_config(config_path).output_dir)
			elif choice == str(len(EXPERIMENTS) + 3):
				path = input("Config file path (empty for defaults): ").strip()
				if path:
					load_config(path)
				config_path = path or None
				print(f"✅ Using {config_path or 'built-in defaults'}")
			else:
				print("Invalid choice. Please try again.")
		except Exception as e:
			print(f"❌ {type(e).__name__}: {e}")


if __name__ == "__main__":
	if len(sys.argv) > 1:
		sys.exit(run_cli(sys.argv[1:]))
	main()
