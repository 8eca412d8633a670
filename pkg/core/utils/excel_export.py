"""
Excel export of experiment results with header and flag formatting
"""
import glob
import os
import pandas as pd
from openpyxl.styles import PatternFill, Font, Alignment
from openpyxl.utils import get_column_letter
from config.paths import EXPERIMENT_DIRS, output_path
from core.utils.errors import ConfigurationError
from core.utils.file_ops import load_json, metadata_path, read_csv

# Boolean columns whose True cells are highlighted
FLAG_COLUMNS = {
	'clipped': PatternFill(start_color='FFB6C1', end_color='FFB6C1', fill_type='solid'),      # Light red
	'converged': PatternFill(start_color='90EE90', end_color='90EE90', fill_type='solid'),    # Light green
}


def _sheet_name(csv_path, used):
	# Excel caps sheet names at 31 characters
	name = os.path.splitext(os.path.basename(csv_path))[0][:31]
	base, suffix = name, 1
	while name in used:
		suffix += 1
		name = f"{base[:28]}_{suffix}"
	used.add(name)
	return name


def _format_sheet(ws, df):
	header_font = Font(bold=True, size=11)
	header_fill = PatternFill(start_color='E0E0E0', end_color='E0E0E0', fill_type='solid')  # Light gray
	center_alignment = Alignment(horizontal='center')

	ws.freeze_panes = 'A2'
	for col, column_name in enumerate(df.columns, start=1):
		col_letter = get_column_letter(col)
		header_cell = ws[f'{col_letter}1']
		header_cell.font = header_font
		header_cell.fill = header_fill
		header_cell.alignment = center_alignment
		ws.column_dimensions[col_letter].width = max(12, len(str(column_name)) + 2)

		fill = FLAG_COLUMNS.get(str(column_name))
		if fill is None:
			continue
		for row_idx in range(2, len(df) + 2):
			cell = ws[f'{col_letter}{row_idx}']
			cell.alignment = center_alignment
			if cell.value is True:
				cell.fill = fill


def export_results_workbook(output_dir, experiment, workbook_path=None):
	"""
	Collect every result CSV of one experiment into a single workbook

	Args:
		output_dir: run output directory
		experiment: experiment whose CSV files are exported
		workbook_path: optional target, defaults to reports/<experiment>_results.xlsx

	Returns:
		Path to created Excel file
	"""
	if experiment not in EXPERIMENT_DIRS:
		raise ConfigurationError(f"unknown experiment {experiment!r}")
	csv_files = sorted(glob.glob(os.path.join(output_dir, EXPERIMENT_DIRS[experiment], '*.csv')))
	if not csv_files:
		raise ConfigurationError(f"no result files found for {experiment!r} in {output_dir}")
	workbook_path = workbook_path or output_path(output_dir, 'workbook', experiment=experiment)
	os.makedirs(os.path.dirname(workbook_path) or '.', exist_ok=True)

	used = set()
	run_info = []
	print(f"💾 Saving to: {workbook_path}")
	with pd.ExcelWriter(workbook_path, engine='openpyxl') as writer:
		for csv_path in csv_files:
			df = read_csv(csv_path)
			sheet = _sheet_name(csv_path, used)
			df.to_excel(writer, sheet_name=sheet, index=False)
			_format_sheet(writer.sheets[sheet], df)
			print(f"📊 {sheet}: {len(df)} rows × {len(df.columns)} columns")

			sidecar = metadata_path(csv_path)
			if os.path.exists(sidecar):
				meta = load_json(sidecar)
				run_info.append({'sheet': sheet, 'seed': meta.get('seed'), 'experiment': meta.get('experiment'),
								 'rows': meta.get('rows')})

		if run_info:
			info = pd.DataFrame(run_info)
			info.to_excel(writer, sheet_name='run_info', index=False)
			_format_sheet(writer.sheets['run_info'], info)

	print(f"🎉 Excel created successfully!")
	print(f"📁 File: {workbook_path}")
	return workbook_path
