"""
File operations utilities - JSON, CSV and metadata sidecars
"""
import os
import json
import pandas as pd


def save_json(data, filepath, ensure_dir=True):
	"""Save data to JSON file with optional directory creation"""
	if ensure_dir and os.path.dirname(filepath):
		os.makedirs(os.path.dirname(filepath), exist_ok=True)

	with open(filepath, 'w', encoding='utf-8', newline='\n') as f:
		json.dump(data, f, ensure_ascii=False, indent=2)
		f.write("\n")


def load_json(filepath):
	"""Load data from JSON file"""
	with open(filepath, 'r', encoding='utf-8') as f:
		return json.load(f)


def metadata_path(csv_path):
	"""Sidecar path belonging to a CSV file"""
	return os.path.splitext(csv_path)[0] + ".meta.json"


def write_csv(df, filepath, metadata=None):
	"""
	Write a result table as CSV (UTF-8, comma, header, LF) sorted on its first column

	Args:
		df: DataFrame to write
		filepath: output CSV path
		metadata: optional dict written next to the CSV as <name>.meta.json

	Returns:
		Path to the CSV file
	"""
	os.makedirs(os.path.dirname(filepath) or ".", exist_ok=True)
	first_column = df.columns[0]
	if pd.api.types.is_numeric_dtype(df[first_column]):
		df = df.sort_values(first_column, kind="mergesort")
	df.to_csv(filepath, index=False, encoding='utf-8', lineterminator="\n")

	if metadata is not None:
		sidecar = dict(metadata)
		sidecar["csv"] = os.path.basename(filepath)
		sidecar["columns"] = [str(c) for c in df.columns]
		sidecar["rows"] = int(len(df))
		save_json(_jsonable(sidecar), metadata_path(filepath))

	return filepath


def read_csv(filepath):
	"""Read a result table written by write_csv"""
	return pd.read_csv(filepath)


def _jsonable(value):
	"""Convert numpy scalars, tuples and non-finite floats into JSON-safe values"""
	if isinstance(value, dict):
		return {str(k): _jsonable(v) for k, v in value.items()}
	if isinstance(value, (list, tuple)):
		return [_jsonable(v) for v in value]
	if hasattr(value, "item") and not isinstance(value, (str, bytes)):
		try:
			value = value.item()
		except (ValueError, AttributeError):
			value = value.tolist()
			return _jsonable(value)
	if isinstance(value, complex):
		return [value.real, value.imag]
	if isinstance(value, float) and (value != value or value in (float("inf"), float("-inf"))):
		return None
	return value
