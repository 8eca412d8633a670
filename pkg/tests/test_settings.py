"""
Tests for configuration loading, seeding, file helpers and the command line
"""
import json
import numpy as np
import pandas as pd
import pytest
from config.paths import output_path, region_path
from config.settings import DEFAULTS, DEFAULT_CONFIG_FILE, load_config, read_config_file
from core.experiments.seeding import derive_rng, derive_seed
from core.utils.errors import (
	ConfigurationError,
	IdentifiabilityError,
	NonInvertibleOperatingPointError,
	exit_code_for,
)
from core.utils.file_ops import load_json, metadata_path, read_csv, write_csv
from main import run_cli


def test_defaults_file_matches_builtin_defaults():
	assert read_config_file(DEFAULT_CONFIG_FILE) == DEFAULTS


def test_default_config_values():
	cfg = load_config()
	assert cfg.experiment == 'fit'
	assert (cfg.hpa.fit_order_p, cfg.hpa.fit_memory_m) == (7, 3)
	assert cfg.hpa.reference_taps == (1.0, 0.15, -0.05, 0.01)
	assert cfg.hpa.link_memory_taps == (1e-4,)
	assert (cfg.link.n_t, cfg.link.n_r) == (3, 2)
	assert cfg.link.transmit_power_w == pytest.approx(10 ** 1.4 / 1000.0)
	assert cfg.link.noise().sigma_v_sq == pytest.approx(1e-10)
	assert cfg.link.eh_model().eta == 0.24
	assert cfg.waveform.channel_spacing_hz is None
	assert cfg.source == ''


def test_overrides_take_precedence(tmp_path):
	config_file = tmp_path / "run.env"
	config_file.write_text("SEED=5\nN_T=4\n# comment\nFIT_SWEEP_ORDERS='[1, 3]'\n", encoding='utf-8')
	cfg = load_config(str(config_file), seed=9, output_dir=str(tmp_path / "o"), experiment='psd')
	assert cfg.seed == 9
	assert cfg.link.n_t == 4
	assert cfg.hpa.fit_sweep_orders == (1, 3)
	assert cfg.experiment == 'psd'
	assert cfg.output_dir == str(tmp_path / "o")
	assert cfg.source == str(config_file)


@pytest.mark.parametrize("line", [
	"NOT_A_KEY=1",
	"N_T=two",
	"N_T=0",
	"DISTANCE_M=-3",
	"EXPERIMENT=plot",
	"CONSTELLATION=8PSK",
	"FIT_SWEEP_ORDERS=[1, 3",
	"PSD_OVERLAP_FRACTION=1.0",
	"EH_P_L_DBM=5.0",
	"RATE_SWEEP_STOP_DBM=-5",
	"SEED=-1",
	"DPD_TOLERANCE=0",
])
def test_invalid_values_are_configuration_errors(tmp_path, line):
	config_file = tmp_path / "bad.env"
	config_file.write_text(line + "\n", encoding='utf-8')
	with pytest.raises(ConfigurationError):
		load_config(str(config_file))


def test_missing_config_file(tmp_path):
	with pytest.raises(ConfigurationError):
		load_config(str(tmp_path / "missing.env"))


def test_config_dict_is_json_serializable():
	cfg = load_config()
	round_trip = json.loads(json.dumps(cfg.as_dict()))
	assert round_trip['link']['n_t'] == 3
	assert round_trip['dpd']['max_iterations'] == 50


def test_sweep_and_threshold_grids():
	cfg = load_config()
	np.testing.assert_allclose(cfg.link.sweep_dbm(), np.arange(0.0, 31.0, 2.0))
	thresholds = cfg.spectrum.thresholds_db()
	assert thresholds[0] == 0.0 and thresholds[-1] == 12.0 and len(thresholds) == 121


def test_derived_seeds_are_stable_and_distinct():
	assert derive_seed(1, "fit", 0) == derive_seed(1, "fit", 0)
	assert derive_seed(1, "fit", 0) != derive_seed(1, "fit", 1)
	assert derive_seed(1, "fit", 0) != derive_seed(1, "psd", 0)
	assert derive_seed(1, "fit", 0) != derive_seed(2, "fit", 0)
	assert 0 <= derive_seed(2 ** 64 - 1, "x", 7) < 2 ** 64
	np.testing.assert_array_equal(derive_rng(3, "a").random(4), derive_rng(3, "a").random(4))


def test_write_csv_sorts_and_writes_sidecar(tmp_path):
	df = pd.DataFrame({"p_t_dbm": [10.0, 0.0, 5.0], "rate": [3.0, 1.0, 2.0]})
	path = write_csv(df, str(tmp_path / "sub" / "table.csv"), {"seed": np.int64(4), "gain": float("nan")})
	with open(path, 'rb') as f:
		content = f.read()
	assert content == b"p_t_dbm,rate\n0.0,1.0\n5.0,2.0\n10.0,3.0\n"
	meta = load_json(metadata_path(path))
	assert meta == {"seed": 4, "gain": None, "csv": "table.csv", "columns": ["p_t_dbm", "rate"], "rows": 3}
	assert read_csv(path)["rate"].tolist() == [1.0, 2.0, 3.0]


def test_output_paths(tmp_path):
	assert output_path(str(tmp_path), 'rate_sweep').endswith('rate_sweep.csv')
	assert output_path(str(tmp_path), 'workbook', experiment='psd').endswith('psd_results.xlsx')
	assert region_path(str(tmp_path), 'TS', 0).endswith('re_TS_zeta0.csv')


def test_exit_codes():
	assert exit_code_for(ConfigurationError("x")) == 2
	assert exit_code_for(IdentifiabilityError("x")) == 3
	assert exit_code_for(NonInvertibleOperatingPointError("x")) == 3
	assert exit_code_for(RuntimeError("x")) == 1


def test_cli_reports_configuration_error(tmp_path, capsys):
	config_file = tmp_path / "bad.env"
	config_file.write_text("N_T=zero\n", encoding='utf-8')
	assert run_cli(['fit', '--config', str(config_file), '--out', str(tmp_path / "o")]) == 2
	assert "ConfigurationError" in capsys.readouterr().err


def test_cli_reports_identifiability_error(tmp_path):
	config_file = tmp_path / "flat.env"
	# thirty amplitude powers are numerically collinear
	config_file.write_text("FIT_ORDER_P=30\nFIT_MEMORY_M=0\n", encoding='utf-8')
	assert run_cli(['fit', '--config', str(config_file), '--out', str(tmp_path / "o"), '--quiet']) == 3


def test_cli_status(tmp_path, capsys):
	assert run_cli(['status', '--out', str(tmp_path)]) == 0
	assert "no results" in capsys.readouterr().out
