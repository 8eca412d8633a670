"""
Deterministic sub-seed derivation for independent random streams
"""
import hashlib
import numpy as np


def derive_seed(base_seed, experiment_name, trial_index=0):
	"""64-bit seed from a stable hash of (base_seed, experiment_name, trial_index)"""
	key = f"{int(base_seed)}:{experiment_name}:{int(trial_index)}"
	return int(hashlib.md5(key.encode('utf-8')).hexdigest()[:16], 16)


def derive_rng(base_seed, experiment_name, trial_index=0):
	"""numpy Generator seeded with derive_seed"""
	return np.random.default_rng(derive_seed(base_seed, experiment_name, trial_index))
