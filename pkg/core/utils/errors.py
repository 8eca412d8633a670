"""
Exception types shared by the simulator
"""


class ConfigurationError(ValueError):
	"""Invalid parameter or configuration value"""


class UndefinedStatisticError(ValueError):
	"""Statistic requested on a zero-power or zero-baseline quantity"""


class IdentifiabilityError(ValueError):
	"""Regression matrix is rank deficient"""

	def __init__(self, message, deficient_columns=()):
		super().__init__(message)
		self.deficient_columns = list(deficient_columns)


class NonInvertibleOperatingPointError(ValueError):
	"""Scaling factor vanishes at the operating point of an antenna"""


class DegenerateChannelWarning(UserWarning):
	"""Dominant eigenvalue of H Hᴴ is not separated from the next one"""


# CLI exit status per error family
EXIT_CODES = {
	ConfigurationError: 2,
	IdentifiabilityError: 3,
	UndefinedStatisticError: 3,
	NonInvertibleOperatingPointError: 3,
}


def exit_code_for(error):
	"""Map an exception to the CLI exit status"""
	for error_type, code in EXIT_CODES.items():
		if isinstance(error, error_type):
			return code
	return 1
