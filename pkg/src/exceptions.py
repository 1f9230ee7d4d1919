class SpectralError(Exception):
    """
    Базовая ошибка пакета. reason - машиночитаемая причина для записи результата,
    exit_code - код выхода CLI
    """

    reason: str = "spectral_error"
    exit_code: int = 2


# Ошибки входных данных и конфигурации (код выхода 1)


class InputError(SpectralError):
    reason = "invalid_input"
    exit_code = 1


class ConfigError(InputError):
    reason = "invalid_config"


class DomainError(InputError):
    reason = "domain_error"


class NegativeInput(InputError):
    reason = "negative_input"


class WrongDimension(InputError):
    reason = "wrong_dimension"


class DimensionUnsupported(InputError):
    reason = "dimension_unsupported"


class NotRadial(InputError):
    reason = "not_radial"


class MissingC2(InputError):
    reason = "missing_c2"


class StencilTouchesDiagonal(InputError):
    reason = "stencil_touches_diagonal"


class LambdaOnPositiveAxis(InputError):
    reason = "lambda_on_positive_axis"


class DiagonalSingularity(InputError):
    reason = "diagonal_singularity"


class UnboundedSupportWithoutTail(InputError):
    reason = "unbounded_support_without_tail"


class InvalidRegion(InputError):
    reason = "invalid_region"


# Численные неудачи (код выхода 2)


class NoConvergence(SpectralError):
    reason = "no_convergence"


class DivergedOutOfRegion(SpectralError):
    reason = "diverged_out_of_region"


class NoRootInRegion(SpectralError):
    reason = "no_root_in_region"


class EmptySpectrum(SpectralError):
    reason = "empty_spectrum"


class ReversedBracket(SpectralError):
    reason = "reversed_bracket"
