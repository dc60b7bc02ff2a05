"""Exception hierarchy. Every model error is a ``ValueError`` so callers can
catch input problems uniformly."""


class ModelError(ValueError):
    pass


class UndefinedDataRate(ModelError):
    pass


class UnsupportedDataRate(ModelError):
    pass


class WrongModulation(ModelError):
    pass


class UnsupportedCodingRate(ModelError):
    pass


class InvalidReplicaCount(ModelError):
    pass


class PayloadTooLarge(ModelError):
    pass


class InvalidDutyCycle(ModelError):
    pass


class DutyCycleViolation(ModelError):
    def __init__(self, period_s: float, minimum_s: float):
        self.period_s = period_s
        self.minimum_s = minimum_s
        super().__init__(
            f"period {period_s:g} s is below the 1% duty-cycle minimum of {minimum_s:.4g} s"
        )


class InvalidStateRequest(ModelError):
    pass


class InvalidInput(ModelError):
    pass


class UndefinedEnergyCost(ModelError):
    pass


class ProfileError(ModelError):
    """Device profile file failed validation; ``key_path`` names the offending entry."""

    def __init__(self, key_path: str, message: str):
        self.key_path = key_path
        super().__init__(f"{key_path}: {message}" if key_path else message)
