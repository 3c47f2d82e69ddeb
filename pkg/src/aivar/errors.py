"""Exception types. Everything under AivarError is a domain error (CLI exit code 1)."""


class AivarError(ValueError):
    pass


class DatasetError(AivarError):
    pass


class UnknownColumnError(DatasetError):
    pass


class UndefinedMetricError(AivarError):
    """A rate or metric whose denominator is zero."""


class UnknownGroupError(AivarError):
    pass


class EstimateError(AivarError):
    pass


class ScenarioError(AivarError):
    def __init__(self, violations):
        self.violations = list(violations)
        detail = "; ".join(f"{v.field}: {v.rule} ({v.value!r})" for v in self.violations)
        super().__init__(f"invalid scenario: {detail}")


class DistributionError(AivarError):
    pass
