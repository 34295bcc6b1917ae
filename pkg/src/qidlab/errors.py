"""Exception hierarchy for qidlab."""


class QidError(Exception):
    """Base class for all library errors."""


class NotHermitian(QidError, ValueError):
    pass


class NotPsd(QidError, ValueError):
    pass


class DimMismatch(QidError, ValueError):
    pass


class DimGuardExceeded(QidError, ValueError):
    pass


class NotStochastic(QidError, ValueError):
    pass


class BadDistribution(QidError, ValueError):
    pass


class InvalidState(QidError, ValueError):
    pass


class InvalidPovm(QidError, ValueError):
    pass


class InvalidChannel(QidError, ValueError):
    pass


class EmptyCode(QidError, ValueError):
    pass


class SizeMismatch(QidError, ValueError):
    pass


class RankDeficient(QidError, ValueError):
    pass


class AllZero(QidError, ValueError):
    pass


class BadParams(QidError, ValueError):
    pass


class TargetUnreachable(QidError, RuntimeError):
    pass


class TrivialRegime(QidError, ValueError):
    pass


class RankTooHigh(QidError, ValueError):
    pass


class PhaseSearchExhausted(QidError, RuntimeError):
    def __init__(self, message_index, trials):
        self.message_index = message_index
        self.trials = trials
        super().__init__(
            f"no admissible phase vector for message {message_index} "
            f"after {trials} trials"
        )


class PipelineFailure(QidError, RuntimeError):
    """Raised by multi-stage pipelines; ``stage`` names the failing step."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
