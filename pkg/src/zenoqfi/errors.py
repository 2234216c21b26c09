"""Exception hierarchy. Every error carries a short machine-readable ``code``."""


class ZenoQfiError(Exception):
    code = "domain"


class DimensionError(ZenoQfiError, ValueError):
    code = "dimension"


class InvalidStateError(ZenoQfiError, ValueError):
    code = "invalid-state"


class ModelRangeError(ZenoQfiError, ValueError):
    code = "model-range"


class UnsupportedCaseError(ZenoQfiError, ValueError):
    code = "unsupported"


class BracketError(ZenoQfiError, RuntimeError):
    code = "bracket"


class DegenerateObjectiveError(ZenoQfiError, RuntimeError):
    code = "degenerate-objective"


class ConvergenceError(ZenoQfiError, RuntimeError):
    code = "no-convergence"

    def __init__(self, message, history_length=0):
        super().__init__(f"{message} (history length {history_length})")
        self.history_length = history_length
