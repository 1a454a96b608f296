class LemmaViolation(AssertionError):
    """A proven inequality failed at run time: this is an implementation bug."""


class ParkViolation(ValueError):
    """An insertion would push some link score above 1."""


class BudgetExceeded(ValueError):
    """An exhaustive enumeration would exceed its configured budget."""


class SimulationFault(RuntimeError):
    """A simulated vertex read state it could not have received."""


def check(cond: bool, message: str, *details):
    if not cond:
        raise LemmaViolation(message + ("" if not details else ": " + "; ".join(map(str, details))))
