"""Exception hierarchy. The CLI maps each class to its own exit code."""


class HofstadterLabError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(HofstadterLabError, ValueError):
    """A lattice, gauge, sweep or model parameter is out of range."""


class NotHermitianError(HofstadterLabError, ValueError):
    pass


class ConvergenceError(HofstadterLabError, RuntimeError):
    """The QL iteration did not converge within the iteration cap."""

    def __init__(self, iterations, index=None):
        self.iterations = iterations
        self.index = index
        msg = f"eigensolver failed to converge after {iterations} iterations"
        if index is not None:
            msg += f" (eigenvalue {index})"
        super().__init__(msg)


class SweepError(HofstadterLabError, RuntimeError):
    """A parameter-sweep task failed; carries the offending flux value."""

    def __init__(self, alpha, cause):
        self.alpha = alpha
        self.cause = cause
        super().__init__(f"alpha={alpha!r}: {cause}")


class NoCrossingError(HofstadterLabError, RuntimeError):
    def __init__(self, sizes, alpha_max):
        self.sizes = list(sizes)
        self.alpha_max = alpha_max
        super().__init__(
            f"no ground-state crossing found in [0, {alpha_max}] for L={self.sizes}"
        )


class ResonanceError(HofstadterLabError, RuntimeError):
    """The eliminated block is singular at the reference energy (detuning too small)."""
