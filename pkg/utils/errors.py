"""Exception types raised by the simulator."""


class SimulationError(Exception):
    """Base class for every error the simulator raises on purpose."""


class ConfigError(SimulationError, ValueError):
    """Invalid or inconsistent experiment configuration."""


class GeometryError(SimulationError, ValueError):
    """Degenerate geometry: zero area, non-positive distance, point off the floor."""


class DimensionError(SimulationError, ValueError):
    """Array shapes that do not agree."""


class SolverError(SimulationError, ValueError):
    """Invalid multiplier combination or an instance the solver cannot serve."""


class SearchLimitError(SimulationError, ValueError):
    """Exhaustive search asked for more IRSs than the configured cap."""


class InvariantViolation(SimulationError, RuntimeError):
    """A per-trial ordering check between association algorithms failed."""


class EmitError(SimulationError, OSError):
    """Writing an artifact failed."""

    def __init__(self, path, message: str):
        super().__init__(f"{path}: {message}")
        self.path = str(path)
