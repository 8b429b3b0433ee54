"""Energy-time optimal point-to-point planning for a unicycle robot."""

from .model import Formulation, Problem, ProblemError, Trajectory
from .rootsolve import NonConvergence, SolveReport

__all__ = ["Formulation", "NonConvergence", "Problem", "ProblemError", "SolveReport",
           "Trajectory", "__version__"]
__version__ = "0.1.0"
