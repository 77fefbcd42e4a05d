"""Grid-guided hybrid evolutionary optimizer for box-constrained problems.

The optimizer partitions every dimension of the search box into equal
cells, learns which cells look promising from an archive of the best
individuals seen, and drives eight crossover/mutation/sampling operators
from the two discrete distributions estimated over that structure.  The
package also ships the 30-function benchmark suite the method is evaluated
on and a CLI harness (``evogrid run`` / ``report`` / ``bench``) that
reproduces the published experiment protocol.
"""

from . import backends
from .benchmarks import evaluate, evaluate_batch, make_problem, registry
from .core import ElitePool, EvaluatedIndividual, Problem, RunConfig, SearchSpace
from .engine import ConvergenceTrace, Engine, run
from .harness import ExperimentConfig, compare_report, order_of_magnitude_misses, run_experiment

__version__ = "0.1.0"

__all__ = [
    "backends",
    "SearchSpace",
    "EvaluatedIndividual",
    "ElitePool",
    "RunConfig",
    "Problem",
    "Engine",
    "ConvergenceTrace",
    "run",
    "registry",
    "evaluate",
    "evaluate_batch",
    "make_problem",
    "ExperimentConfig",
    "run_experiment",
    "compare_report",
    "order_of_magnitude_misses",
    "__version__",
]
