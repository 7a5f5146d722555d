"""Exact Betti tables of monomial ideals and their powers.

Computes multigraded and graded Betti numbers over a prime field, scans the
Betti-table shapes of ``I, I^2, ..., I^D`` for stabilization, checks the
Rees-algebra bound on Betti numbers of powers and evaluates the
square-covering index of squarefree ideals.
"""

from importlib.resources import files

from ._kernels import BACKEND
from .betti import (
    GradedBettiTable,
    HilbertNumerator,
    MultigradedBettiTable,
    graded_betti,
    hilbert_numerator,
    lcm_lattice,
    lcm_lattice_betti,
    multigraded_betti,
    regularity,
    upper_koszul_complex,
)
from .complexes import FieldConfig, SimplicialComplex, reduced_homology_ranks
from .errors import BettiStabError
from .ideal import (
    Monomial,
    MonomialIdeal,
    divides,
    equigenerated_degree,
    lcm_of,
    minimalize,
    power,
    times,
)
from .powerlab import (
    ReesBettiData,
    ShapeSet,
    StabilizationReport,
    conjecture_stab_compare,
    random_edge_ideal,
    random_monomial_ideal,
    rees_bound_check,
    shape_of,
    square_cover_index,
    stabilization_scan,
    unimodality_check,
)

__version__ = "0.1.0"


def data_path(name: str):
    """Path of a bundled example file (``example13.ideal``, ``xy.rees``, ...)."""
    return files(__name__) / "data" / name
