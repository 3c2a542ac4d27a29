"""Exact and numeric run-length distributions for i.i.d. sequences on
countably series-parallel orders."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceeded, DegenerateMeasure, DiffuseUnsupported, InvalidMeasure, ModeError,
    NotProbability, NotTotalOrder, PoleError, RunLengthError, SpecSyntaxError,
)
from .measure import (  # noqa: E402
    Atom, Parallel, Series, TotalLeaf, ValidationReport, atom_mass_multiset,
    build_geometric_atoms, normalize, parse_measure_spec, rearrange_atoms,
    serialize_measure_spec, total_mass, validate,
)
from .series import TruncatedSeries, exp_series, geometric_inverse, product_all  # noqa: E402
from .runfunc import (  # noqa: E402
    NONSTRICT, STRICT, RunKind, eval_run_function, eval_run_function_with_derivative,
    run_coefficients, second_coefficient, truncation_error_bound,
)
from .stats import (  # noqa: E402
    INITIAL, INTERIOR, Position, RunStatistics, even_die_stats, mean, pgf, run_statistics,
    total_order_stats, variance,
)
