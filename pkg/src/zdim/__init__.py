"""Zeta-dimension toolkit: counting, estimation, closed forms, betting
functions, and set algebra for sets of positive integers and lattice
points."""

from .errors import (BudgetExceededError, CodeSpecError, ConstructionError,
                     DepthError, ParameterError, ParseError, RangeError,
                     RuleError, UsageError, ZdimError)
from .sets import (DEFAULT_BUDGET, NORM_KINDS, CountProfile,
                   DimensionEstimate, IntegerSet, LatticePointSet,
                   PartialSum, block_profile, count_range,
                   finite_integer_set, lattice_from_points,
                   parse_set_stream, write_integer_set, write_lattice_set,
                   zeta_partial)
from .generators import (InstantaneousCodeSpec, SubstitutionRule,
                         TowerPairSpec, all_integers, from_spec,
                         gen_code_set, gen_digit_set, gen_pascal_mod2,
                         gen_substitution, gen_tower_pair, perfect_powers,
                         powers_of, primes, sierpinski_rule,
                         substitution_grid, tower_values)
from .estimators import (DEFAULT_WINDOW, AbscissaResult, abscissa_probe,
                         lower_dim_estimate, upper_dim_estimate)
from .closed_form import (CodeDimensionResult, code_beta, code_dimension,
                          digit_dimension, lattice_subspace_dimension,
                          substitution_dimension, validate_code)
from .gales import (Gale, build_supergale, constant_gale, gale_deficiency,
                    kraft_check, succeeds)
from .algebra import (Component, affine, analytic_cartesian,
                      bounded_components, cartesian, pointwise)
from .verify import SUITES as VERIFY_SUITES
from .verify import CheckResult

__version__ = "0.1.0"

__all__ = [
    "AbscissaResult", "BudgetExceededError", "CheckResult",
    "CodeDimensionResult", "CodeSpecError", "Component", "ConstructionError",
    "CountProfile", "DEFAULT_BUDGET", "DEFAULT_WINDOW", "DepthError",
    "DimensionEstimate", "Gale", "InstantaneousCodeSpec", "IntegerSet",
    "LatticePointSet", "NORM_KINDS", "ParameterError", "ParseError",
    "PartialSum", "RangeError", "RuleError", "SubstitutionRule",
    "TowerPairSpec", "UsageError", "VERIFY_SUITES", "ZdimError",
    "abscissa_probe", "affine", "all_integers", "analytic_cartesian",
    "block_profile", "bounded_components", "build_supergale", "cartesian",
    "code_beta", "code_dimension", "constant_gale", "count_range",
    "digit_dimension", "finite_integer_set", "from_spec", "gale_deficiency",
    "gen_code_set", "gen_digit_set", "gen_pascal_mod2", "gen_substitution",
    "gen_tower_pair", "kraft_check", "lattice_from_points",
    "lattice_subspace_dimension", "lower_dim_estimate", "parse_set_stream",
    "perfect_powers", "pointwise", "powers_of", "primes", "sierpinski_rule",
    "substitution_dimension", "substitution_grid", "succeeds",
    "tower_values", "upper_dim_estimate", "validate_code",
    "write_integer_set", "write_lattice_set", "zeta_partial",
]
