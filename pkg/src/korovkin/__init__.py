"""Weakly nonlinear monotone approximation operators and a Korovkin-type convergence harness."""
from .bernstein import (
    CompositionMap,
    bernstein_basis,
    composition_operator,
    kantorovich,
    max_kantorovich,
    sup_bernstein,
    tensor_sup_bernstein_2d,
)
from .choquet import DistortionFunction, choquet_integral, choquet_kantorovich
from .domain import (
    GridDomain,
    NormKind,
    RealFunction,
    deficit_of_positivity,
    korovkin_delta,
    korovkin_test_set,
    norm,
    trig_test_set,
)
from .errors import (
    DomainError,
    EvaluationError,
    ExprSyntaxError,
    GateRefused,
    InvariantError,
    KorovkinError,
    PreconditionError,
)
from .expr import parse_function
from .harness import (
    apriori_bound,
    check_hypotheses,
    probe_functional_equation,
    run_korovkin_experiment,
    weyl_experiment,
)
from .kernels import HAS_NUMBA
from .operators import (
    AxiomReport,
    OperatorFamily,
    OperatorInstance,
    cesaro_family,
    check_comonotone_additive,
    check_krein,
    check_monotone,
    check_sublinear,
    check_translatable,
    operator_norm,
)
from .trig import GOLDEN_ANGLE, RotationMap, circle_mean_operator, rotation_family

__version__ = "0.1.0"
