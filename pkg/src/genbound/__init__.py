"""Information-theoretic generalization-error bounds.

Exact discrete information measures, CGF-envelope bounds (mutual information,
lautum and Jensen-Shannon information), an enumeration oracle for toy
learning problems, and the Gaussian mean-estimation example.
"""

from .cgf_bounds import (
    BoundInputs,
    BoundReport,
    CgfEnvelope,
    EnvelopeError,
    SubgaussianEnvelope,
    TabulatedEnvelope,
    js_bound,
    js_dominance_condition,
    lautum_bound,
    mi_bound,
    prop1_cap,
    psi_star_inverse,
    theorem1_lower,
    theorem1_upper,
    theorem2_bound,
)
from .discrete_oracle import (
    ToyLearningProblem,
    audit_inequalities,
    certification_suite,
    certify_bounds,
    exact_gen_error,
    memorizing_problem,
)
from .gaussian_example import (
    ExampleConfig,
    SweepSpec,
    bound_point,
    sweep,
    to_csv,
    to_json,
    true_gen_error_mc,
)
from .info_measures import (
    DiscreteJoint,
    DiscretePmf,
    GaussianPair,
    QuadratureConvergenceError,
    QuadratureSpec,
    gaussian_entropies,
    gaussian_js_information,
    gaussian_mutual_information,
    js_divergence,
    js_information,
    kl_discrete,
    lautum_information,
    mixture_entropy_2d,
    mutual_information,
    tv_discrete,
)

__version__ = "0.1.0"
