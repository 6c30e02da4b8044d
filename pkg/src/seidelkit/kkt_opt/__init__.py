"""Power-sum minimization over squared spectra and its first-order certificates."""

from .bennett import (
    BennettTuple,
    LinearPremiseError,
    MaxPremiseError,
    PremiseError,
    ProductPremiseError,
    RejectionBudgetExceeded,
    WeightPremiseError,
    bennett_check,
    check_premises,
    sample_bennett_premises,
)
from .certificates import (
    InfeasiblePointError,
    KKTReport,
    MFCQError,
    active_set,
    count_positive_roots,
    kkt_residual,
    mfcq_witness,
    positive_roots,
)
from .problem import (
    ConstraintValues,
    GateError,
    PowerSumProblem,
    embed_spectrum,
    evaluate_constraints,
    make_problem,
)
from .solver import LocalResult, NoFeasiblePointError, local_solve, minimize, polish, start_points

__all__ = [
    "BennettTuple", "ConstraintValues", "GateError", "InfeasiblePointError", "KKTReport",
    "LinearPremiseError", "LocalResult", "MFCQError", "MaxPremiseError", "NoFeasiblePointError",
    "PowerSumProblem", "PremiseError", "ProductPremiseError", "RejectionBudgetExceeded",
    "WeightPremiseError", "active_set", "bennett_check", "check_premises", "count_positive_roots",
    "embed_spectrum", "evaluate_constraints", "kkt_residual", "local_solve", "make_problem",
    "mfcq_witness", "minimize", "polish", "positive_roots", "sample_bennett_premises",
    "start_points",
]
