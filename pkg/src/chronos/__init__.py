"""Linear control systems on arbitrary time scales.

Models x^Delta(t) = A x(t) + B u(t) on finite unions of closed intervals,
simulates it exactly under piecewise-constant controls, and decides
positivity, positive accessibility, and positive reachability with
verifiable certificates (monomial Gram matrices and synthesised controls).
"""

from . import errors
from .demo import DemoSystem, demo_systems
from .exponential import ExpFactor, ExpPath, exp_path, ts_exp, ts_exp_at_sigma
from .matrices import (
    DEFAULT_TOL,
    MonomialWitness,
    expm,
    expm_integral,
    has_monomial_submatrix,
    is_monomial,
    is_nonneg,
    monomial_index,
    rank,
)
from .reach import (
    AnalysisReport,
    Candidate,
    Decision,
    GramSpec,
    ReachReport,
    TargetCertificate,
    analyze_system,
    check_pr_discrete_homogeneous,
    check_pr_discrete_nonhomogeneous,
    check_pr_real_line,
    decide_positive_reachability,
    gram,
    gram_columns,
    gram_full,
    homogeneous_block_matrix,
    is_positively_accessible,
    kalman_matrix,
    nonhomogeneous_block_matrix,
    synthesize_control,
)
from .system import (
    ControlSignal,
    ExpWitness,
    LinearSystem,
    PositivityReport,
    Trajectory,
    exp_nonneg_witness,
    is_positive,
    positivity_matrix,
    random_nonneg_controls,
    sample_positive_reachable,
    simulate,
)
from .timescale import Atom, DeltaSet, Segment, TimeScale

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "Atom",
    "Candidate",
    "ControlSignal",
    "Decision",
    "DEFAULT_TOL",
    "DeltaSet",
    "DemoSystem",
    "ExpFactor",
    "ExpPath",
    "ExpWitness",
    "GramSpec",
    "LinearSystem",
    "MonomialWitness",
    "PositivityReport",
    "ReachReport",
    "Segment",
    "TargetCertificate",
    "TimeScale",
    "Trajectory",
    "analyze_system",
    "check_pr_discrete_homogeneous",
    "check_pr_discrete_nonhomogeneous",
    "check_pr_real_line",
    "decide_positive_reachability",
    "demo_systems",
    "errors",
    "exp_nonneg_witness",
    "exp_path",
    "expm",
    "expm_integral",
    "gram",
    "gram_columns",
    "gram_full",
    "has_monomial_submatrix",
    "homogeneous_block_matrix",
    "is_monomial",
    "is_nonneg",
    "is_positive",
    "is_positively_accessible",
    "kalman_matrix",
    "monomial_index",
    "nonhomogeneous_block_matrix",
    "positivity_matrix",
    "random_nonneg_controls",
    "rank",
    "sample_positive_reachable",
    "simulate",
    "synthesize_control",
    "ts_exp",
    "ts_exp_at_sigma",
]
