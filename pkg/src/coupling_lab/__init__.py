"""Exact-arithmetic toolkit for couplings of finite Markov chains.

Construct coupling kernels, decide Markovian / strong-Markovian / faithful
properties exactly, run the sticking construction against brute-force path
laws, bound mixing by meeting-time tails, and cross-check everything with
seeded Monte Carlo.
"""

from .core import (
    Dist,
    StateSpace,
    StochMatrix,
    as_rat,
    delta,
    evolve,
    evolve_n,
    make_dist,
    make_stoch_matrix,
    tv_distance,
    uniform_dist,
)
from .errors import (
    CouplingLabError,
    EnumerationLimitExceeded,
    NegativeEntry,
    ParseError,
    SpaceMismatch,
    SumNotOne,
    UnknownState,
    ZeroSamples,
)
from .kernels import (
    CheckReport,
    CouplingKernel,
    JointDist,
    RosenthalFixture,
    Violation,
    check_faithful,
    check_markovian_for,
    check_proposition_condition,
    check_strong_markovian,
    evolve_joint,
    greedy_maximal_coupling,
    independent_coupling,
    joint_delta,
    make_joint,
    make_kernel,
    make_sticky_kernel,
    marginal_x,
    marginal_y,
    pair_index,
    pair_labels,
    product_joint,
    rosenthal_fixture,
)
from .simulate import (
    MonteCarloEstimate,
    Seed,
    estimate_stuck_event,
    estimate_tail,
    sample_coupled_path,
)
from .sticking import (
    DEFAULT_ENUMERATION_LIMIT,
    LIMIT_ENV_VAR,
    BoundRow,
    Discrepancy,
    PathDist,
    StickReport,
    TailVector,
    coupling_time_tail,
    enumerate_stuck_paths,
    enumeration_limit,
    has_now_equals_forever,
    markov_path_distribution,
    stuck_path_distribution,
    tv_bound_report,
    verify_sticking,
)

__version__ = "0.1.0"
