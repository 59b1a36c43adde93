"""Quantum process tomography with constrained least-squares and reweighted
l1-norm estimation over the CPTP set."""

from .basis import (
    OperatorBasis,
    basis_from_json,
    basis_to_json,
    coefficient_vector,
    ideal_svd_basis,
    natural_basis,
    transition_matrix,
)
from .channels import (
    KrausChannel,
    ProcessMatrix,
    apply,
    apply_kraus,
    bitflip_channel,
    change_basis,
    process_fidelity,
    process_matrix,
    rms_distance,
    unitary_channel,
)
from .estimators import (
    EstimationProblem,
    Solution,
    infinite_data_problem,
    l1_norm,
    reweighted_l1,
    solve_l1,
    solve_ls,
    solve_ml,
    solve_rms_objective,
    v_ls,
    v_ml,
)
from .harness import (
    SweepResult,
    SweepSpec,
    derive_seed,
    emit_process_matrix,
    emit_results,
    run_sweep,
)
from .linalg import hermitian_eig, kron, psd_project, svd, unvec, vec
from .tomography import (
    CountData,
    PairConfig,
    SensingMap,
    StateSet,
    empirical_probabilities,
    full_config,
    g_vector,
    ketset_states,
    probability,
    sample_counts,
    sensing_matrix,
    sub6_config,
)

__version__ = "0.1.0"
