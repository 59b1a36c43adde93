"""Constrained convex estimation of process matrices over the CPTP set.

Four estimators share the same feasible set (X PSD plus the trace-preserving
equality) and differ in objective/data handling:

* least squares: minimize the sum of squared probability residuals;
* maximum likelihood: minimize the negative Bernoulli log-likelihood of the
  per-configuration counts;
* (weighted) l1: minimize the sum of absolute real and imaginary parts of X
  subject to a data-fit budget V_LS(X) <= sigma;
* reweighted l1: iterate the weighted l1 solve with weights 1/(|x_i|+eps),
  after fixing sigma = 1.3 * V_LS of the least-squares estimate.

In infinite-data mode the budget constraint is replaced by per-configuration
equality with the exact probabilities. The inner convex solves use cvxpy
with the Clarabel interior-point solver, which is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import cvxpy as cp
import numpy as np

from .basis import OperatorBasis
from .channels import ProcessMatrix, trace_preserving_map
from .linalg import hermitian_part, psd_project, vec
from .tomography import CountData, PairConfig, sensing_matrix

__all__ = [
    "EstimationProblem",
    "Solution",
    "v_ls",
    "v_ml",
    "l1_norm",
    "solve_ls",
    "solve_ml",
    "solve_l1",
    "reweighted_l1",
    "solve_rms_objective",
    "infinite_data_problem",
]

MODES = ("LS", "ML", "L1", "L1RW", "RMSOBJ")
LOG_CLAMP = 1e-12
RW_REL_TOL = 1e-6
SOLVER = cp.CLARABEL


@dataclass(frozen=True)
class EstimationProblem:
    """Data and knobs for one estimation run.

    ``data`` holds per-configuration target probabilities: empirical ratios
    for finite data, exact model probabilities when ``infinite_data`` is set.
    """

    basis: OperatorBasis
    configs: tuple[PairConfig, ...]
    data: np.ndarray
    counts: CountData | None = None
    mode: str = "LS"
    sigma: float | None = None
    epsilon: float = 0.01
    max_rw_iters: int = 6
    sigma_multiplier: float = 1.3
    infinite_data: bool = False

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if len(self.data) != len(self.configs):
            raise ValueError("data length must match number of configurations")
        if self.sigma is not None and self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_rw_iters < 1:
            raise ValueError("max_rw_iters must be positive")


@dataclass(frozen=True)
class Solution:
    """A solver result: the estimate plus objective and feasibility report."""

    X_est: ProcessMatrix
    objective: float
    data_residual: float
    cptp_residuals: tuple[float, float]  # (min eigenvalue, TP equality norm)
    rw_iterations: int = 0
    inner_iterations: int = 0
    status: str = "converged"


def _sensing(problem: EstimationProblem) -> np.ndarray:
    return sensing_matrix(list(problem.configs), problem.basis).G


def v_ls(X: ProcessMatrix, problem: EstimationProblem) -> float:
    """Sum of squared probability residuals over the configurations."""
    p_model = (_sensing(problem) @ vec(X.mat)).real
    return float(np.sum((np.asarray(problem.data) - p_model) ** 2))


def v_ml(X: ProcessMatrix, problem: EstimationProblem) -> float:
    """Negative Bernoulli log-likelihood of the counts under X.

    Each configuration is a click/no-click Bernoulli, so the no-click
    complement term is included. Probabilities are clamped away from 0 and 1
    inside the logs.
    """
    if problem.counts is None:
        raise ValueError("maximum likelihood requires raw counts")
    p = (_sensing(problem) @ vec(X.mat)).real
    p = np.clip(p, LOG_CLAMP, 1.0 - LOG_CLAMP)
    c = problem.counts.counts
    n = problem.counts.trials
    return float(-np.sum(c * np.log(p) + (n - c) * np.log(1.0 - p)))


def l1_norm(X: ProcessMatrix | np.ndarray, weights: np.ndarray | None = None) -> float:
    """Weighted sum of |Re x_i| + |Im x_i| over the entries of X.

    ``weights`` has one nonnegative entry per (complex) matrix element,
    in column-major order; identity weights give the plain l1 norm.
    """
    mat = X.mat if isinstance(X, ProcessMatrix) else np.asarray(X, dtype=complex)
    x = vec(mat)
    base = np.abs(x.real) + np.abs(x.imag)
    if weights is None:
        return float(np.sum(base))
    weights = np.asarray(weights, dtype=float)
    if weights.shape != x.shape:
        raise ValueError("weights length must match the number of matrix entries")
    if np.any(weights < 0):
        raise ValueError("weights must be nonnegative")
    return float(weights @ base)


def _build_variable(problem: EstimationProblem):
    d = problem.basis.dim
    Xvar = cp.Variable((d, d), hermitian=True)
    xv = cp.vec(Xvar, order="F")
    T = trace_preserving_map(problem.basis)
    constraints = [
        Xvar >> 0,
        T @ xv == vec(np.eye(problem.basis.n_s, dtype=complex)),
    ]
    G = _sensing(problem)
    p_expr = cp.real(G @ xv)
    return Xvar, xv, constraints, p_expr


_STATUS_MAP = {
    cp.OPTIMAL: "converged",
    cp.OPTIMAL_INACCURATE: "max-iters",
    cp.USER_LIMIT: "max-iters",
    cp.INFEASIBLE: "infeasible",
    cp.INFEASIBLE_INACCURATE: "infeasible",
}


def _run(objective, constraints, problem: EstimationProblem):
    prob = cp.Problem(objective, constraints)
    try:
        prob.solve(solver=SOLVER)
    except cp.SolverError:
        return None, "infeasible", 0
    status = _STATUS_MAP.get(prob.status, "infeasible")
    iters = getattr(prob.solver_stats, "num_iters", None) or 0
    return prob, status, int(iters)


def _finish(
    Xvar,
    problem: EstimationProblem,
    objective: float,
    status: str,
    iters: int,
    rw_iterations: int = 0,
) -> Solution:
    mat = hermitian_part(Xvar.value)
    # polish away solver-tolerance cone violations: clip tiny negative
    # eigenvalues, which perturbs the iterate at the scale of the violation
    w = np.linalg.eigvalsh(mat)
    if w.min() < 0.0 and w.min() > -1e-5:
        mat = psd_project(mat)
    X = ProcessMatrix(basis=problem.basis, mat=mat)
    min_eig = float(np.linalg.eigvalsh(X.mat).min())
    T = trace_preserving_map(problem.basis)
    tp_resid = float(
        np.linalg.norm(T @ vec(X.mat) - vec(np.eye(problem.basis.n_s, dtype=complex)))
    )
    return Solution(
        X_est=X,
        objective=objective,
        data_residual=v_ls(X, problem),
        cptp_residuals=(min_eig, tp_resid),
        rw_iterations=rw_iterations,
        inner_iterations=iters,
        status=status,
    )


def _feasible_point(basis: OperatorBasis) -> ProcessMatrix:
    """The ideal-memory process matrix, a CPTP point in any basis."""
    from .channels import process_matrix, unitary_channel

    return process_matrix(unitary_channel(np.eye(basis.n_s, dtype=complex)), basis)


def _data_constraint(problem: EstimationProblem, p_expr) -> list:
    """Budget V_LS <= sigma for finite data; exact equality for infinite data."""
    target = np.asarray(problem.data, dtype=float)
    if problem.infinite_data:
        return [p_expr == target]
    if problem.sigma is None:
        raise ValueError("sigma is required for the budget-constrained solve")
    return [cp.sum_squares(target - p_expr) <= problem.sigma]


def solve_ls(problem: EstimationProblem) -> Solution:
    """Least-squares estimate: minimize V_LS over the CPTP set.

    In infinite-data mode the exact probabilities are additionally imposed
    as equality constraints (the objective is then zero at any feasible
    point; with full-rank sensing the feasible point is unique).
    """
    Xvar, _, constraints, p_expr = _build_variable(problem)
    target = np.asarray(problem.data, dtype=float)
    if problem.infinite_data:
        constraints.append(p_expr == target)
    objective = cp.Minimize(cp.sum_squares(target - p_expr))
    prob, status, iters = _run(objective, constraints, problem)
    if prob is None or Xvar.value is None:
        raise RuntimeError("least-squares solve failed to produce an iterate")
    return _finish(Xvar, problem, float(prob.value), status, iters)


def solve_ml(problem: EstimationProblem) -> Solution:
    """Maximum-likelihood estimate from Bernoulli counts over the CPTP set."""
    if problem.counts is None:
        raise ValueError("maximum likelihood requires raw counts")
    Xvar, _, constraints, p_expr = _build_variable(problem)
    c = problem.counts.counts.astype(float)
    n = problem.counts.trials.astype(float)
    terms = []
    click = np.flatnonzero(c > 0)
    if click.size:
        terms.append(-(c[click] @ cp.log(p_expr[click])))
    noclick = np.flatnonzero(n - c > 0)
    if noclick.size:
        terms.append(-((n - c)[noclick] @ cp.log(1.0 - p_expr[noclick])))
    objective = cp.Minimize(sum(terms) if terms else cp.Constant(0.0))
    prob, status, iters = _run(objective, constraints, problem)
    if prob is None or Xvar.value is None:
        raise RuntimeError("maximum-likelihood solve failed to produce an iterate")
    sol = _finish(Xvar, problem, float(prob.value), status, iters)
    return replace(sol, objective=v_ml(sol.X_est, problem))


def solve_l1(problem: EstimationProblem, weights: np.ndarray | None = None) -> Solution:
    """Weighted l1 minimization subject to the data constraint and CPTP.

    The objective is sum_i w_i (|Re x_i| + |Im x_i|) over the entries of X
    in column-major order; identity weights when ``weights`` is None.
    """
    d2 = problem.basis.dim ** 2
    if weights is None:
        weights = np.ones(d2)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (d2,):
        raise ValueError("weights length must match the number of matrix entries")
    if np.any(weights < 0):
        raise ValueError("weights must be nonnegative")
    Xvar, xv, constraints, p_expr = _build_variable(problem)
    constraints += _data_constraint(problem, p_expr)
    objective = cp.Minimize(weights @ (cp.abs(cp.real(xv)) + cp.abs(cp.imag(xv))))
    prob, status, iters = _run(objective, constraints, problem)
    if prob is None or Xvar.value is None or status == "infeasible":
        # Infeasibly small sigma: report the status with a feasible fallback
        # point (the ideal-memory process matrix) as the iterate.
        fallback = _feasible_point(problem.basis)
        sol = Solution(
            X_est=fallback,
            objective=l1_norm(fallback, weights),
            data_residual=v_ls(fallback, problem),
            cptp_residuals=(
                float(np.linalg.eigvalsh(fallback.mat).min()),
                0.0,
            ),
            inner_iterations=iters,
            status="infeasible",
        )
        return sol
    return _finish(Xvar, problem, float(prob.value), status, iters)


def reweighted_l1(problem: EstimationProblem) -> Solution:
    """Iteratively reweighted l1 minimization.

    Procedure: if no data-fit budget is set, first solve least squares and
    set sigma = sigma_multiplier * V_LS of that estimate; then repeat the
    weighted l1 solve, updating weights to 1/(|x_i| + epsilon) from the
    current iterate, until the objective stops decreasing (relative
    tolerance 1e-6) or ``max_rw_iters`` is reached.

    The tracked objective is the concave surrogate sum log(|x_i| + epsilon)
    that each weighted solve majorizes-and-minimizes, so it is comparable
    across iterations and non-increasing over accepted iterates; the best
    accepted iterate is returned.
    """
    sigma = problem.sigma
    if not problem.infinite_data and sigma is None:
        ls_sol = solve_ls(replace(problem, mode="LS"))
        sigma = problem.sigma_multiplier * v_ls(ls_sol.X_est, problem)
    sub = replace(problem, mode="L1", sigma=sigma)
    d2 = problem.basis.dim ** 2
    weights = np.ones(d2)
    best: Solution | None = None
    best_score = np.inf
    inner_total = 0
    iterations = 0
    for iterations in range(1, problem.max_rw_iters + 1):
        sol = solve_l1(sub, weights)
        inner_total += sol.inner_iterations
        if sol.status == "infeasible":
            if best is None:
                return replace(
                    sol, rw_iterations=iterations, inner_iterations=inner_total
                )
            break
        magnitudes = np.abs(vec(sol.X_est.mat))
        score = float(np.sum(np.log(magnitudes + problem.epsilon)))
        improved = score < best_score - RW_REL_TOL * max(abs(best_score), 1.0)
        if score < best_score:
            best, best_score = sol, score
        if not improved and iterations > 1:
            break
        weights = 1.0 / (magnitudes + problem.epsilon)
    assert best is not None
    return replace(best, rw_iterations=iterations, inner_iterations=inner_total)


def solve_rms_objective(problem: EstimationProblem) -> Solution:
    """Control experiment: minimize the RMS (Frobenius) norm of X instead of
    the l1 norm, subject to the same constraints. Infinite-data mode only;
    the strictly convex objective has a unique minimizer on the feasible
    affine slice of the cone."""
    if not problem.infinite_data:
        raise ValueError("the RMS-objective control is defined for infinite data")
    Xvar, xv, constraints, p_expr = _build_variable(problem)
    constraints += _data_constraint(problem, p_expr)
    objective = cp.Minimize(cp.sum_squares(xv))
    prob, status, iters = _run(objective, constraints, problem)
    if prob is None or Xvar.value is None:
        raise RuntimeError("RMS-objective solve failed to produce an iterate")
    rms_value = float(np.sqrt(max(prob.value, 0.0)) / problem.basis.dim)
    return _finish(Xvar, problem, rms_value, status, iters)


def infinite_data_problem(
    X_true: ProcessMatrix,
    configs: list[PairConfig],
    basis: OperatorBasis,
    mode: str = "L1RW",
) -> EstimationProblem:
    """Problem whose data are the exact probabilities of ``X_true``; solvers
    then impose them as equality constraints (noise-free limit)."""
    from .channels import change_basis
    from .tomography import probability

    smap = sensing_matrix(configs, basis)
    X_in_basis = X_true if _basis_matches(X_true, basis) else change_basis(X_true, basis)
    data = np.array([probability(X_in_basis, c) for c in smap.configs])
    return EstimationProblem(
        basis=basis,
        configs=smap.configs,
        data=data,
        mode=mode,
        infinite_data=True,
    )


def _basis_matches(X: ProcessMatrix, basis: OperatorBasis) -> bool:
    return X.basis is basis or (
        X.basis.n_s == basis.n_s and np.allclose(X.basis.stack, basis.stack, atol=1e-12)
    )
