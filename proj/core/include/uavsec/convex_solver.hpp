#ifndef UAVSEC_CONVEX_SOLVER_HPP
#define UAVSEC_CONVEX_SOLVER_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace uavsec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Sparse gradient: (index, value) entries, at most a handful per constraint.
using SparseVec = std::vector<std::pair<int, double>>;
/// Sparse symmetric matrix contribution; both triangles must be listed.
struct Triplet {
  int r = 0, c = 0;
  double v = 0.0;
};
using SparseTriplets = std::vector<Triplet>;

/// One smooth convex inequality g(x) <= 0. `hess` may be empty for affine
/// constraints (treated as zero curvature). When the sparse forms are set
/// the solver prefers them; trajectory constraints touch <= 5 coordinates,
/// which keeps the barrier Hessian assembly linear in the variable count.
struct ConvexConstraint {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
  std::function<SparseVec(const Vec&)> grad_sparse;
  std::function<SparseTriplets(const Vec&)> hess_sparse;
};

/// Solver-agnostic description of a smooth convex minimization problem.
/// `objective_hess` may be empty; it is then formed by forward differences
/// of the gradient.
struct ConvexProgram {
  int dim = 0;
  std::function<double(const Vec&)> objective;
  std::function<Vec(const Vec&)> objective_grad;
  std::function<Mat(const Vec&)> objective_hess;
  std::vector<ConvexConstraint> inequalities;
  Vec lower;  // per-coordinate bounds; size 0 => absent, +-inf entries allowed
  Vec upper;
  Vec x0;  // warm start; size 0 => absent
};

enum class SolveStatus { Optimal, MaxIters, Infeasible };

struct SolveResult {
  Vec x;
  double objective_value = 0.0;
  double kkt_residual = 0.0;
  SolveStatus status = SolveStatus::MaxIters;
  int newton_steps = 0;
  int outer_iters = 0;
};

struct SolverOptions {
  double tol = 1e-6;         // duality-gap bound m/t at exit
  int max_outer = 50;        // barrier stages
  double t0 = 1.0;
  double mu = 10.0;          // barrier multiplier
  double newton_tol = 1e-9;  // Newton decrement^2 / 2
  int max_newton_per_stage = 100;
  double interior_margin = 1e-9;  // strict-feasibility target for phase I
};

struct Phase1Result {
  bool feasible = false;
  Vec x;
  int worst_constraint = -1;  // maximally violated index when infeasible
  double max_violation = 0.0;
};

/// Finds a strictly feasible point (max_i g_i(x) < 0) or reports Infeasible.
Phase1Result phase1_feasible(const ConvexProgram& p, const SolverOptions& opts = {});

/// Log-barrier path following with damped Newton inner steps and
/// backtracking line search. Deterministic for identical inputs.
SolveResult minimize(const ConvexProgram& p, const SolverOptions& opts = {});

}  // namespace uavsec

#endif
