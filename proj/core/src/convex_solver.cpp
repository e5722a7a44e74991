#include "uavsec/convex_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace uavsec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Box bounds expressed as affine inequality constraints.
void append_box_constraints(const Vec& lower, const Vec& upper, int dim,
                            std::vector<ConvexConstraint>& out) {
  for (int j = 0; j < dim; ++j) {
    if (lower.size() == dim && std::isfinite(lower[j])) {
      const double lb = lower[j];
      ConvexConstraint c;
      c.value = [j, lb](const Vec& x) { return lb - x[j]; };
      c.grad_sparse = [j](const Vec&) { return SparseVec{{j, -1.0}}; };
      out.push_back(std::move(c));
    }
    if (upper.size() == dim && std::isfinite(upper[j])) {
      const double ub = upper[j];
      ConvexConstraint c;
      c.value = [j, ub](const Vec& x) { return x[j] - ub; };
      c.grad_sparse = [j](const Vec&) { return SparseVec{{j, 1.0}}; };
      out.push_back(std::move(c));
    }
  }
}

Vec constraint_grad_dense(const ConvexConstraint& g, const Vec& x) {
  if (g.grad) return g.grad(x);
  Vec out = Vec::Zero(x.size());
  for (const auto& [j, v] : g.grad_sparse(x)) out[j] += v;
  return out;
}

Mat fd_hessian(const std::function<Vec(const Vec&)>& grad, const Vec& x) {
  const int n = static_cast<int>(x.size());
  Mat h(n, n);
  const Vec g0 = grad(x);
  Vec xp = x;
  for (int j = 0; j < n; ++j) {
    const double step = 1e-6 * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + step;
    h.col(j) = (grad(xp) - g0) / step;
    xp[j] = x[j];
  }
  return 0.5 * (h + h.transpose());
}

struct SmoothFn {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;  // may be empty
};

double max_violation(const std::vector<ConvexConstraint>& gs, const Vec& x,
                     int* worst = nullptr) {
  double m = -kInf;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const double v = gs[i].value(x);
    if (v > m) {
      m = v;
      if (worst) *worst = static_cast<int>(i);
    }
  }
  return gs.empty() ? -kInf : m;
}

// Minimizes t*f(x) - sum log(-g_i(x)) for a fixed t by damped Newton with
// backtracking. `stop` can terminate early (used by phase I).
struct NewtonOutcome {
  Vec x;
  int steps = 0;
  bool converged = false;
  bool stopped = false;
};

NewtonOutcome newton_centering(const SmoothFn& f,
                               const std::vector<ConvexConstraint>& gs, double t,
                               Vec x, const SolverOptions& opts,
                               const std::function<bool(const Vec&)>& stop) {
  const int n = static_cast<int>(x.size());
  NewtonOutcome out;

  auto barrier_value = [&](const Vec& y) {
    double v = t * f.value(y);
    for (const auto& g : gs) {
      const double gv = g.value(y);
      if (gv >= 0.0) return kInf;
      v -= std::log(-gv);
    }
    return v;
  };

  for (int it = 0; it < opts.max_newton_per_stage; ++it) {
    if (stop && stop(x)) {
      out.stopped = true;
      break;
    }
    Vec grad = t * f.grad(x);
    Mat hess = f.hess ? Mat(t * f.hess(x)) : Mat(t * fd_hessian(f.grad, x));
    for (const auto& g : gs) {
      const double gv = g.value(x);
      if (g.grad_sparse) {
        const SparseVec sv = g.grad_sparse(x);
        for (const auto& [j, v] : sv) grad[j] += v / (-gv);
        const double inv2 = 1.0 / (gv * gv);
        for (const auto& [j1, v1] : sv)
          for (const auto& [j2, v2] : sv) hess(j1, j2) += v1 * v2 * inv2;
      } else {
        const Vec gg = g.grad(x);
        grad += gg / (-gv);
        hess += gg * gg.transpose() / (gv * gv);
      }
      if (g.hess_sparse) {
        for (const auto& tr : g.hess_sparse(x)) hess(tr.r, tr.c) += tr.v / (-gv);
      } else if (g.hess) {
        hess += g.hess(x) / (-gv);
      }
    }

    // Solve with escalating ridge if the factorization is indefinite.
    Vec dir;
    double ridge = 0.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Mat h = hess;
      if (ridge > 0.0) h.diagonal().array() += ridge;
      Eigen::LDLT<Mat> ldlt(h);
      if (ldlt.info() == Eigen::Success) {
        dir = ldlt.solve(-grad);
        if (dir.allFinite() && grad.dot(dir) < 0.0) break;
      }
      ridge = (ridge == 0.0) ? 1e-10 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff())
                             : ridge * 100.0;
      dir.resize(0);
    }
    if (dir.size() != n) break;  // numerically stuck

    const double decrement2 = -grad.dot(dir);
    if (0.5 * decrement2 <= opts.newton_tol) {
      out.converged = true;
      break;
    }

    const double f0 = barrier_value(x);
    double step = 1.0;
    const double slope = grad.dot(dir);
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Vec cand = x + step * dir;
      const double fc = barrier_value(cand);
      if (std::isfinite(fc) && fc <= f0 + 0.01 * step * slope) {
        x = cand;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++out.steps;
    if (!accepted) break;
  }
  out.x = std::move(x);
  return out;
}

}  // namespace

Phase1Result phase1_feasible(const ConvexProgram& p, const SolverOptions& opts) {
  std::vector<ConvexConstraint> gs = p.inequalities;
  append_box_constraints(p.lower, p.upper, p.dim, gs);

  Phase1Result res;
  Vec x = (p.x0.size() == p.dim) ? p.x0 : Vec::Zero(p.dim);
  if (p.x0.size() != p.dim && p.lower.size() == p.dim && p.upper.size() == p.dim) {
    for (int j = 0; j < p.dim; ++j) {
      if (std::isfinite(p.lower[j]) && std::isfinite(p.upper[j]))
        x[j] = 0.5 * (p.lower[j] + p.upper[j]);
    }
  }
  int worst = -1;
  double viol = max_violation(gs, x, &worst);
  if (viol < -opts.interior_margin) {
    res.feasible = true;
    res.x = x;
    return res;
  }

  // Augmented problem over (x, s): minimize s subject to g_i(x) - s <= 0.
  const int n = p.dim;
  Vec z(n + 1);
  z.head(n) = x;
  z << x, viol + std::max(1.0, std::abs(viol));

  SmoothFn f;
  f.value = [n](const Vec& y) { return y[n]; };
  f.grad = [n](const Vec& y) {
    Vec g = Vec::Zero(y.size());
    g[n] = 1.0;
    return g;
  };
  f.hess = [n](const Vec& y) { return Mat::Zero(y.size(), y.size()); };

  std::vector<ConvexConstraint> gs_aug;
  gs_aug.reserve(gs.size());
  for (const auto& g : gs) {
    ConvexConstraint a;
    a.value = [&g, n](const Vec& y) { return g.value(y.head(n)) - y[n]; };
    if (g.grad_sparse) {
      a.grad_sparse = [&g, n](const Vec& y) {
        SparseVec sv = g.grad_sparse(y.head(n));
        sv.emplace_back(n, -1.0);
        return sv;
      };
    } else {
      a.grad = [&g, n](const Vec& y) {
        Vec gg(n + 1);
        gg.head(n) = g.grad(y.head(n));
        gg[n] = -1.0;
        return gg;
      };
    }
    if (g.hess_sparse) {
      a.hess_sparse = [&g, n](const Vec& y) { return g.hess_sparse(y.head(n)); };
    } else if (g.hess) {
      a.hess = [&g, n](const Vec& y) {
        Mat h = Mat::Zero(n + 1, n + 1);
        h.topLeftCorner(n, n) = g.hess(y.head(n));
        return h;
      };
    }
    gs_aug.push_back(std::move(a));
  }

  const double target = -10.0 * opts.interior_margin;
  auto stop = [n, target](const Vec& y) { return y[n] < target; };

  double t = opts.t0;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    NewtonOutcome nw = newton_centering(f, gs_aug, t, z, opts, stop);
    z = nw.x;
    if (z[n] < target || nw.stopped) break;
    if (static_cast<double>(gs_aug.size()) / t <= 0.1 * opts.interior_margin) break;
    t *= opts.mu;
  }

  if (z[n] < 0.0 && max_violation(gs, z.head(n), &worst) < 0.0) {
    res.feasible = true;
    res.x = z.head(n);
  } else {
    res.feasible = false;
    max_violation(gs, z.head(n), &res.worst_constraint);
    res.max_violation = max_violation(gs, z.head(n));
    res.x = z.head(n);
  }
  return res;
}

SolveResult minimize(const ConvexProgram& p, const SolverOptions& opts) {
  std::vector<ConvexConstraint> gs = p.inequalities;
  append_box_constraints(p.lower, p.upper, p.dim, gs);

  SolveResult res;
  Vec x;
  if (p.x0.size() == p.dim && max_violation(gs, p.x0) < 0.0) {
    x = p.x0;
  } else {
    Phase1Result ph = phase1_feasible(p, opts);
    if (!ph.feasible) {
      res.status = SolveStatus::Infeasible;
      res.x = ph.x;
      res.objective_value = std::numeric_limits<double>::quiet_NaN();
      return res;
    }
    x = ph.x;
  }

  SmoothFn f{p.objective, p.objective_grad, p.objective_hess};
  const double m = static_cast<double>(gs.size());
  double t = opts.t0;
  bool gap_met = gs.empty();
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    NewtonOutcome nw = newton_centering(f, gs, t, x, opts, nullptr);
    x = nw.x;
    res.newton_steps += nw.steps;
    res.outer_iters = outer + 1;
    if (gs.empty()) {
      gap_met = nw.converged;
      break;
    }
    if (m / t <= opts.tol) {
      gap_met = true;
      break;
    }
    t *= opts.mu;
  }

  // KKT stationarity residual with barrier multipliers 1/(t * -g_i).
  Vec grad = p.objective_grad(x);
  for (const auto& g : gs) {
    const double gv = g.value(x);
    if (gv < 0.0) grad += constraint_grad_dense(g, x) / (t * (-gv));
  }
  res.kkt_residual = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
  res.x = x;
  res.objective_value = p.objective(x);
  res.status = gap_met ? SolveStatus::Optimal : SolveStatus::MaxIters;
  return res;
}

}  // namespace uavsec
