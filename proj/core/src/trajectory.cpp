#include "uavsec/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace uavsec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack on bounds that sit exactly on the expansion point, so the
// warm start is strictly interior for the barrier. Kept small enough that the
// admitted violation of the exact constraints stays below the validation
// tolerance (1e-9 absolute).
constexpr double kRelaxTight = 1e-10;
constexpr double kRelaxDisk = 1e-9;
// The per-slot harvest cap on the distance slack is redundant once the exact
// harvest disk is imposed on the position, so it can be held loosely.
constexpr double kRelaxHarvestSlack = 1e-6;
// Warm-start offset pushing slack variables off their active bounds.
constexpr double kNudge = 1e-7;
constexpr double kFeasTol = 1e-9;

Position2D get_q(const Vec& x, int ix, int iy, const Position2D& fix) {
  return (ix >= 0) ? Position2D{x[ix], x[iy]} : fix;
}

// ||u - v||^2 - rhs <= 0 where either endpoint may be a fixed point.
ConvexConstraint make_step(int dim, int ax, int ay, Position2D af, int bx, int by,
                           Position2D bf, double rhs) {
  (void)dim;
  ConvexConstraint c;
  c.value = [=](const Vec& x) {
    const Position2D d = get_q(x, ax, ay, af) - get_q(x, bx, by, bf);
    return d.norm2() - rhs;
  };
  c.grad_sparse = [=](const Vec& x) {
    const Position2D d = get_q(x, ax, ay, af) - get_q(x, bx, by, bf);
    SparseVec g;
    if (ax >= 0) {
      g.emplace_back(ax, 2.0 * d.x);
      g.emplace_back(ay, 2.0 * d.y);
    }
    if (bx >= 0) {
      g.emplace_back(bx, -2.0 * d.x);
      g.emplace_back(by, -2.0 * d.y);
    }
    return g;
  };
  SparseTriplets hs;
  if (ax >= 0) {
    hs.push_back({ax, ax, 2.0});
    hs.push_back({ay, ay, 2.0});
  }
  if (bx >= 0) {
    hs.push_back({bx, bx, 2.0});
    hs.push_back({by, by, 2.0});
  }
  if (ax >= 0 && bx >= 0) {
    hs.push_back({ax, bx, -2.0});
    hs.push_back({bx, ax, -2.0});
    hs.push_back({ay, by, -2.0});
    hs.push_back({by, ay, -2.0});
  }
  c.hess_sparse = [hs = std::move(hs)](const Vec&) { return hs; };
  return c;
}

// zone / harvest disk: ||q - w||^2 + offset - rhs <= 0.
ConvexConstraint make_disk(int dim, int ix, int iy, Position2D w, double offset,
                           double rhs) {
  return make_step(dim, ix, iy, {}, -1, -1, w, rhs - offset);
}

// Linearized collision avoidance (concave -||x-a||^2 replaced by its tangent
// at x_k): d2 + ||x_k||^2 - ||a||^2 - 2 (x_k - a)^T x <= 0, affine in x.
ConvexConstraint make_collision(int dim, int ix, int iy, Position2D xk,
                                Position2D a, double d2) {
  const double c0 = d2 + xk.norm2() - a.norm2();
  const Position2D w = (xk - a) * 2.0;
  (void)dim;
  ConvexConstraint c;
  c.value = [=](const Vec& x) { return c0 - w.x * x[ix] - w.y * x[iy]; };
  c.grad_sparse = [=](const Vec&) {
    return SparseVec{{ix, -w.x}, {iy, -w.y}};
  };
  return c;
}

double smooth_norm(const Position2D& d, double eps) {
  return std::sqrt(d.norm2() + eps * eps);
}

// log(1 + b e^x) evaluated stably, with its first two derivatives.
double softplus_b(double b, double x) {
  const double z = x + std::log(b);
  return z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}
double softplus_b_p(double b, double x) {
  const double z = x + std::log(b);
  return 1.0 / (1.0 + std::exp(-z));
}

void check_slot0_harvest(const Plan& plan, const Geometry& geo,
                         const ChannelParams& ch, double eta, double psi_h,
                         const char* block) {
  const double h = harvested_power(plan.slot(0), geo, ch, eta);
  if (h < psi_h - kFeasTol * std::max(1.0, psi_h))
    throw InfeasibleExpansion(std::string(block) +
                              ": pinned initial slot cannot meet the minimum "
                              "harvest requirement");
}

struct SourceSlot {
  double a = 0.0;    // main-link gain coefficient
  double b = 0.0;    // worst-case eavesdropper gain coefficient
  double c = 0.0;    // harvested power per unit path gain, mW
  double d = 0.0;    // position-independent harvested power, mW
  double rho = 0.0;  // harvest cap coefficient on the distance slack
  double t_k = 0.0;  // expansion value of the destination distance slack
  double u_k = 0.0;  // expansion value of the eavesdropper distance slack
};

SourceSlot source_slot_constants(const Plan& plan, std::size_t n, Scheme scheme,
                                 const Geometry& geo, const ChannelParams& ch,
                                 double eta, double psi_h) {
  SourceSlot s;
  const double zeta = plan.zeta[n];
  const double gs = ch.beta_bar * plan.p_s[n] / ch.n0;
  const double gj = ch.beta_bar * plan.p_j[n] / ch.n0;
  const double h_jd = raw_path_gain(plan.q_j[n], geo.w_d, ch);
  const double a2 = 0.5 * ch.alpha;
  s.a = (scheme == Scheme::GJT) ? zeta * gs / (zeta * gj * h_jd + 1.0) : zeta * gs;
  const double h_je = std::pow(worstcase_jammer_eve_dist2(plan.q_j[n], geo), -a2);
  s.b = (scheme == Scheme::WoJ) ? gs : gs / (gj * h_je + 1.0);
  s.c = eta * ch.beta_bar * (1.0 - zeta) * plan.p_s[n];
  s.d = eta * (1.0 - zeta) * (plan.p_j[n] * ch.beta_bar * h_jd + ch.n0);
  // Only impose the harvest constraint when the floor genuinely depends on
  // the source position; when d already covers Psi within tolerance the
  // difference Psi - d is pure cancellation noise and the resulting disk
  // radius would be garbage.
  const double need = psi_h - s.d;
  if (need > kFeasTol * std::max(1.0, psi_h)) {
    if (s.c > 0.0)
      s.rho = need / s.c;
    else
      throw InfeasibleExpansion(
          "source trajectory: slot " + std::to_string(n) +
          " transmits no power and cannot meet the harvest floor");
  }
  const double H2 = ch.altitude * ch.altitude;
  s.t_k = (plan.q_s[n] - geo.w_d).norm2() + H2;
  s.u_k = worstcase_source_eve_dist2(plan.q_s[n], geo);
  return s;
}

TrajBuild build_source_like(const Plan& plan, Scheme scheme, const Geometry& geo,
                            const ChannelParams& ch, double eta, double psi_h,
                            const TrajLimits& limits) {
  const std::size_t N = plan.slots();
  const double a2 = 0.5 * ch.alpha;
  const double H2 = ch.altitude * ch.altitude;
  const double eps = 1e-9;
  const double h_tilde2 = geo.r_e * geo.r_e + H2;

  TrajBuild b;
  b.qx.assign(N, -1);
  b.qy.assign(N, -1);
  b.aux1.assign(N, -1);
  b.aux2.assign(N, -1);

  check_slot0_harvest(plan, geo, ch, eta, psi_h, "source trajectory");

  std::vector<SourceSlot> ks(N);
  for (std::size_t n = 0; n < N; ++n)
    ks[n] = source_slot_constants(plan, n, scheme, geo, ch, eta, psi_h);

  int dim = 0;
  for (std::size_t n = 1; n < N; ++n) {
    b.qx[n] = dim++;
    b.qy[n] = dim++;
  }
  for (std::size_t n = 1; n < N; ++n) {
    if (ks[n].a > 0.0 || ks[n].rho > 0.0) b.aux1[n] = dim++;  // T slack
    if (ks[n].b > 0.0) b.aux2[n] = dim++;                     // U slack
  }
  b.prog.dim = dim;
  if (dim == 0) return b;

  // Objective: minimize sum_n -A_hat_n T_n + log(1 + B_n U_n^{-alpha/2}),
  // the negated concave surrogate of the block secrecy sum.
  Vec lin = Vec::Zero(dim);
  std::vector<std::pair<int, double>> uterms;
  for (std::size_t n = 1; n < N; ++n) {
    if (b.aux1[n] >= 0 && ks[n].a > 0.0) {
      const double tk = ks[n].t_k;
      lin[b.aux1[n]] = a2 * ks[n].a / (tk * (std::pow(tk, a2) + ks[n].a));
    }
    if (b.aux2[n] >= 0) uterms.emplace_back(b.aux2[n], ks[n].b);
  }
  b.prog.objective = [lin, uterms, a2](const Vec& x) {
    double f = lin.dot(x);
    for (const auto& [i, bc] : uterms) {
      if (x[i] <= 0.0) return kInf;
      f += std::log1p(bc * std::pow(x[i], -a2));
    }
    return f;
  };
  b.prog.objective_grad = [lin, uterms, a2](const Vec& x) {
    Vec g = lin;
    for (const auto& [i, bc] : uterms)
      g[i] += -a2 * bc / (x[i] * (std::pow(x[i], a2) + bc));
    return g;
  };
  b.prog.objective_hess = [dim, uterms, a2](const Vec& x) {
    Mat h = Mat::Zero(dim, dim);
    for (const auto& [i, bc] : uterms) {
      const double pw = std::pow(x[i], a2);
      h(i, i) += bc * a2 * ((a2 + 1.0) * pw + bc) /
                 (x[i] * x[i] * (pw + bc) * (pw + bc));
    }
    return h;
  };

  auto& gs = b.prog.inequalities;
  const double step2 = limits.d_step * limits.d_step * (1.0 + kRelaxTight);
  const double zone2 = geo.r_fly * geo.r_fly * (1.0 + kRelaxTight);
  const double d_safe2 = geo.d_safe * geo.d_safe * (1.0 - kRelaxTight);

  // Generous box bounds, always valid inside the flying zone. They never cut
  // the feasible set; their purpose is to keep the phase-I problem bounded
  // (the barrier otherwise drags unconstrained slack directions to infinity).
  b.prog.lower = Vec::Constant(dim, -kInf);
  b.prog.upper = Vec::Constant(dim, kInf);
  const double r_we = horizontal_distance(geo.w_e_hat, geo.w_d);
  const double t_max = 4.0 * (geo.r_fly * geo.r_fly + H2);
  const double u_max =
      4.0 * (std::pow(geo.r_fly + r_we + geo.r_e, 2.0) + H2);
  for (std::size_t n = 1; n < N; ++n) {
    b.prog.lower[b.qx[n]] = geo.w_d.x - 2.0 * geo.r_fly;
    b.prog.upper[b.qx[n]] = geo.w_d.x + 2.0 * geo.r_fly;
    b.prog.lower[b.qy[n]] = geo.w_d.y - 2.0 * geo.r_fly;
    b.prog.upper[b.qy[n]] = geo.w_d.y + 2.0 * geo.r_fly;
    if (b.aux1[n] >= 0) {
      b.prog.lower[b.aux1[n]] = 0.25 * H2;
      b.prog.upper[b.aux1[n]] = t_max;
    }
    if (b.aux2[n] >= 0) {
      b.prog.lower[b.aux2[n]] = 0.25 * H2;
      b.prog.upper[b.aux2[n]] = u_max;
    }
  }

  for (std::size_t n = 1; n < N; ++n) {
    const int ix = b.qx[n], iy = b.qy[n];
    // C6: per-slot displacement, previous endpoint pinned at n == 1.
    gs.push_back(make_step(dim, ix, iy, {}, b.qx[n - 1], b.qy[n - 1],
                           limits.q_initial, step2));
    // C12: circular flying zone around the destination.
    gs.push_back(make_disk(dim, ix, iy, geo.w_d, 0.0, zone2));
    // C11 (linearized): inter-UAV separation against the fixed jammer path.
    if (scheme != Scheme::WoJ)
      gs.push_back(
          make_collision(dim, ix, iy, plan.q_s[n], plan.q_j[n], d_safe2));
    if (b.aux1[n] >= 0) {
      // C16: the slack upper-bounds the true squared destination distance.
      const int it = b.aux1[n];
      ConvexConstraint c16 = make_disk(dim, ix, iy, geo.w_d, H2, 0.0);
      auto base_v = c16.value;
      auto base_g = c16.grad_sparse;
      c16.value = [base_v, it](const Vec& x) { return base_v(x) - x[it]; };
      c16.grad_sparse = [base_g, it](const Vec& x) {
        SparseVec g = base_g(x);
        g.emplace_back(it, -1.0);
        return g;
      };
      gs.push_back(std::move(c16));
      // C15 on the slack: rho T^{alpha/2} <= 1 (held loosely; the exact
      // harvest disk below is what pins the position).
      if (ks[n].rho > 0.0) {
        const double rho = ks[n].rho;
        const double cap = 1.0 + kRelaxHarvestSlack;
        ConvexConstraint c15;
        c15.value = [rho, a2, cap, it](const Vec& x) {
          return x[it] <= 0.0 ? kInf : rho * std::pow(x[it], a2) - cap;
        };
        c15.grad_sparse = [rho, a2, it](const Vec& x) {
          return SparseVec{{it, rho * a2 * std::pow(x[it], a2 - 1.0)}};
        };
        c15.hess_sparse = [rho, a2, it](const Vec& x) {
          return SparseTriplets{
              {it, it, rho * a2 * (a2 - 1.0) * std::pow(x[it], a2 - 2.0)}};
        };
        gs.push_back(std::move(c15));
      }
    }
    // C15 exactly, as a disk on the position: c ||q - w_d||^{-alpha} + d >= Psi.
    if (ks[n].rho > 0.0) {
      const double harvest_k = ks[n].c * std::pow(ks[n].t_k, -a2) + ks[n].d;
      if (harvest_k < psi_h - kFeasTol * std::max(1.0, psi_h))
        throw InfeasibleExpansion(
            "source trajectory: slot " + std::to_string(n) +
            " violates the harvest floor at the expansion point");
      // The disk must admit the expansion point: other blocks hold the floor
      // only up to their own tolerances, so the radius inferred from the
      // constants can fall just short of the current position.
      const double rpow = std::pow(1.0 / ks[n].rho, 2.0 / ch.alpha);
      const double rhs = std::max(rpow * (1.0 + kRelaxDisk),
                                  ks[n].t_k * (1.0 + kRelaxTight));
      gs.push_back(make_disk(dim, ix, iy, geo.w_d, H2, rhs));
    }
    // C17 (linearized): the eavesdropper slack lower-bounds the worst-case
    // squared distance; ||q - w_e||^2 replaced by its tangent at q_k.
    if (b.aux2[n] >= 0) {
      const int iu = b.aux2[n];
      const Position2D qk = plan.q_s[n];
      const Position2D we = geo.w_e_hat;
      const double re2 = 2.0 * geo.r_e;
      const double c0 = qk.norm2() - we.norm2() - h_tilde2;
      const Position2D w = (qk - we) * 2.0;
      ConvexConstraint c17;
      c17.value = [=](const Vec& x) {
        const Position2D q{x[ix], x[iy]};
        return x[iu] + re2 * smooth_norm(q - we, eps) - w.x * q.x - w.y * q.y +
               c0;
      };
      c17.grad_sparse = [=](const Vec& x) {
        const Position2D q{x[ix], x[iy]};
        const Position2D d = q - we;
        const double s = smooth_norm(d, eps);
        return SparseVec{
            {iu, 1.0}, {ix, re2 * d.x / s - w.x}, {iy, re2 * d.y / s - w.y}};
      };
      c17.hess_sparse = [=](const Vec& x) {
        const Position2D q{x[ix], x[iy]};
        const Position2D d = q - we;
        const double s = smooth_norm(d, eps);
        const double s3 = s * s * s;
        const double off = re2 * (-d.x * d.y) / s3;
        return SparseTriplets{{ix, ix, re2 * (s * s - d.x * d.x) / s3},
                              {iy, iy, re2 * (s * s - d.y * d.y) / s3},
                              {ix, iy, off},
                              {iy, ix, off}};
      };
      gs.push_back(std::move(c17));
    }
  }
  // C7: the final slot must be able to reach the terminal position.
  gs.push_back(make_step(dim, b.qx[N - 1], b.qy[N - 1], {}, -1, -1,
                         limits.q_final, step2));

  // Warm start at the expansion point, slacks nudged off their bounds.
  Vec x0(dim);
  for (std::size_t n = 1; n < N; ++n) {
    x0[b.qx[n]] = plan.q_s[n].x;
    x0[b.qy[n]] = plan.q_s[n].y;
    if (b.aux1[n] >= 0) x0[b.aux1[n]] = ks[n].t_k * (1.0 + kNudge);
    if (b.aux2[n] >= 0) x0[b.aux2[n]] = ks[n].u_k * (1.0 - kNudge);
  }
  b.prog.x0 = std::move(x0);
  return b;
}

struct JammerSlot {
  double a = 0.0, b = 0.0;  // main-link term log(1 + a/(b t^{-a2} + 1))
  double c = 0.0, d = 0.0;  // eavesdropper term log(1 + c/(d v^{-a2} + 1))
  double e = 0.0, f = 0.0;  // harvest floor e + f v_jd^{a2...}
  double s_k = 0.0;         // expansion value, (alpha/2) log dist2 to w_d
  double v_k = 0.0;         // expansion value, (alpha/2) log worst-case eve dist2
};

JammerSlot jammer_slot_constants(const Plan& plan, std::size_t n,
                                 const Geometry& geo, const ChannelParams& ch,
                                 double eta) {
  JammerSlot s;
  const double zeta = plan.zeta[n];
  const double gs = ch.beta_bar * plan.p_s[n] / ch.n0;
  const double gj = ch.beta_bar * plan.p_j[n] / ch.n0;
  const double h_sd = raw_path_gain(plan.q_s[n], geo.w_d, ch);
  const double a2 = 0.5 * ch.alpha;
  s.a = zeta * gs * h_sd;
  s.b = zeta * gj;
  s.c = gs * std::pow(worstcase_source_eve_dist2(plan.q_s[n], geo), -a2);
  s.d = gj;
  s.e = eta * (1.0 - zeta) * (plan.p_s[n] * ch.beta_bar * h_sd + ch.n0);
  s.f = eta * ch.beta_bar * (1.0 - zeta) * plan.p_j[n];
  const double H2 = ch.altitude * ch.altitude;
  s.s_k = a2 * std::log((plan.q_j[n] - geo.w_d).norm2() + H2);
  s.v_k = a2 * std::log(worstcase_jammer_eve_dist2(plan.q_j[n], geo));
  return s;
}

}  // namespace

TrajBuild build_source_subproblem(const Plan& plan, Scheme scheme,
                                  const Geometry& geo, const ChannelParams& ch,
                                  double eta, double psi_h,
                                  const TrajLimits& limits) {
  if (scheme == Scheme::WoJ)
    throw std::logic_error("use build_woj_subproblem for the WoJ scheme");
  return build_source_like(plan, scheme, geo, ch, eta, psi_h, limits);
}

TrajBuild build_woj_subproblem(const Plan& plan, const Geometry& geo,
                               const ChannelParams& ch, double eta, double psi_h,
                               const TrajLimits& limits) {
  return build_source_like(plan, Scheme::WoJ, geo, ch, eta, psi_h, limits);
}

TrajBuild build_jammer_subproblem(const Plan& plan, Scheme scheme,
                                  const Geometry& geo, const ChannelParams& ch,
                                  double eta, double psi_h,
                                  const TrajLimits& limits) {
  if (scheme == Scheme::WoJ)
    throw std::logic_error("the WoJ scheme has no jammer trajectory block");
  const std::size_t N = plan.slots();
  const double inv_a2 = 2.0 / ch.alpha;
  const double H2 = ch.altitude * ch.altitude;
  const double eps = 1e-9;
  const double h_tilde2 = geo.r_e * geo.r_e + H2;

  TrajBuild b;
  b.qx.assign(N, -1);
  b.qy.assign(N, -1);
  b.aux1.assign(N, -1);  // S~ (destination distance, log form)
  b.aux2.assign(N, -1);  // V~ (worst-case eve distance, log form)

  check_slot0_harvest(plan, geo, ch, eta, psi_h, "jammer trajectory");

  const double harvest_tol = kFeasTol * std::max(1.0, psi_h);
  std::vector<JammerSlot> ks(N);
  for (std::size_t n = 0; n < N; ++n) {
    ks[n] = jammer_slot_constants(plan, n, geo, ch, eta);
    if (psi_h - ks[n].e > harvest_tol && ks[n].f <= 0.0)
      throw InfeasibleExpansion(
          "jammer trajectory: slot " + std::to_string(n) +
          " has no harvestable jamming power (zeta at its cap or p_j = 0) "
          "yet the harvest floor binds");
  }

  int dim = 0;
  for (std::size_t n = 1; n < N; ++n) {
    b.qx[n] = dim++;
    b.qy[n] = dim++;
  }
  for (std::size_t n = 1; n < N; ++n) {
    // The main-link term exists only under GJT with live source and jammer
    // powers; the eavesdropper term needs both powers as well.
    if (scheme == Scheme::GJT && ks[n].a > 0.0 && ks[n].b > 0.0)
      b.aux1[n] = dim++;
    if (ks[n].c > 0.0 && ks[n].d > 0.0) b.aux2[n] = dim++;
  }
  b.prog.dim = dim;
  if (dim == 0) return b;

  // Surrogate objective (negated for minimization):
  //   sum_n -sigma1 S~ + log(1 + b1 e^{S~}) - sigma2 V~ + log(1 + b2 e^{V~}),
  // the convex terms log(1 + a_i e^x) having been replaced by their tangents.
  Vec lin = Vec::Zero(dim);
  std::vector<std::pair<int, double>> spterms;
  for (std::size_t n = 1; n < N; ++n) {
    if (b.aux1[n] >= 0) {
      const double a1 = (1.0 + ks[n].a) / ks[n].b;
      const double b1 = 1.0 / ks[n].b;
      lin[b.aux1[n]] = -softplus_b_p(a1, ks[n].s_k);
      spterms.emplace_back(b.aux1[n], b1);
    }
    if (b.aux2[n] >= 0) {
      const double a2c = 1.0 / ks[n].d;
      const double b2c = (1.0 + ks[n].c) / ks[n].d;
      lin[b.aux2[n]] = -softplus_b_p(a2c, ks[n].v_k);
      spterms.emplace_back(b.aux2[n], b2c);
    }
  }
  b.prog.objective = [lin, spterms](const Vec& x) {
    double f = lin.dot(x);
    for (const auto& [i, bc] : spterms) f += softplus_b(bc, x[i]);
    return f;
  };
  b.prog.objective_grad = [lin, spterms](const Vec& x) {
    Vec g = lin;
    for (const auto& [i, bc] : spterms) g[i] += softplus_b_p(bc, x[i]);
    return g;
  };
  b.prog.objective_hess = [dim, spterms](const Vec& x) {
    Mat h = Mat::Zero(dim, dim);
    for (const auto& [i, bc] : spterms) {
      const double p = softplus_b_p(bc, x[i]);
      h(i, i) += p * (1.0 - p);
    }
    return h;
  };

  auto& gs = b.prog.inequalities;
  const double step2 = limits.d_step * limits.d_step * (1.0 + kRelaxTight);
  const double zone2 = geo.r_fly * geo.r_fly * (1.0 + kRelaxTight);
  const double d_safe2 = geo.d_safe * geo.d_safe * (1.0 - kRelaxTight);

  // Generous, always-valid box bounds that keep phase I bounded (see the
  // source builder).
  b.prog.lower = Vec::Constant(dim, -kInf);
  b.prog.upper = Vec::Constant(dim, kInf);
  const double a2 = 0.5 * ch.alpha;
  const double r_we = horizontal_distance(geo.w_e_hat, geo.w_d);
  const double t_max = 4.0 * (geo.r_fly * geo.r_fly + H2);
  const double v_max =
      4.0 * (std::pow(geo.r_fly + r_we + geo.r_e, 2.0) + H2);
  for (std::size_t n = 1; n < N; ++n) {
    b.prog.lower[b.qx[n]] = geo.w_d.x - 2.0 * geo.r_fly;
    b.prog.upper[b.qx[n]] = geo.w_d.x + 2.0 * geo.r_fly;
    b.prog.lower[b.qy[n]] = geo.w_d.y - 2.0 * geo.r_fly;
    b.prog.upper[b.qy[n]] = geo.w_d.y + 2.0 * geo.r_fly;
    if (b.aux1[n] >= 0) {
      b.prog.lower[b.aux1[n]] = a2 * std::log(0.25 * H2);
      b.prog.upper[b.aux1[n]] = a2 * std::log(t_max);
    }
    if (b.aux2[n] >= 0) {
      b.prog.lower[b.aux2[n]] = a2 * std::log(0.25 * h_tilde2);
      b.prog.upper[b.aux2[n]] = a2 * std::log(v_max);
    }
  }

  for (std::size_t n = 1; n < N; ++n) {
    const int ix = b.qx[n], iy = b.qy[n];
    // C9: per-slot displacement.
    gs.push_back(make_step(dim, ix, iy, {}, b.qx[n - 1], b.qy[n - 1],
                           limits.q_initial, step2));
    // C13: flying zone.
    gs.push_back(make_disk(dim, ix, iy, geo.w_d, 0.0, zone2));
    // C11 (linearized) against the fixed source path.
    gs.push_back(make_collision(dim, ix, iy, plan.q_j[n], plan.q_s[n], d_safe2));

    if (b.aux1[n] >= 0) {
      const int is = b.aux1[n];
      // C16 (linearized): e^{(2/alpha) S~} <= tangent of ||q - w_d||^2 + H^2.
      const Position2D qk = plan.q_j[n];
      const double c0 = qk.norm2() - geo.w_d.norm2() - H2;
      const Position2D w = (qk - geo.w_d) * 2.0;
      ConvexConstraint c16;
      c16.value = [=](const Vec& x) {
        return std::exp(inv_a2 * x[is]) - w.x * x[ix] - w.y * x[iy] + c0;
      };
      c16.grad_sparse = [=](const Vec& x) {
        return SparseVec{{is, inv_a2 * std::exp(inv_a2 * x[is])},
                         {ix, -w.x},
                         {iy, -w.y}};
      };
      c16.hess_sparse = [=](const Vec& x) {
        return SparseTriplets{
            {is, is, inv_a2 * inv_a2 * std::exp(inv_a2 * x[is])}};
      };
      gs.push_back(std::move(c16));
      // C15 on the slack: (Psi - E) e^{S~} <= F (loose; exact disk below).
      if (psi_h - ks[n].e > harvest_tol) {
        const double coef = psi_h - ks[n].e;
        const double cap = ks[n].f * (1.0 + kRelaxHarvestSlack);
        ConvexConstraint c15;
        c15.value = [=](const Vec& x) { return coef * std::exp(x[is]) - cap; };
        c15.grad_sparse = [=](const Vec& x) {
          return SparseVec{{is, coef * std::exp(x[is])}};
        };
        c15.hess_sparse = [=](const Vec& x) {
          return SparseTriplets{{is, is, coef * std::exp(x[is])}};
        };
        gs.push_back(std::move(c15));
      }
    }
    // C15 exactly, as a disk on the position.
    if (psi_h - ks[n].e > harvest_tol) {
      const double t_k = (plan.q_j[n] - geo.w_d).norm2() + H2;
      const double harvest_k = ks[n].f * std::pow(t_k, -a2) + ks[n].e;
      if (harvest_k < psi_h - harvest_tol)
        throw InfeasibleExpansion(
            "jammer trajectory: slot " + std::to_string(n) +
            " violates the harvest floor at the expansion point");
      // Admit the expansion point (see the source-block disk for why).
      const double rpow = std::pow(ks[n].f / (psi_h - ks[n].e), 2.0 / ch.alpha);
      const double rhs = std::max(rpow * (1.0 + kRelaxDisk),
                                  t_k * (1.0 + kRelaxTight));
      gs.push_back(make_disk(dim, ix, iy, geo.w_d, H2, rhs));
    }
    if (b.aux2[n] >= 0) {
      const int iv = b.aux2[n];
      // C18 (linearized): worst-case eve distance in convex form against the
      // tangent of e^{(2/alpha) V~} at the expansion point.
      const Position2D we = geo.w_e_hat;
      const double re2 = 2.0 * geo.r_e;
      const double ev = std::exp(inv_a2 * ks[n].v_k);
      const double in_ = (1.0 - inv_a2 * ks[n].v_k) * ev;
      const double jn = inv_a2 * ev;
      ConvexConstraint c18;
      c18.value = [=](const Vec& x) {
        const Position2D q{x[ix], x[iy]};
        const Position2D d = q - we;
        return d.norm2() + re2 * smooth_norm(d, eps) + h_tilde2 - in_ -
               jn * x[iv];
      };
      c18.grad_sparse = [=](const Vec& x) {
        const Position2D q{x[ix], x[iy]};
        const Position2D d = q - we;
        const double s = smooth_norm(d, eps);
        return SparseVec{{ix, 2.0 * d.x + re2 * d.x / s},
                         {iy, 2.0 * d.y + re2 * d.y / s},
                         {iv, -jn}};
      };
      c18.hess_sparse = [=](const Vec& x) {
        const Position2D q{x[ix], x[iy]};
        const Position2D d = q - we;
        const double s = smooth_norm(d, eps);
        const double s3 = s * s * s;
        const double off = re2 * (-d.x * d.y) / s3;
        return SparseTriplets{{ix, ix, 2.0 + re2 * (s * s - d.x * d.x) / s3},
                              {iy, iy, 2.0 + re2 * (s * s - d.y * d.y) / s3},
                              {ix, iy, off},
                              {iy, ix, off}};
      };
      gs.push_back(std::move(c18));
    }
  }
  // C10: terminal reachability.
  gs.push_back(make_step(dim, b.qx[N - 1], b.qy[N - 1], {}, -1, -1,
                         limits.q_final, step2));

  Vec x0(dim);
  for (std::size_t n = 1; n < N; ++n) {
    x0[b.qx[n]] = plan.q_j[n].x;
    x0[b.qy[n]] = plan.q_j[n].y;
    if (b.aux1[n] >= 0) x0[b.aux1[n]] = ks[n].s_k - kNudge;
    if (b.aux2[n] >= 0) x0[b.aux2[n]] = ks[n].v_k + kNudge;
  }
  b.prog.x0 = std::move(x0);
  return b;
}

double source_block_objective(const Plan& plan, Scheme scheme, const Geometry& geo,
                              const ChannelParams& ch) {
  return average_secrecy(plan, scheme, geo, ch, false) *
         static_cast<double>(plan.slots()) * std::log(2.0);
}

double jammer_block_objective_traj(const Plan& plan, Scheme scheme,
                                   const Geometry& geo, const ChannelParams& ch) {
  return source_block_objective(plan, scheme, geo, ch);
}

namespace {

void refresh_source_slacks(Plan& plan, const Geometry& geo,
                           const ChannelParams& ch) {
  const double H2 = ch.altitude * ch.altitude;
  const std::size_t N = plan.slots();
  plan.t_slack.resize(N);
  plan.u_slack.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    plan.t_slack[n] = (plan.q_s[n] - geo.w_d).norm2() + H2;
    plan.u_slack[n] = worstcase_source_eve_dist2(plan.q_s[n], geo);
  }
}

void refresh_jammer_slacks(Plan& plan, const Geometry& geo,
                           const ChannelParams& ch) {
  const double a2 = 0.5 * ch.alpha;
  const double H2 = ch.altitude * ch.altitude;
  const std::size_t N = plan.slots();
  plan.s_log.resize(N);
  plan.v_log.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    plan.s_log[n] = a2 * std::log((plan.q_j[n] - geo.w_d).norm2() + H2);
    plan.v_log[n] = a2 * std::log(worstcase_jammer_eve_dist2(plan.q_j[n], geo));
  }
}

TrajBlockResult finish_block(std::vector<Position2D>& path,
                             const std::vector<Position2D>& cand_path,
                             double before, double after, SolveStatus status,
                             const TrajSolveOptions& opts) {
  TrajBlockResult res;
  res.status = status;
  res.objective_before = before;
  if (after >= before) {
    path = cand_path;
    res.accepted = true;
    res.objective_after = after;
    return res;
  }
  if (before - after > opts.decrease_fatal)
    throw std::logic_error(
        "trajectory block: surrogate solution decreased the exact objective "
        "beyond solver tolerance (" +
        std::to_string(before - after) + " nats)");
  // Tie within solver tolerance: keep the expansion point.
  res.accepted = false;
  res.objective_after = before;
  return res;
}

}  // namespace

TrajBlockResult solve_source_block(Plan& plan, Scheme scheme, const Geometry& geo,
                                   const ChannelParams& ch, double eta,
                                   double psi_h, const TrajLimits& limits,
                                   const TrajSolveOptions& opts) {
  const double before = source_block_objective(plan, scheme, geo, ch);
  TrajBuild b = build_source_like(plan, scheme, geo, ch, eta, psi_h, limits);
  TrajBlockResult res;
  if (b.prog.dim == 0) {
    res.objective_before = res.objective_after = before;
    refresh_source_slacks(plan, geo, ch);
    return res;
  }
  const SolveResult r = minimize(b.prog, opts.solver);
  if (r.status == SolveStatus::Infeasible)
    throw InfeasibleExpansion(
        "source trajectory: no strictly feasible point found around the "
        "current plan");
  Plan cand = plan;
  for (std::size_t n = 0; n < plan.slots(); ++n)
    if (b.qx[n] >= 0) cand.q_s[n] = {r.x[b.qx[n]], r.x[b.qy[n]]};
  const double after = source_block_objective(cand, scheme, geo, ch);
  res = finish_block(plan.q_s, cand.q_s, before, after, r.status, opts);
  refresh_source_slacks(plan, geo, ch);
  return res;
}

TrajBlockResult solve_jammer_block(Plan& plan, Scheme scheme, const Geometry& geo,
                                   const ChannelParams& ch, double eta,
                                   double psi_h, const TrajLimits& limits,
                                   const TrajSolveOptions& opts) {
  const double before = jammer_block_objective_traj(plan, scheme, geo, ch);
  TrajBuild b = build_jammer_subproblem(plan, scheme, geo, ch, eta, psi_h, limits);
  TrajBlockResult res;
  if (b.prog.dim == 0) {
    res.objective_before = res.objective_after = before;
    refresh_jammer_slacks(plan, geo, ch);
    return res;
  }
  const SolveResult r = minimize(b.prog, opts.solver);
  if (r.status == SolveStatus::Infeasible)
    throw InfeasibleExpansion(
        "jammer trajectory: no strictly feasible point found around the "
        "current plan");
  Plan cand = plan;
  for (std::size_t n = 0; n < plan.slots(); ++n)
    if (b.qx[n] >= 0) cand.q_j[n] = {r.x[b.qx[n]], r.x[b.qy[n]]};
  const double after = jammer_block_objective_traj(cand, scheme, geo, ch);
  res = finish_block(plan.q_j, cand.q_j, before, after, r.status, opts);
  refresh_jammer_slacks(plan, geo, ch);
  return res;
}

}  // namespace uavsec
