#include "uavsec/psr.hpp"

#include <algorithm>

namespace uavsec {

namespace {
constexpr double kZetaCap = 1.0 - 1e-9;  // C14 is a strict inequality
}

PsrConstants psr_constants(const SlotState& slot, Scheme scheme,
                           const Geometry& geo, const ChannelParams& ch) {
  const double h_sd = raw_path_gain(slot.q_s, geo.w_d, ch);
  const double h_jd = raw_path_gain(slot.q_j, geo.w_d, ch);
  const double gamma_s = slot.p_s * ch.beta_bar / ch.n0;
  const double gamma_j = slot.p_j * ch.beta_bar / ch.n0;

  PsrConstants k;
  k.a = gamma_s * h_sd;
  // Under GJT the cap accounts for the full incident power; FUJ and WoJ use
  // the source-only term, which makes their caps conservative and leaves the
  // harvested power above the floor whenever a jammer is present.
  k.b = (scheme == Scheme::GJT) ? gamma_j * h_jd : 0.0;
  k.c = slot.p_s * ch.beta_bar * h_sd + ch.n0;
  if (scheme == Scheme::GJT) k.c += slot.p_j * ch.beta_bar * h_jd;
  return k;
}

double optimal_psr(const PsrConstants& k, double eta, double psi_h) {
  if (k.c <= 0.0) return 0.0;
  const double cap = 1.0 - psi_h / (eta * k.c);
  return std::clamp(cap, 0.0, kZetaCap);
}

}  // namespace uavsec
