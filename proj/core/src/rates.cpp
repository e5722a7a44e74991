#include "uavsec/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace uavsec {

namespace {
constexpr double kLn2 = 0.6931471805599453;

// log2(1 + s_num / (s_den + 1)) evaluated with natural logs internally.
double capacity_bits(double signal, double interference) {
  return std::log1p(signal / (interference + 1.0)) / kLn2;
}
}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::FUJ: return "fuj";
    case Scheme::GJT: return "gjt";
    case Scheme::WoJ: return "woj";
  }
  return "?";
}

void Plan::set_size(std::size_t n) {
  p_s.assign(n, 0.0);
  p_j.assign(n, 0.0);
  zeta.assign(n, 0.0);
  q_s.assign(n, Position2D{});
  q_j.assign(n, Position2D{});
  t_slack.assign(n, 0.0);
  u_slack.assign(n, 0.0);
  s_log.assign(n, 0.0);
  v_log.assign(n, 0.0);
}

double worstcase_source_eve_dist2(const Position2D& q_s, const Geometry& geo) {
  const double r = horizontal_distance(q_s, geo.w_e_hat);
  const double shrunk = std::abs(r - geo.r_e);
  return shrunk * shrunk + geo.altitude * geo.altitude;
}

double worstcase_jammer_eve_dist2(const Position2D& q_j, const Geometry& geo) {
  const double r = horizontal_distance(q_j, geo.w_e_hat);
  const double grown = r + geo.r_e;
  return grown * grown + geo.altitude * geo.altitude;
}

double main_rate(const SlotState& slot, Scheme scheme, const Geometry& geo,
                 const ChannelParams& ch) {
  const double gamma_s = slot.p_s * ch.beta_bar / ch.n0;
  const double h_sd = raw_path_gain(slot.q_s, geo.w_d, ch);
  if (scheme == Scheme::FUJ) {
    return capacity_bits(gamma_s * slot.zeta * h_sd, 0.0);
  }
  const double gamma_j = (scheme == Scheme::WoJ) ? 0.0 : slot.p_j * ch.beta_bar / ch.n0;
  const double h_jd = raw_path_gain(slot.q_j, geo.w_d, ch);
  return capacity_bits(gamma_s * slot.zeta * h_sd, gamma_j * slot.zeta * h_jd);
}

double exact_eve_rate(const SlotState& slot, Scheme scheme, const Position2D& w_e,
                      const Geometry&, const ChannelParams& ch) {
  const double gamma_s = slot.p_s * ch.beta_bar / ch.n0;
  const double gamma_j = (scheme == Scheme::WoJ) ? 0.0 : slot.p_j * ch.beta_bar / ch.n0;
  const double h_se = raw_path_gain(slot.q_s, w_e, ch);
  const double h_je = raw_path_gain(slot.q_j, w_e, ch);
  return capacity_bits(gamma_s * h_se, gamma_j * h_je);
}

double worstcase_eve_rate(const SlotState& slot, Scheme scheme, const Geometry& geo,
                          const ChannelParams& ch) {
  const double gamma_s = slot.p_s * ch.beta_bar / ch.n0;
  const double gamma_j = (scheme == Scheme::WoJ) ? 0.0 : slot.p_j * ch.beta_bar / ch.n0;
  const double a2 = ch.alpha / 2.0;
  const double h_se = std::pow(worstcase_source_eve_dist2(slot.q_s, geo), -a2);
  const double h_je = std::pow(worstcase_jammer_eve_dist2(slot.q_j, geo), -a2);
  return capacity_bits(gamma_s * h_se, gamma_j * h_je);
}

double slot_secrecy(const SlotState& slot, Scheme scheme, const Geometry& geo,
                    const ChannelParams& ch) {
  return main_rate(slot, scheme, geo, ch) - worstcase_eve_rate(slot, scheme, geo, ch);
}

double harvested_power(const SlotState& slot, const Geometry& geo,
                       const ChannelParams& ch, double eta) {
  const double h_sd = raw_path_gain(slot.q_s, geo.w_d, ch);
  const double h_jd = raw_path_gain(slot.q_j, geo.w_d, ch);
  const double input = slot.p_s * ch.beta_bar * h_sd + slot.p_j * ch.beta_bar * h_jd + ch.n0;
  return eta * (1.0 - slot.zeta) * input;
}

double average_secrecy(const Plan& plan, Scheme scheme, const Geometry& geo,
                       const ChannelParams& ch, bool clamp) {
  const std::size_t n = plan.slots();
  if (n == 0) throw std::invalid_argument("average_secrecy: empty plan");
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = slot_secrecy(plan.slot(i), scheme, geo, ch);
    acc += clamp ? std::max(r, 0.0) : r;
  }
  return acc / static_cast<double>(n);
}

RateMetrics metrics(const Plan& plan, Scheme scheme, const Geometry& geo,
                    const ChannelParams& ch, double eta) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  RateMetrics m;
  const std::size_t n = plan.slots();
  m.per_slot.resize(n);
  double total_harvest = 0.0, total_tx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const SlotState s = plan.slot(i);
    SlotMetrics& sm = m.per_slot[i];
    const double sec = slot_secrecy(s, scheme, geo, ch);
    sm.isr = std::max(sec, 0.0);
    sm.harvested = harvested_power(s, geo, ch, eta);
    const double p_total = s.p_s + s.p_j;  // mW
    if (p_total > 0.0) {
      sm.isee = sm.isr / (p_total * 1e-3);  // per watt
      sm.harvest_efficiency = sm.harvested / p_total;
    } else {
      sm.isee = nan;
      sm.harvest_efficiency = nan;
    }
    m.asr_unclamped += sec;
    m.asr_clamped += sm.isr;
    m.ahe += sm.harvested;
    total_harvest += sm.harvested;
    total_tx += p_total;
  }
  m.asr_unclamped /= static_cast<double>(n);
  m.asr_clamped /= static_cast<double>(n);
  m.ahe /= static_cast<double>(n);
  m.harvest_ratio = (total_tx > 0.0) ? total_harvest / total_tx : nan;
  return m;
}

}  // namespace uavsec
