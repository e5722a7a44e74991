#ifndef UAVSEC_RATES_HPP
#define UAVSEC_RATES_HPP

#include <vector>

#include "uavsec/channel.hpp"

namespace uavsec {

enum class Scheme { FUJ, GJT, WoJ };

const char* scheme_name(Scheme s);

/// One time slot's decision variables. Powers in mW; WoJ forces p_j = 0.
struct SlotState {
  double p_s = 0.0;
  double p_j = 0.0;
  double zeta = 0.0;  // power splitting ratio, [0,1)
  Position2D q_s;
  Position2D q_j;
};

/// Mission geometry: destination, estimated eavesdropper disk, flying zone.
struct Geometry {
  Position2D w_d;        // destination
  Position2D w_e_hat;    // most-likely eavesdropper location
  double r_e = 0.0;      // maximum estimation error radius
  double altitude = 1.5; // H
  double r_fly = 0.0;    // permitted flying radius around w_d
  double d_safe = 0.0;   // inter-UAV safety distance
};

/// Squared worst-case source-eavesdropper distance term,
/// (| ||q_s - w_e_hat|| - R_E |)^2 + H^2, always >= H^2.
double worstcase_source_eve_dist2(const Position2D& q_s, const Geometry& geo);

/// Squared worst-case jammer-eavesdropper distance term,
/// (||q_j - w_e_hat|| + R_E)^2 + H^2.
double worstcase_jammer_eve_dist2(const Position2D& q_j, const Geometry& geo);

/// Main-link rate in bits/s/Hz. GJT sees residual jamming; FUJ cancels it;
/// WoJ has no jammer.
double main_rate(const SlotState& slot, Scheme scheme, const Geometry& geo,
                 const ChannelParams& ch);

/// Wiretap rate at a known eavesdropper position.
double exact_eve_rate(const SlotState& slot, Scheme scheme, const Position2D& w_e,
                      const Geometry& geo, const ChannelParams& ch);

/// Worst-case wiretap rate over the R_E uncertainty disk (source distance
/// shrunk, jammer distance grown by R_E).
double worstcase_eve_rate(const SlotState& slot, Scheme scheme, const Geometry& geo,
                          const ChannelParams& ch);

/// Smooth per-slot secrecy rate: main minus worst-case eavesdropper rate,
/// without the positive-part clamp. May be negative.
double slot_secrecy(const SlotState& slot, Scheme scheme, const Geometry& geo,
                    const ChannelParams& ch);

/// Power routed to the harvester in one slot, mW.
double harvested_power(const SlotState& slot, const Geometry& geo,
                       const ChannelParams& ch, double eta);

/// N-slot plan of all decision variables plus SCA slack caches.
struct Plan {
  std::vector<double> p_s, p_j, zeta;
  std::vector<Position2D> q_s, q_j;
  // SCA expansion caches (squared-distance surrogates for the trajectory blocks)
  std::vector<double> t_slack, u_slack;  // source block
  std::vector<double> s_log, v_log;      // jammer block, (alpha/2)*log form

  std::size_t slots() const { return p_s.size(); }
  SlotState slot(std::size_t n) const {
    return {p_s[n], p_j[n], zeta[n], q_s[n], q_j[n]};
  }
  void set_size(std::size_t n);
};

/// Mean per-slot secrecy rate; clamped per slot at zero when `clamp` is set
/// (reporting convention), unclamped otherwise (optimization objective).
double average_secrecy(const Plan& plan, Scheme scheme, const Geometry& geo,
                       const ChannelParams& ch, bool clamp);

struct SlotMetrics {
  double isr = 0.0;              // clamped instantaneous secrecy rate
  double harvested = 0.0;        // mW
  double isee = 0.0;             // bits/s/Hz per watt; NaN when power is zero
  double harvest_efficiency = 0.0;  // harvested / transmit; NaN when power is zero
};

struct RateMetrics {
  std::vector<SlotMetrics> per_slot;
  double asr_clamped = 0.0;
  double asr_unclamped = 0.0;
  double ahe = 0.0;            // mean harvested power, mW
  double harvest_ratio = 0.0;  // total harvested / total transmit
};

RateMetrics metrics(const Plan& plan, Scheme scheme, const Geometry& geo,
                    const ChannelParams& ch, double eta);

}  // namespace uavsec

#endif
