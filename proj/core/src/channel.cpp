#include "uavsec/channel.hpp"

#include <random>
#include <stdexcept>

namespace uavsec {

double distance3d(const Position2D& q, const Position2D& w, double altitude) {
  return std::sqrt((q - w).norm2() + altitude * altitude);
}

double p_los(double theta, const ChannelParams& params) {
  return 1.0 / (1.0 + params.k1 * std::exp(-params.k2 * (theta - params.k1)));
}

double regularized_attenuation(double theta, const ChannelParams& params) {
  const double p = p_los(theta, params);
  return params.beta0 * (p + params.kappa * (1.0 - p));
}

double expected_channel_power(const Position2D& q, const Position2D& w,
                              const ChannelParams& params) {
  const double d = distance3d(q, w, params.altitude);
  if (d <= 0.0) throw std::domain_error("expected_channel_power: zero distance");
  return params.beta_bar * std::pow(d, -params.alpha);
}

double raw_path_gain(const Position2D& q, const Position2D& w,
                     const ChannelParams& params) {
  const double d2 = (q - w).norm2() + params.altitude * params.altitude;
  return std::pow(d2, -params.alpha / 2.0);
}

double estimate_beta_bar(const Region2D& region, std::int64_t samples,
                         const ChannelParams& params, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("estimate_beta_bar: samples < 1");
  if (region.x_max < region.x_min || region.y_max < region.y_min)
    throw std::invalid_argument("estimate_beta_bar: empty region");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(region.x_min, region.x_max);
  std::uniform_real_distribution<double> uy(region.y_min, region.y_max);

  double acc = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const Position2D uav{ux(rng), uy(rng)};
    const Position2D ground{ux(rng), uy(rng)};
    const double d = distance3d(uav, ground, params.altitude);
    const double theta = std::atan(params.altitude / d);
    acc += regularized_attenuation(theta, params);
  }
  return acc / static_cast<double>(samples);
}

}  // namespace uavsec
