#ifndef UAVSEC_CHANNEL_HPP
#define UAVSEC_CHANNEL_HPP

#include <cmath>
#include <cstdint>

namespace uavsec {

/// Horizontal coordinate of a node, in distance-units.
struct Position2D {
  double x = 0.0;
  double y = 0.0;

  Position2D() = default;
  Position2D(double x_, double y_) : x(x_), y(y_) {}

  Position2D operator+(const Position2D& o) const { return {x + o.x, y + o.y}; }
  Position2D operator-(const Position2D& o) const { return {x - o.x, y - o.y}; }
  Position2D operator*(double s) const { return {x * s, y * s}; }
  double dot(const Position2D& o) const { return x * o.x + y * o.y; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

inline double horizontal_distance(const Position2D& a, const Position2D& b) {
  return (a - b).norm();
}

/// Air-to-ground channel parameters. All powers and gains are linear
/// milliwatts / dimensionless linear gains; see unit helpers below.
struct ChannelParams {
  double beta0 = 1e-3;    // LoS gain at reference distance
  double kappa = 0.2;     // extra NLoS attenuation, (0,1]
  double k1 = 10.0;       // LoS sigmoid constant
  double k2 = 0.6;        // LoS sigmoid constant
  double alpha = 2.5;     // path-loss exponent, [2,4]
  double beta_bar = 1.0;  // homogeneous mean attenuation (linear)
  double n0 = 1e-4;       // receiver noise power, mW
  double altitude = 1.5;  // UAV flying altitude H, distance-units
};

/// x dBm -> linear milliwatts.
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
/// x dB -> linear ratio.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double distance3d(const Position2D& q, const Position2D& w, double altitude);

/// Elevation-angle dependent LoS probability, monotone in theta.
double p_los(double theta, const ChannelParams& params);

/// beta0 * [P_LoS + kappa (1 - P_LoS)], in [kappa*beta0, beta0].
double regularized_attenuation(double theta, const ChannelParams& params);

/// Expected channel power gain beta_bar * d^-alpha under the homogeneous
/// mean-attenuation simplification. Rejects degenerate zero distance.
double expected_channel_power(const Position2D& q, const Position2D& w,
                              const ChannelParams& params);

/// Raw distance attenuation (||q-w||^2 + H^2)^(-alpha/2), no beta_bar factor.
double raw_path_gain(const Position2D& q, const Position2D& w,
                     const ChannelParams& params);

struct Region2D {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
};

/// Monte-Carlo mean of the regularized attenuation over elevation angles
/// induced by UAV positions sampled uniformly in `region` against ground
/// nodes sampled on the region floor. Deterministic for a given seed.
double estimate_beta_bar(const Region2D& region, std::int64_t samples,
                         const ChannelParams& params, std::uint64_t seed);

}  // namespace uavsec

#endif
