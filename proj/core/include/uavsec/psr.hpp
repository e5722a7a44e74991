#ifndef UAVSEC_PSR_HPP
#define UAVSEC_PSR_HPP

#include "uavsec/rates.hpp"

namespace uavsec {

/// Auxiliary constants of the per-slot power-splitting subproblem.
struct PsrConstants {
  double a = 0.0;  // main-link SNR gain per unit zeta
  double b = 0.0;  // jamming interference gain per unit zeta (0 for FUJ/WoJ)
  double c = 0.0;  // total received power at the destination, mW
};

PsrConstants psr_constants(const SlotState& slot, Scheme scheme,
                           const Geometry& geo, const ChannelParams& ch);

/// Closed-form optimal split: the rate is increasing in zeta, so the
/// harvesting cap [1 - Psi_H/(eta c)]_+ is the argmax, held just below 1.
double optimal_psr(const PsrConstants& k, double eta, double psi_h);

}  // namespace uavsec

#endif
