#ifndef UAVSEC_CONFIG_HPP
#define UAVSEC_CONFIG_HPP

#include <stdexcept>
#include <string>

#include "uavsec/planner.hpp"

namespace uavsec {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses a flat key = value mission config (# comments, blank lines).
/// Unknown keys are errors carrying the line number; omitted keys take the
/// defaults of the reference scenario. Derived quantities (budgets from the
/// dBm totals, zone/eve radii from the altitude factors) are resolved here.
MissionConfig load_config(const std::string& path);

/// Same parser over an in-memory string; `origin` labels error messages.
MissionConfig parse_config(const std::string& text,
                           const std::string& origin = "<string>");

/// The full default configuration (equivalent to an empty config file).
MissionConfig default_config();

}  // namespace uavsec

#endif
