#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavsec/config.hpp"
#include "uavsec/report.hpp"

namespace {

uavsec::Scheme parse_scheme(const std::string& s) {
  if (s == "fuj") return uavsec::Scheme::FUJ;
  if (s == "gjt") return uavsec::Scheme::GJT;
  if (s == "woj") return uavsec::Scheme::WoJ;
  throw CLI::ValidationError("scheme must be fuj, gjt or woj");
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw CLI::ValidationError("invalid number in --values: " + part);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint trajectory and resource optimizer for the two-UAV "
               "secure-SWIPT mission"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", scheme_str, param, values_str;
  std::string schemes_str = "fuj,gjt,woj";
  bool baseline = false;
  int workers = 0;

  CLI::App* run = app.add_subcommand("run", "Optimize one mission");
  run->add_option("--config", config_path, "Mission config file")->required();
  run->add_option("--scheme", scheme_str, "Override the config scheme (fuj|gjt|woj)");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--baseline", baseline, "Report the initialization only");

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter");
  sweep->add_option("--config", config_path, "Mission config file")->required();
  sweep->add_option("--param", param,
                    "Swept parameter: eve_radius, eve_distance, mission_time")
      ->required();
  sweep->add_option("--values", values_str, "Comma-separated values")->required();
  sweep->add_option("--schemes", schemes_str, "Comma-separated schemes");
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--workers", workers,
                    "Parallel workers (default: UAVSEC_WORKERS or 1)");

  CLI11_PARSE(app, argc, argv);

  uavsec::MissionConfig cfg;
  try {
    cfg = uavsec::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (run->parsed()) {
      if (!scheme_str.empty()) cfg.scheme = parse_scheme(scheme_str);
      return uavsec::run_mission(cfg, out_dir, baseline);
    }
    std::vector<uavsec::Scheme> schemes;
    std::stringstream ss(schemes_str);
    std::string part;
    while (std::getline(ss, part, ',')) schemes.push_back(parse_scheme(part));
    return uavsec::run_sweep(cfg, param, parse_values(values_str), schemes,
                             out_dir, workers);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
