#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "standby/dist.hpp"
#include "standby/invert.hpp"
#include "standby/sim.hpp"

namespace standby {

/// Fully validated run configuration, parsed from the JSON config file.
struct RunConfig {
  int n = 2;
  double mu = 1.0;
  DistributionSpec dist = DistributionSpec::exponential(1.0);
  int j0 = 1;
  std::uint64_t seed = 1;
  std::int64_t samples = 10000;
  Engine engine = Engine::EmbeddedChain;
  InversionSettings inversion;
  std::vector<double> invert_t_grid;
  std::vector<std::complex<double>> lst_s_grid = {{0.1, 0}, {1, 0}, {10, 0}};
  std::vector<double> sweep_mu_list;
  std::vector<double> sweep_s_grid = {0.25, 1.0, 4.0};
  std::string out_dir = ".";
  std::set<std::string> formats = {"csv", "json"};
};

/// Parse and validate a JSON config. Unknown keys are hard errors; every
/// constraint violation names the offending field.
RunConfig parse_config(const std::string& text);

/// FNV-1a hash of the canonical serialized config; embedded in every
/// output file so artifacts can be traced back to their inputs.
std::uint64_t config_hash(const RunConfig& config);

/// Exit codes: 0 ok, 1 validation failure, 2 numerical failure,
/// 3 I/O failure. Failures also emit a JSON error record to `err`.
int dispatch(const std::string& subcommand, const RunConfig& config,
             std::ostream& out, std::ostream& err);

}  // namespace standby
