#pragma once

#include <iosfwd>
#include <string>

#include "eventwarp/cluster.hpp"
#include "eventwarp/synth.hpp"

namespace eventwarp {

/// Everything a CLI run needs; downstream parameter constraints are checked
/// before any work starts.
struct RunConfig {
  std::string input;
  std::string out_dir = ".";
  Domain domain{0.0, 1.0};
  CurveMode mode = CurveMode::standardized;
  double delta = 0.05;
  Eigen::Index grid_size = 101;
  bool force_last_event = false;
  bool recenter = false;
  int k = 0;  // 0 = scan k_min..k_max
  int k_min = 2;
  int k_max = 10;
  std::uint64_t seed = 1;
  int n_init = 20;
  int max_iter = 100;
  int threads = 1;
  std::string id_a, id_b;      // align
  std::string warpings_input;  // cluster: reuse a warpings.csv instead of raw events
  WarpScenario scenario;       // simulate
};

/// Exit codes: 0 success, 2 usage/validation, 1 internal error.
int cmd_align(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_register(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_cluster(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace eventwarp
