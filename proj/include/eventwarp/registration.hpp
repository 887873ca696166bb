#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "eventwarp/event_curve.hpp"
#include "eventwarp/pairwise_warp.hpp"

namespace eventwarp {

/// Per-curve warping estimate: h_i^{-1} sampled at the curve's (anchored)
/// event times, optionally interpolated onto a common grid.
struct WarpingEstimate {
  std::string curve_id;
  Eigen::VectorXd event_times;
  Eigen::VectorXd h_inv_values;
  Eigen::VectorXd grid;  // empty until to_common_grid fills it
  Eigen::VectorXd grid_values;
};

struct RegisteredCurve {
  std::string curve_id;
  Eigen::VectorXd times;  // h_i^{-1}(t_ik)
  Eigen::VectorXd values;
};

struct MeanCurve {
  Eigen::VectorXd grid;
  Eigen::VectorXd mean_values;
};

struct RegistrationOptions {
  double delta = 0.05;
  Metric metric;
  bool force_last_event = false;
  /// Re-center the estimates so their cross-sample average is the identity.
  bool recenter = false;
  int threads = 1;  // 0 = all hardware threads
};

struct RegistrationStats {
  Eigen::Index pair_count = 0;
  double pairwise_seconds = 0.0;
};

/// Estimates h_i^{-1} for every curve as the average over j != i of the
/// pairwise map g_ji sampled at curve i's event grid. Each of the n(n-1)/2
/// pairs is aligned exactly once; both directional maps come from that single
/// path. Pairs are processed in parallel but summed in a fixed order, so the
/// result is independent of the thread count.
std::vector<WarpingEstimate> estimate_warpings(const std::vector<EventCurve>& curves,
                                               const RegistrationOptions& options = {},
                                               RegistrationStats* stats = nullptr);

/// Fills grid/grid_values by linear interpolation of (event_times,
/// h_inv_values) augmented with the domain endpoints, on a uniform grid.
WarpingEstimate to_common_grid(WarpingEstimate estimate, Eigen::Index grid_size,
                               const Domain& domain);

/// Replaces the curve's event times by the estimated h_i^{-1}(t_ik); values
/// are untouched.
RegisteredCurve register_curve(const EventCurve& curve, const WarpingEstimate& estimate);

/// Pointwise mean of the curves interpolated on a uniform grid (boundary
/// values extend as steps beyond the first/last knot).
MeanCurve mean_curve(const std::vector<RegisteredCurve>& registered, const Domain& domain,
                     Eigen::Index grid_size);

/// Group-wise means, keyed by label.
std::map<int, MeanCurve> group_means(const std::vector<RegisteredCurve>& registered,
                                     const std::vector<int>& labels, const Domain& domain,
                                     Eigen::Index grid_size);

}  // namespace eventwarp
