#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "eventwarp/types.hpp"

namespace eventwarp {

enum class CurveMode { standardized, raw_count };

/// One subject's ordered event times together with the cumulative curve
/// values observed at those times. Immutable after construction.
struct EventCurve {
  std::string id;
  Eigen::VectorXd times;
  Eigen::VectorXd values;
  Eigen::Index n_events = 0;  // true events, excluding anchor points
  bool anchored = false;
  CurveMode mode = CurveMode::standardized;
  Domain domain{0.0, 1.0};

  Eigen::Index size() const { return times.size(); }

  /// 0-based position of the last true event within times/values.
  Eigen::Index last_event_index() const { return anchored ? n_events : n_events - 1; }
};

/// Builds a curve from raw event times: sorts them, breaks ties by upward
/// eps_dup perturbation, and fills cumulative values ((k+1)/n standardized,
/// k+1 raw counts).
EventCurve build_curve(std::string id, std::vector<double> raw_event_times,
                       const Domain& domain, CurveMode mode = CurveMode::standardized);

/// Same, but with caller-supplied curve values (must be nondecreasing).
EventCurve build_curve_with_values(std::string id, std::vector<double> raw_event_times,
                                   std::vector<double> raw_values, const Domain& domain,
                                   CurveMode mode = CurveMode::standardized);

/// Prepends (t_min, 0) and appends (t_max, last value). Events colliding with
/// a domain endpoint are shifted inward by eps_dup before the anchors are
/// attached. Throws already_anchored on a second application.
EventCurve anchor_curve(const EventCurve& curve, const Domain& domain);

/// Strictly increasing time transformation represented by dense grid samples;
/// evaluation interpolates linearly between them. Endpoints are fixed.
struct WarpingFunction {
  Eigen::VectorXd grid;
  Eigen::VectorXd values;

  double operator()(double t) const;
  /// Exact inverse of the piecewise-linear representation (knots swapped).
  double inverse(double t) const;
};

}  // namespace eventwarp
