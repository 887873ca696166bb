#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "eventwarp/dtw.hpp"
#include "eventwarp/event_curve.hpp"

namespace eventwarp {

/// Discrete pairwise synchronization map: source event times together with
/// their positions on the target curve's time scale.
struct PairwiseWarp {
  std::string source_id;
  std::string target_id;
  Eigen::VectorXd source_times;
  Eigen::VectorXd mapped_times;
  double delta = 0.05;
};

/// Per-point correspondence read off an alignment path (0-based indices).
/// alpha[k] is the first target index aligned to source point k; beta is the
/// symmetric source index per target point.
struct Correspondence {
  std::vector<Eigen::Index> alpha;
  std::vector<Eigen::Index> beta;
};

Correspondence extract_correspondence(const Alignment& alignment);

/// A mapped time fixed in advance (anchors, forced event pairs). Pins survive
/// spreading and the monotone repair untouched.
struct Pin {
  Eigen::Index index = 0;  // 0-based position in the source grid
  double value = 0.0;
};

/// Places each source point on the target time scale. Uniquely mapped points
/// land exactly on their target time; a run of H >= 2 points sharing one
/// target is spread symmetrically around it so that the slope over the run
/// equals delta. Runs whose spread collides with a neighbor are shrunk by
/// halving until the whole map is strictly increasing.
Eigen::VectorXd warp_times(const std::vector<Eigen::Index>& alpha,
                           const Eigen::Ref<const Eigen::VectorXd>& source_times,
                           const Eigen::Ref<const Eigen::VectorXd>& target_times, double delta,
                           const std::vector<Pin>& pins = {});

struct WarpPairOptions {
  double delta = 0.05;
  Metric metric;
  bool force_last_event = false;
};

struct WarpPairResult {
  PairwiseWarp forward;   // source = a
  PairwiseWarp backward;  // source = b
  AlignResult alignment;
};

/// Aligns two anchored curves once and derives both directional maps from the
/// single path. Anchor endpoints are pinned to the domain endpoints; with
/// force_last_event the curves' last true events are pinned to each other.
WarpPairResult warp_pair(const EventCurve& a, const EventCurve& b,
                         const WarpPairOptions& options = {});

}  // namespace eventwarp
