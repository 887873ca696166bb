#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "eventwarp/event_curve.hpp"
#include "eventwarp/types.hpp"

namespace eventwarp {

/// One lattice step of an alignment path: which sequence advances.
/// both = (1,1), source = (1,0), target = (0,1).
enum class Move : std::uint8_t { both = 0, source = 1, target = 2 };

inline Eigen::Index source_delta(Move m) { return m == Move::target ? 0 : 1; }
inline Eigen::Index target_delta(Move m) { return m == Move::source ? 0 : 1; }

/// Monotone lattice path pairing the elements of two sequences. The first
/// step is always Move::both: the sequences' first elements are aligned by
/// construction, as are their last ones (the path ends at (source_len,
/// target_len)).
struct Alignment {
  Eigen::Index source_len = 0;
  Eigen::Index target_len = 0;
  std::vector<Move> steps;

  Eigen::Index length() const { return static_cast<Eigen::Index>(steps.size()); }
};

/// Cumulative sums (L_r, M_r) of the steps, 1-based.
std::vector<std::pair<Eigen::Index, Eigen::Index>> lattice_path(const Alignment& alignment);

/// True if a source-only step is adjacent to a target-only step anywhere.
bool violates_adjacency_rule(const Alignment& alignment);

/// Throws shape_mismatch unless the steps form a monotone path from (1,1) to
/// (source_len, target_len) starting with Move::both.
void validate_alignment(const Alignment& alignment);

using Metric = std::function<double(double, double)>;

struct AlignOptions {
  Metric metric;  // empty = absolute difference
  /// 1-based (source, target) index pairs the path must pass through, sorted.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> forced_pairs;
};

struct AlignResult {
  Alignment alignment;
  double cost = 0.0;
};

/// Optimal weighted alignment of two sequences sampled at the given times.
///
/// Minimizes sum_k w(k) d(a_{L_k}, b_{M_k}) with the Kruskal-Liberman weights
/// w(k) = (t_{L_k} - t_{L_{k-1}} + s_{M_k} - s_{M_{k-1}})/2 (zero for the
/// forced first pair) over all monotone paths in which a source-only step is
/// never adjacent to a target-only step. The search is exact: the dynamic
/// program carries the incoming step as part of the state, so the adjacency
/// exclusion cannot hide the optimum. Ties prefer both, then source, then
/// target moves, making the result deterministic.
AlignResult align_sequences(const Eigen::Ref<const Eigen::VectorXd>& source_times,
                            const Eigen::Ref<const Eigen::VectorXd>& source_values,
                            const Eigen::Ref<const Eigen::VectorXd>& target_times,
                            const Eigen::Ref<const Eigen::VectorXd>& target_values,
                            const AlignOptions& options = {});

/// Curve front end of align_sequences; both curves must be anchored on the
/// same domain.
AlignResult align(const EventCurve& a, const EventCurve& b, const AlignOptions& options = {});

/// Alignment distance of a given path (direct evaluation, no optimization).
double alignment_cost(const Alignment& alignment,
                      const Eigen::Ref<const Eigen::VectorXd>& source_times,
                      const Eigen::Ref<const Eigen::VectorXd>& source_values,
                      const Eigen::Ref<const Eigen::VectorXd>& target_times,
                      const Eigen::Ref<const Eigen::VectorXd>& target_values,
                      const Metric& metric = {});

/// Every admissible alignment of sequences with the given lengths. Guarded to
/// lengths <= 8; the count grows exponentially.
std::vector<Alignment> enumerate_alignments(Eigen::Index source_len, Eigen::Index target_len);

/// Number of dynamic programs executed so far (pair bookkeeping).
std::uint64_t alignment_run_count();
void reset_alignment_run_count();

}  // namespace eventwarp
