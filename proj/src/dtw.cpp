#include "eventwarp/dtw.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>

namespace eventwarp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::atomic<std::uint64_t> g_run_count{0};

double abs_metric(double x, double y) { return std::abs(x - y); }

using PredMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// One rectangle of the dynamic program. States are indexed by the Move that
// entered the cell; carrying that state makes the adjacency exclusion exact
// instead of depending on which predecessor happened to win its cell. Costs
// live in two rolling columns; only the predecessor states survive for the
// traceback, packed as one byte per cell (2 bits per arrival state).
struct SegmentDP {
  Eigen::Index i0 = 1, j0 = 1;  // absolute 1-based origin
  Eigen::Index rows = 0, cols = 0;
  PredMatrix pred;
  std::array<double, 3> end_costs{};

  int pred_state(Eigen::Index r, Eigen::Index c, int state) const {
    return (pred(r, c) >> (2 * state)) & 0x3;
  }
};

int best_state(const std::array<double, 3>& c) {
  int bs = 0;
  for (int st = 1; st < 3; ++st)
    if (c[st] < c[bs]) bs = st;
  return bs;
}

using StateColumns = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

// Templated on the metric so the default absolute difference inlines into
// the cell loop. pred cells are written before any traceback can read them,
// so the matrix starts uninitialized.
template <class MetricFn>
SegmentDP solve_segment(const Eigen::Ref<const Eigen::VectorXd>& t,
                        const Eigen::Ref<const Eigen::VectorXd>& a,
                        const Eigen::Ref<const Eigen::VectorXd>& s,
                        const Eigen::Ref<const Eigen::VectorXd>& b, const MetricFn& metric,
                        Eigen::Index i0, Eigen::Index j0, Eigen::Index i1, Eigen::Index j1,
                        const std::array<double, 3>& init) {
  SegmentDP dp;
  dp.i0 = i0;
  dp.j0 = j0;
  dp.rows = i1 - i0 + 1;
  dp.cols = j1 - j0 + 1;
  dp.pred.resize(dp.rows, dp.cols);

  StateColumns prev(dp.rows, 3), cur(dp.rows, 3);
  cur(0, 0) = init[0];
  cur(0, 1) = init[1];
  cur(0, 2) = init[2];
  for (Eigen::Index r = 1; r < dp.rows; ++r) {  // first column: source-only chain
    const Eigen::Index i = i0 + r;
    const double w = metric(a(i - 1), b(j0 - 1)) * (t(i - 1) - t(i - 2)) / 2.0;
    const std::uint8_t arg = cur(r - 1, 0) <= cur(r - 1, 1) ? 0 : 1;
    cur(r, 1) = std::min(cur(r - 1, 0), cur(r - 1, 1)) + w;
    cur(r, 0) = kInf;
    cur(r, 2) = kInf;
    dp.pred(r, 0) = static_cast<std::uint8_t>(arg << 2);
  }

  for (Eigen::Index c = 1; c < dp.cols; ++c) {
    prev.swap(cur);
    const Eigen::Index j = j0 + c;
    const double ds = s(j - 1) - s(j - 2);
    {  // first row: target-only chain
      const double w = metric(a(i0 - 1), b(j - 1)) * ds / 2.0;
      const std::uint8_t arg = prev(0, 0) <= prev(0, 2) ? 0 : 2;
      cur(0, 2) = std::min(prev(0, 0), prev(0, 2)) + w;
      cur(0, 0) = kInf;
      cur(0, 1) = kInf;
      dp.pred(0, c) = static_cast<std::uint8_t>(arg << 4);
    }
    for (Eigen::Index r = 1; r < dp.rows; ++r) {
      const Eigen::Index i = i0 + r;
      const double dt = t(i - 1) - t(i - 2);
      const double dval = metric(a(i - 1), b(j - 1));

      // diagonal arrival accepts any predecessor state
      double best = prev(r - 1, 0);
      std::uint8_t arg_diag = 0;
      if (prev(r - 1, 1) < best) {
        best = prev(r - 1, 1);
        arg_diag = 1;
      }
      if (prev(r - 1, 2) < best) {
        best = prev(r - 1, 2);
        arg_diag = 2;
      }
      cur(r, 0) = best + dval * (dt + ds) / 2.0;

      // source-only arrival: predecessor must not be target-only
      const std::uint8_t arg_src = cur(r - 1, 0) <= cur(r - 1, 1) ? 0 : 1;
      cur(r, 1) = std::min(cur(r - 1, 0), cur(r - 1, 1)) + dval * dt / 2.0;

      // target-only arrival: predecessor must not be source-only
      const std::uint8_t arg_tgt = prev(r, 0) <= prev(r, 2) ? 0 : 2;
      cur(r, 2) = std::min(prev(r, 0), prev(r, 2)) + dval * ds / 2.0;

      dp.pred(r, c) = static_cast<std::uint8_t>(arg_diag | (arg_src << 2) | (arg_tgt << 4));
    }
  }
  dp.end_costs = {cur(dp.rows - 1, 0), cur(dp.rows - 1, 1), cur(dp.rows - 1, 2)};
  return dp;
}

// Walks pred pointers from the segment's end cell (in the given state) back
// to its origin. Returns the moves after the origin plus the origin's state.
std::pair<std::vector<Move>, int> traceback_segment(const SegmentDP& dp, int end_state) {
  std::vector<Move> moves;
  Eigen::Index r = dp.rows - 1, c = dp.cols - 1;
  int st = end_state;
  while (!(r == 0 && c == 0)) {
    const Move mv = static_cast<Move>(st);
    moves.push_back(mv);
    const int prev = dp.pred_state(r, c, st);
    r -= source_delta(mv);
    c -= target_delta(mv);
    st = prev;
  }
  std::reverse(moves.begin(), moves.end());
  return {moves, st};
}

void check_strictly_increasing(const Eigen::Ref<const Eigen::VectorXd>& t, const char* what) {
  for (Eigen::Index k = 1; k < t.size(); ++k)
    if (!(t(k) > t(k - 1)))
      throw Error(Errc::shape_mismatch, std::string(what) + " times must be strictly increasing");
}

}  // namespace

std::vector<std::pair<Eigen::Index, Eigen::Index>> lattice_path(const Alignment& alignment) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> path;
  path.reserve(alignment.steps.size());
  Eigen::Index L = 0, M = 0;
  for (Move mv : alignment.steps) {
    L += source_delta(mv);
    M += target_delta(mv);
    path.emplace_back(L, M);
  }
  return path;
}

bool violates_adjacency_rule(const Alignment& alignment) {
  for (std::size_t k = 1; k < alignment.steps.size(); ++k) {
    const Move prev = alignment.steps[k - 1], cur = alignment.steps[k];
    if ((prev == Move::source && cur == Move::target) ||
        (prev == Move::target && cur == Move::source))
      return true;
  }
  return false;
}

void validate_alignment(const Alignment& alignment) {
  if (alignment.steps.empty() || alignment.steps.front() != Move::both)
    throw Error(Errc::shape_mismatch, "alignment must start with the forced (1,1) step");
  Eigen::Index L = 0, M = 0;
  for (Move mv : alignment.steps) {
    L += source_delta(mv);
    M += target_delta(mv);
  }
  if (L != alignment.source_len || M != alignment.target_len)
    throw Error(Errc::shape_mismatch, "alignment steps do not sum to (source_len, target_len)");
}

AlignResult align_sequences(const Eigen::Ref<const Eigen::VectorXd>& source_times,
                            const Eigen::Ref<const Eigen::VectorXd>& source_values,
                            const Eigen::Ref<const Eigen::VectorXd>& target_times,
                            const Eigen::Ref<const Eigen::VectorXd>& target_values,
                            const AlignOptions& options) {
  const Eigen::Index l = source_values.size(), m = target_values.size();
  if (l < 1 || m < 1) throw Error(Errc::empty_curve, "align: empty sequence");
  if (source_times.size() != l || target_times.size() != m)
    throw Error(Errc::shape_mismatch, "align: times/values length mismatch");
  check_strictly_increasing(source_times, "source");
  check_strictly_increasing(target_times, "target");

  // Junction chain: start, forced interior pairs, end.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> junctions{{1, 1}};
  {
    auto forced = options.forced_pairs;
    std::sort(forced.begin(), forced.end());
    forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
    for (const auto& [fi, fj] : forced) {
      if (fi < 1 || fi > l || fj < 1 || fj > m)
        throw Error(Errc::invalid_forced_pair, "forced pair outside the index ranges");
      if (fj < junctions.back().second)
        throw Error(Errc::invalid_forced_pair, "forced pairs not reachable by a monotone path");
      if (fi != junctions.back().first || fj != junctions.back().second)
        junctions.emplace_back(fi, fj);
    }
    if (junctions.back() != std::make_pair(l, m)) junctions.emplace_back(l, m);
  }

  g_run_count.fetch_add(1, std::memory_order_relaxed);

  auto solve_all = [&](const auto& metric_fn) {
    std::vector<SegmentDP> segments;
    segments.reserve(junctions.size() - 1);
    std::array<double, 3> init{0.0, kInf, kInf};
    for (std::size_t q = 0; q + 1 < junctions.size(); ++q) {
      segments.push_back(solve_segment(source_times, source_values, target_times, target_values,
                                       metric_fn, junctions[q].first, junctions[q].second,
                                       junctions[q + 1].first, junctions[q + 1].second, init));
      init = segments.back().end_costs;
    }
    return segments;
  };
  std::vector<SegmentDP> segments =
      options.metric ? solve_all(options.metric) : solve_all(abs_metric);
  if (junctions.size() == 1) {  // single-point sequences, path is just the forced pair
    AlignResult res;
    res.alignment = Alignment{l, m, {Move::both}};
    res.cost = 0.0;
    return res;
  }

  const std::array<double, 3> final_costs = segments.back().end_costs;
  const int final_state = best_state(final_costs);
  if (!std::isfinite(final_costs[final_state]))
    throw Error(Errc::invalid_forced_pair, "forced pairs unreachable under the step exclusion rule");

  std::vector<Move> steps{Move::both};
  std::vector<std::vector<Move>> chunks(segments.size());
  int state = final_state;
  for (std::size_t q = segments.size(); q-- > 0;)
    std::tie(chunks[q], state) = traceback_segment(segments[q], state);
  for (const auto& chunk : chunks) steps.insert(steps.end(), chunk.begin(), chunk.end());

  AlignResult res;
  res.alignment = Alignment{l, m, std::move(steps)};
  res.cost = final_costs[final_state];
  return res;
}

AlignResult align(const EventCurve& a, const EventCurve& b, const AlignOptions& options) {
  if (!a.anchored || !b.anchored)
    throw Error(Errc::unanchored_input, "align requires anchored curves");
  if (!(a.domain == b.domain))
    throw Error(Errc::domain_mismatch, "align requires curves anchored on the same domain");
  return align_sequences(a.times, a.values, b.times, b.values, options);
}

double alignment_cost(const Alignment& alignment,
                      const Eigen::Ref<const Eigen::VectorXd>& source_times,
                      const Eigen::Ref<const Eigen::VectorXd>& source_values,
                      const Eigen::Ref<const Eigen::VectorXd>& target_times,
                      const Eigen::Ref<const Eigen::VectorXd>& target_values,
                      const Metric& metric) {
  if (alignment.source_len != source_values.size() ||
      alignment.target_len != target_values.size() ||
      source_times.size() != source_values.size() ||
      target_times.size() != target_values.size())
    throw Error(Errc::shape_mismatch, "alignment_cost: sequence lengths do not match alignment");
  validate_alignment(alignment);
  const Metric& d = metric ? metric : Metric(abs_metric);

  double total = 0.0;
  Eigen::Index L = 1, M = 1;
  // w(1) = 0 by the t_0 := t_1, s_0 := s_1 convention
  double prev_t = source_times(0), prev_s = target_times(0);
  for (std::size_t k = 0; k < alignment.steps.size(); ++k) {
    if (k > 0) {
      L += source_delta(alignment.steps[k]);
      M += target_delta(alignment.steps[k]);
    }
    const double t = source_times(L - 1), s = target_times(M - 1);
    total += ((t - prev_t) + (s - prev_s)) / 2.0 * d(source_values(L - 1), target_values(M - 1));
    prev_t = t;
    prev_s = s;
  }
  return total;
}

std::vector<Alignment> enumerate_alignments(Eigen::Index source_len, Eigen::Index target_len) {
  if (source_len < 1 || target_len < 1)
    throw Error(Errc::empty_curve, "enumerate_alignments: lengths must be positive");
  if (source_len > 8 || target_len > 8)
    throw Error(Errc::too_large, "enumerate_alignments is guarded to lengths <= 8");

  std::vector<Alignment> out;
  std::vector<Move> acc{Move::both};
  auto rec = [&](auto&& self, Eigen::Index i, Eigen::Index j, Move last) -> void {
    if (i == source_len && j == target_len) {
      out.push_back(Alignment{source_len, target_len, acc});
      return;
    }
    for (Move mv : {Move::both, Move::source, Move::target}) {
      if (mv == Move::both && (i == source_len || j == target_len)) continue;
      if (mv == Move::source && (i == source_len || last == Move::target)) continue;
      if (mv == Move::target && (j == target_len || last == Move::source)) continue;
      acc.push_back(mv);
      self(self, i + source_delta(mv), j + target_delta(mv), mv);
      acc.pop_back();
    }
  };
  rec(rec, 1, 1, Move::both);
  return out;
}

std::uint64_t alignment_run_count() { return g_run_count.load(std::memory_order_relaxed); }

void reset_alignment_run_count() { g_run_count.store(0, std::memory_order_relaxed); }

}  // namespace eventwarp
