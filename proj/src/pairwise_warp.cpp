#include "eventwarp/pairwise_warp.hpp"

#include <algorithm>
#include <cmath>

namespace eventwarp {

namespace {

struct Segment {
  Eigen::Index begin = 0;  // first source position of the run
  Eigen::Index end = 0;    // one past the last
  Eigen::Index length() const { return end - begin; }
};

// Maximal runs of equal alpha values, left to right.
std::vector<Segment> runs_of(const std::vector<Eigen::Index>& alpha) {
  std::vector<Segment> runs;
  Eigen::Index k = 0;
  const auto n = static_cast<Eigen::Index>(alpha.size());
  while (k < n) {
    Eigen::Index j = k;
    while (j + 1 < n && alpha[j + 1] == alpha[k]) ++j;
    runs.push_back({k, j + 1});
    k = j + 1;
  }
  return runs;
}

void spread_run(Eigen::VectorXd& mapped, const Segment& run, double center, double half_width,
                const std::vector<bool>& pinned) {
  const Eigen::Index len = run.length();
  for (Eigen::Index h = 0; h < len; ++h) {
    const Eigen::Index p = run.begin + h;
    if (pinned[static_cast<std::size_t>(p)]) continue;
    mapped(p) = center - half_width + (2.0 * half_width / double(len - 1)) * double(h);
  }
}

}  // namespace

Correspondence extract_correspondence(const Alignment& alignment) {
  validate_alignment(alignment);
  Correspondence c;
  c.alpha.reserve(static_cast<std::size_t>(alignment.source_len));
  c.beta.reserve(static_cast<std::size_t>(alignment.target_len));
  Eigen::Index L = 1, M = 1;
  c.alpha.push_back(0);
  c.beta.push_back(0);
  for (std::size_t k = 1; k < alignment.steps.size(); ++k) {
    const Move mv = alignment.steps[k];
    L += source_delta(mv);
    M += target_delta(mv);
    if (source_delta(mv) == 1) c.alpha.push_back(M - 1);
    if (target_delta(mv) == 1) c.beta.push_back(L - 1);
  }
  return c;
}

Eigen::VectorXd warp_times(const std::vector<Eigen::Index>& alpha,
                           const Eigen::Ref<const Eigen::VectorXd>& source_times,
                           const Eigen::Ref<const Eigen::VectorXd>& target_times, double delta,
                           const std::vector<Pin>& pins) {
  if (!(delta > 0.0)) throw Error(Errc::non_positive_delta, "delta must be positive");
  const Eigen::Index n = source_times.size();
  const Eigen::Index m = target_times.size();
  if (static_cast<Eigen::Index>(alpha.size()) != n)
    throw Error(Errc::shape_mismatch, "warp_times: alpha length must match the source grid");
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (alpha[k] < 0 || alpha[k] >= m || (k > 0 && alpha[k] < alpha[k - 1]))
      throw Error(Errc::shape_mismatch, "warp_times: alpha is not a valid correspondence");
  }

  std::vector<bool> pinned(static_cast<std::size_t>(n), false);
  Eigen::VectorXd mapped(n);

  const std::vector<Segment> runs = runs_of(alpha);
  std::vector<double> half_widths(runs.size(), 0.0);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const Segment& run = runs[r];
    const double center = target_times(alpha[static_cast<std::size_t>(run.begin)]);
    if (run.length() == 1) {
      mapped(run.begin) = center;
    } else {
      half_widths[r] = delta * (source_times(run.end - 1) - source_times(run.begin)) / 2.0;
      spread_run(mapped, run, center, half_widths[r], pinned);
    }
  }
  for (const Pin& pin : pins) {
    if (pin.index < 0 || pin.index >= n)
      throw Error(Errc::shape_mismatch, "warp_times: pin index out of range");
    pinned[static_cast<std::size_t>(pin.index)] = true;
    mapped(pin.index) = pin.value;
  }

  // Monotone repair: wherever the map fails to increase, halve the half-width
  // of the run involved. Run centers are distinct target times, so the spread
  // collapses into strict order after finitely many halvings.
  auto run_at = [&](Eigen::Index pos) -> std::size_t {
    std::size_t lo = 0, hi = runs.size();
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (runs[mid].begin <= pos)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  };
  for (int pass = 0; pass < 200; ++pass) {
    bool ok = true;
    for (Eigen::Index k = 0; k + 1 < n && ok; ++k) {
      if (mapped(k + 1) > mapped(k)) continue;
      ok = false;
      bool shrunk = false;
      for (Eigen::Index pos : {k + 1, k}) {
        const std::size_t r = run_at(pos);
        if (runs[r].length() < 2 || half_widths[r] <= 0.0) continue;
        half_widths[r] /= 2.0;
        spread_run(mapped, runs[r], target_times(alpha[static_cast<std::size_t>(runs[r].begin)]),
                   half_widths[r], pinned);
        shrunk = true;
        break;
      }
      if (!shrunk) pass = 200;  // nothing left to shrink, fall through to the cascade
    }
    if (ok) break;
  }

  // Tie-break cascade for anything the halving could not separate (collapsed
  // runs against pinned values). Pins stay put.
  double span = 1.0;
  if (n > 1 && source_times(n - 1) > source_times(0)) span = source_times(n - 1) - source_times(0);
  if (m > 1 && target_times(m - 1) > target_times(0))
    span = std::max(span, target_times(m - 1) - target_times(0));
  const double eps = 1e-9 * span;
  for (Eigen::Index k = 1; k < n; ++k)
    if (!pinned[static_cast<std::size_t>(k)] && mapped(k) <= mapped(k - 1))
      mapped(k) = mapped(k - 1) + eps;
  for (Eigen::Index k = n - 1; k-- > 0;)
    if (!pinned[static_cast<std::size_t>(k)] && mapped(k) >= mapped(k + 1))
      mapped(k) = mapped(k + 1) - eps;
  for (Eigen::Index k = 1; k < n; ++k)
    if (!(mapped(k) > mapped(k - 1)))
      throw Error(Errc::shape_mismatch, "warp_times: monotone repair failed");
  return mapped;
}

WarpPairResult warp_pair(const EventCurve& a, const EventCurve& b, const WarpPairOptions& options) {
  if (!a.anchored || !b.anchored)
    throw Error(Errc::unanchored_input, "warp_pair requires anchored curves");
  if (!(a.domain == b.domain))
    throw Error(Errc::domain_mismatch, "warp_pair requires a shared domain");

  AlignOptions align_options;
  align_options.metric = options.metric;
  // 0-based positions of the last true events
  const Eigen::Index ia = a.last_event_index(), jb = b.last_event_index();
  if (options.force_last_event) align_options.forced_pairs.push_back({ia + 1, jb + 1});

  WarpPairResult out;
  out.alignment = align(a, b, align_options);
  const Correspondence corr = extract_correspondence(out.alignment.alignment);

  std::vector<Pin> pins_fwd{{0, b.times(0)}, {a.size() - 1, b.times(b.size() - 1)}};
  std::vector<Pin> pins_bwd{{0, a.times(0)}, {b.size() - 1, a.times(a.size() - 1)}};
  if (options.force_last_event) {
    pins_fwd.push_back({ia, b.times(jb)});
    pins_bwd.push_back({jb, a.times(ia)});
  }

  out.forward = PairwiseWarp{a.id, b.id, a.times,
                             warp_times(corr.alpha, a.times, b.times, options.delta, pins_fwd),
                             options.delta};
  out.backward = PairwiseWarp{b.id, a.id, b.times,
                              warp_times(corr.beta, b.times, a.times, options.delta, pins_bwd),
                              options.delta};
  return out;
}

}  // namespace eventwarp
