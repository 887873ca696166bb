#include "eventwarp/registration.hpp"

#include <chrono>

#include "eventwarp/interp.hpp"
#include "eventwarp/parallel.hpp"

namespace eventwarp {

namespace {

void check_sample(const std::vector<EventCurve>& curves) {
  if (curves.size() < 2)
    throw Error(Errc::too_few_curves, "registration needs at least two curves");
  for (const EventCurve& c : curves) {
    if (!c.anchored) throw Error(Errc::unanchored_input, "curve '" + c.id + "' is not anchored");
    if (!(c.domain == curves.front().domain))
      throw Error(Errc::domain_mismatch, "curve '" + c.id + "' lives on a different domain");
  }
}

void recenter_estimates(std::vector<WarpingEstimate>& estimates, const Domain& domain) {
  // Sample analogue of the E[H(t)] = t constraint: subtract the mean
  // deviation from the identity, interpolated on a fixed internal grid.
  const Eigen::Index kGrid = 201;
  const Eigen::VectorXd grid = interp::uniform_grid(domain, kGrid);
  Eigen::VectorXd deviation = Eigen::VectorXd::Zero(kGrid);
  for (const WarpingEstimate& e : estimates)
    deviation += interp::eval(e.event_times, e.h_inv_values, grid) - grid;
  deviation /= double(estimates.size());

  const double eps = domain.eps_dup();
  for (WarpingEstimate& e : estimates) {
    for (Eigen::Index k = 0; k < e.event_times.size(); ++k)
      e.h_inv_values(k) -= interp::eval(grid, deviation, e.event_times(k));
    e.h_inv_values(0) = domain.t_min;
    e.h_inv_values(e.h_inv_values.size() - 1) = domain.t_max;
    for (Eigen::Index k = 1; k < e.h_inv_values.size(); ++k)  // guard strictness
      if (e.h_inv_values(k) <= e.h_inv_values(k - 1))
        e.h_inv_values(k) = e.h_inv_values(k - 1) + eps;
    for (Eigen::Index k = e.h_inv_values.size() - 1; k-- > 0;)
      if (e.h_inv_values(k) >= e.h_inv_values(k + 1))
        e.h_inv_values(k) = e.h_inv_values(k + 1) - eps;
  }
}

}  // namespace

std::vector<WarpingEstimate> estimate_warpings(const std::vector<EventCurve>& curves,
                                               const RegistrationOptions& options,
                                               RegistrationStats* stats) {
  check_sample(curves);
  const auto n = static_cast<Eigen::Index>(curves.size());

  // Flat list of unordered pairs (i < j), aligned independently.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  WarpPairOptions pair_options;
  pair_options.delta = options.delta;
  pair_options.metric = options.metric;
  pair_options.force_last_event = options.force_last_event;

  struct PairMaps {
    Eigen::VectorXd on_first;   // g mapping curve i's grid toward j
    Eigen::VectorXd on_second;  // g mapping curve j's grid toward i
  };
  std::vector<PairMaps> maps(pairs.size());

  const auto t0 = std::chrono::steady_clock::now();
  parallel_for(pairs.size(), options.threads, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    WarpPairResult r = warp_pair(curves[static_cast<std::size_t>(i)],
                                 curves[static_cast<std::size_t>(j)], pair_options);
    maps[p].on_first = std::move(r.forward.mapped_times);
    maps[p].on_second = std::move(r.backward.mapped_times);
  });
  const auto t1 = std::chrono::steady_clock::now();
  if (stats) {
    stats->pair_count = static_cast<Eigen::Index>(pairs.size());
    stats->pairwise_seconds = std::chrono::duration<double>(t1 - t0).count();
  }

  auto pair_slot = [n](Eigen::Index i, Eigen::Index j) {
    // index of (i, j), i < j, in the row-major upper triangle
    return static_cast<std::size_t>(i * n - i * (i + 1) / 2 + (j - i - 1));
  };

  std::vector<WarpingEstimate> estimates(curves.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const EventCurve& curve = curves[static_cast<std::size_t>(i)];
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(curve.size());
    for (Eigen::Index j = 0; j < n; ++j) {  // fixed summation order over sorted j
      if (j == i) continue;
      acc += i < j ? maps[pair_slot(i, j)].on_first : maps[pair_slot(j, i)].on_second;
    }
    WarpingEstimate& e = estimates[static_cast<std::size_t>(i)];
    e.curve_id = curve.id;
    e.event_times = curve.times;
    e.h_inv_values = acc / double(n - 1);
  }
  if (options.recenter) recenter_estimates(estimates, curves.front().domain);
  return estimates;
}

WarpingEstimate to_common_grid(WarpingEstimate estimate, Eigen::Index grid_size,
                               const Domain& domain) {
  const Eigen::Index n = estimate.event_times.size();
  if (n == 0) throw Error(Errc::empty_curve, "to_common_grid: empty estimate");

  // Augment with the identity-pinned endpoints unless already present.
  Eigen::Index extra_front = estimate.event_times(0) > domain.t_min ? 1 : 0;
  Eigen::Index extra_back = estimate.event_times(n - 1) < domain.t_max ? 1 : 0;
  Eigen::VectorXd knots_t(n + extra_front + extra_back), knots_v(n + extra_front + extra_back);
  if (extra_front) {
    knots_t(0) = domain.t_min;
    knots_v(0) = domain.t_min;
  }
  knots_t.segment(extra_front, n) = estimate.event_times;
  knots_v.segment(extra_front, n) = estimate.h_inv_values;
  if (extra_back) {
    knots_t(knots_t.size() - 1) = domain.t_max;
    knots_v(knots_v.size() - 1) = domain.t_max;
  }

  estimate.grid = interp::uniform_grid(domain, grid_size);
  estimate.grid_values = interp::eval(knots_t, knots_v, estimate.grid);
  estimate.grid_values(0) = domain.t_min;
  estimate.grid_values(grid_size - 1) = domain.t_max;
  return estimate;
}

RegisteredCurve register_curve(const EventCurve& curve, const WarpingEstimate& estimate) {
  if (estimate.curve_id != curve.id)
    throw Error(Errc::id_mismatch, "estimate for '" + estimate.curve_id +
                                       "' applied to curve '" + curve.id + "'");
  if (estimate.event_times.size() != curve.times.size() ||
      (estimate.event_times.array() != curve.times.array()).any())
    throw Error(Errc::id_mismatch, "estimate grid does not match the curve's event times");
  return RegisteredCurve{curve.id, estimate.h_inv_values, curve.values};
}

MeanCurve mean_curve(const std::vector<RegisteredCurve>& registered, const Domain& domain,
                     Eigen::Index grid_size) {
  if (registered.empty()) throw Error(Errc::empty_group, "mean_curve: no curves");
  MeanCurve mc;
  mc.grid = interp::uniform_grid(domain, grid_size);
  mc.mean_values = Eigen::VectorXd::Zero(grid_size);
  for (const RegisteredCurve& rc : registered)
    mc.mean_values += interp::eval(rc.times, rc.values, mc.grid);
  mc.mean_values /= double(registered.size());
  return mc;
}

std::map<int, MeanCurve> group_means(const std::vector<RegisteredCurve>& registered,
                                     const std::vector<int>& labels, const Domain& domain,
                                     Eigen::Index grid_size) {
  if (registered.size() != labels.size())
    throw Error(Errc::shape_mismatch, "group_means: one label per curve required");
  if (registered.empty()) throw Error(Errc::empty_group, "group_means: no curves");
  std::map<int, std::vector<RegisteredCurve>> groups;
  for (std::size_t i = 0; i < registered.size(); ++i)
    groups[labels[i]].push_back(registered[i]);
  std::map<int, MeanCurve> out;
  for (const auto& [label, members] : groups) out[label] = mean_curve(members, domain, grid_size);
  return out;
}

}  // namespace eventwarp
