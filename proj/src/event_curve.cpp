#include "eventwarp/event_curve.hpp"

#include <algorithm>
#include <cmath>

#include "eventwarp/interp.hpp"

namespace eventwarp {

namespace {

// Makes `ts` strictly increasing and keeps it inside the domain. Ties are
// resolved by pushing the later duplicate up by eps_dup.
void enforce_strict_times(std::vector<double>& ts, const Domain& domain) {
  const double eps = domain.eps_dup();
  for (std::size_t k = 1; k < ts.size(); ++k)
    if (ts[k] <= ts[k - 1]) ts[k] = ts[k - 1] + eps;
  // a run of clashes at t_max walks back below the endpoint
  double upper = domain.t_max;
  for (std::size_t k = ts.size(); k-- > 0;) {
    if (!(ts[k] > upper)) break;
    ts[k] = upper;
    upper = ts[k] - eps;
  }
  for (std::size_t k = 1; k < ts.size(); ++k)
    if (ts[k] <= ts[k - 1])
      throw Error(Errc::out_of_domain, "event times could not be made strictly increasing");
}

EventCurve finish_curve(std::string id, std::vector<double> ts, std::vector<double> vs,
                        const Domain& domain, CurveMode mode) {
  EventCurve c;
  c.id = std::move(id);
  c.n_events = static_cast<Eigen::Index>(ts.size());
  c.mode = mode;
  c.domain = domain;
  c.times = Eigen::Map<Eigen::VectorXd>(ts.data(), static_cast<Eigen::Index>(ts.size()));
  c.values = Eigen::Map<Eigen::VectorXd>(vs.data(), static_cast<Eigen::Index>(vs.size()));
  return c;
}

}  // namespace

EventCurve build_curve(std::string id, std::vector<double> raw_event_times,
                       const Domain& domain, CurveMode mode) {
  if (raw_event_times.empty())
    throw Error(Errc::empty_curve, "curve '" + id + "' has no events");
  for (double t : raw_event_times)
    if (!domain.contains(t))
      throw Error(Errc::out_of_domain, "curve '" + id + "' has an event outside the domain");
  std::sort(raw_event_times.begin(), raw_event_times.end());
  enforce_strict_times(raw_event_times, domain);
  const auto n = raw_event_times.size();
  std::vector<double> vs(n);
  for (std::size_t k = 0; k < n; ++k)
    vs[k] = mode == CurveMode::standardized ? double(k + 1) / double(n) : double(k + 1);
  return finish_curve(std::move(id), std::move(raw_event_times), std::move(vs), domain, mode);
}

EventCurve build_curve_with_values(std::string id, std::vector<double> raw_event_times,
                                   std::vector<double> raw_values, const Domain& domain,
                                   CurveMode mode) {
  if (raw_event_times.empty())
    throw Error(Errc::empty_curve, "curve '" + id + "' has no events");
  if (raw_values.size() != raw_event_times.size())
    throw Error(Errc::shape_mismatch, "curve '" + id + "': times/values length mismatch");
  for (double t : raw_event_times)
    if (!domain.contains(t))
      throw Error(Errc::out_of_domain, "curve '" + id + "' has an event outside the domain");
  // sort (time, value) rows jointly by time
  std::vector<std::size_t> order(raw_event_times.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return raw_event_times[a] < raw_event_times[b];
  });
  std::vector<double> ts(order.size()), vs(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    ts[k] = raw_event_times[order[k]];
    vs[k] = raw_values[order[k]];
  }
  for (std::size_t k = 1; k < vs.size(); ++k)
    if (vs[k] < vs[k - 1])
      throw Error(Errc::shape_mismatch, "curve '" + id + "': values must be nondecreasing");
  enforce_strict_times(ts, domain);
  return finish_curve(std::move(id), std::move(ts), std::move(vs), domain, mode);
}

EventCurve anchor_curve(const EventCurve& curve, const Domain& domain) {
  if (curve.anchored)
    throw Error(Errc::already_anchored, "curve '" + curve.id + "' is already anchored");
  if (curve.size() == 0) throw Error(Errc::empty_curve, "cannot anchor an empty curve");

  const Eigen::Index n = curve.size();
  std::vector<double> ts(curve.times.data(), curve.times.data() + n);
  // Anchor collision: events sitting exactly on an endpoint are shifted inward.
  if (ts.front() <= domain.t_min) ts.front() = domain.t_min + domain.eps_dup();
  if (ts.back() >= domain.t_max) ts.back() = domain.t_max - domain.eps_dup();
  enforce_strict_times(ts, domain);
  if (!(ts.front() > domain.t_min && ts.back() < domain.t_max))
    throw Error(Errc::anchor_collision, "curve '" + curve.id + "': events collide with both endpoints");

  EventCurve out = curve;
  out.anchored = true;
  out.domain = domain;
  out.times.resize(n + 2);
  out.values.resize(n + 2);
  out.times(0) = domain.t_min;
  out.values(0) = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.times(k + 1) = ts[static_cast<std::size_t>(k)];
    out.values(k + 1) = curve.values(k);
  }
  out.times(n + 1) = domain.t_max;
  out.values(n + 1) = curve.values(n - 1);
  return out;
}

double WarpingFunction::operator()(double t) const { return interp::eval(grid, values, t); }

double WarpingFunction::inverse(double t) const { return interp::eval(values, grid, t); }

}  // namespace eventwarp
