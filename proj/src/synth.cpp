#include "eventwarp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eventwarp/interp.hpp"

namespace eventwarp {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct SplitMix {
  std::uint64_t state;
  explicit SplitMix(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() { return mix64(state++); }
  double next_unit() { return double(next() >> 11) * 0x1.0p-53; }
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }
};

// Independent per-curve streams: draw order elsewhere cannot disturb them.
enum class Stream : std::uint64_t { warp = 1, count = 2, events = 3 };

SplitMix curve_stream(const WarpScenario& sc, int index, Stream which) {
  return SplitMix(mix64(sc.seed) ^ mix64(static_cast<std::uint64_t>(which) << 32 |
                                         static_cast<std::uint64_t>(index + 1)));
}

double regime_bump(const WarpScenario& sc, int index) {
  if (sc.family != WarpFamilyKind::two_regime) return 0.0;
  return index < sc.n / 2 ? sc.regime_shift : 0.0;
}

}  // namespace

void validate_scenario(const WarpScenario& scenario) {
  if (scenario.n < 1 || scenario.events_min < 1 || scenario.events_max < scenario.events_min)
    throw Error(Errc::bad_config, "scenario: bad curve or event counts");
  if (scenario.components < 0 || scenario.amplitude < 0.0 || scenario.regime_shift < 0.0)
    throw Error(Errc::bad_config, "scenario: negative warp parameters");
  if (scenario.warp_grid_size < 2) throw Error(Errc::bad_config, "scenario: warp grid too small");
  // Worst-case |h'| bound: 1 - pi * (sum_c c * (amplitude/c) + shift) must stay positive.
  const double slope_margin =
      kPi * (scenario.components * scenario.amplitude +
             (scenario.family == WarpFamilyKind::two_regime ? scenario.regime_shift : 0.0));
  if (slope_margin >= 1.0)
    throw Error(Errc::bad_amplitude,
                "warp amplitude too large: sampled warps may fail to be increasing");
}

WarpingFunction sample_warping(const WarpScenario& scenario, int index) {
  validate_scenario(scenario);
  SplitMix rng = curve_stream(scenario, index, Stream::warp);
  Eigen::VectorXd coeffs(scenario.components);
  for (int c = 0; c < scenario.components; ++c)
    coeffs(c) = rng.next_symmetric() * scenario.amplitude / double(c + 1);
  const double bump = regime_bump(scenario, index);

  WarpingFunction h;
  h.grid = interp::uniform_grid(scenario.domain, scenario.warp_grid_size);
  h.values.resize(scenario.warp_grid_size);
  const double span = scenario.domain.span();
  for (Eigen::Index g = 0; g < scenario.warp_grid_size; ++g) {
    const double u = (h.grid(g) - scenario.domain.t_min) / span;
    double v = u + bump * std::sin(kPi * u);
    for (int c = 0; c < scenario.components; ++c) v += coeffs(c) * std::sin(kPi * (c + 1) * u);
    h.values(g) = scenario.domain.t_min + span * v;
  }
  h.values(0) = scenario.domain.t_min;
  h.values(scenario.warp_grid_size - 1) = scenario.domain.t_max;
  for (Eigen::Index g = 1; g < scenario.warp_grid_size; ++g)
    if (!(h.values(g) > h.values(g - 1)))
      throw Error(Errc::bad_amplitude, "sampled warp is not strictly increasing");
  return h;
}

double mu_value(const WarpScenario& scenario, double t) {
  const double u = (t - scenario.domain.t_min) / scenario.domain.span();
  if (scenario.mu == MuKind::linear) return u;
  return std::expm1(scenario.mu_rate * u) / std::expm1(scenario.mu_rate);
}

double mu_quantile(const WarpScenario& scenario, double p) {
  double u = p;
  if (scenario.mu == MuKind::exponential)
    u = std::log1p(p * std::expm1(scenario.mu_rate)) / scenario.mu_rate;
  return scenario.domain.t_min + scenario.domain.span() * u;
}

SimulatedSample simulate_sample(const WarpScenario& scenario) {
  validate_scenario(scenario);
  SimulatedSample sample;
  sample.curves.reserve(static_cast<std::size_t>(scenario.n));
  sample.truth.reserve(static_cast<std::size_t>(scenario.n));
  for (int i = 0; i < scenario.n; ++i) {
    SplitMix count_rng = curve_stream(scenario, i, Stream::count);
    const int span_counts = scenario.events_max - scenario.events_min + 1;
    const int n_events = scenario.events_min +
                         static_cast<int>(count_rng.next() % static_cast<std::uint64_t>(span_counts));

    std::vector<double> levels(static_cast<std::size_t>(n_events));
    if (scenario.quantile_spacing) {
      for (int k = 0; k < n_events; ++k)
        levels[static_cast<std::size_t>(k)] = double(k + 1) / double(n_events + 1);
    } else {
      SplitMix event_rng = curve_stream(scenario, i, Stream::events);
      for (int k = 0; k < n_events; ++k)
        levels[static_cast<std::size_t>(k)] = event_rng.next_unit();
      std::sort(levels.begin(), levels.end());
    }

    WarpingFunction h = sample_warping(scenario, i);
    std::vector<double> observed(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k)
      observed[k] = h(mu_quantile(scenario, levels[k]));

    sample.curves.push_back(build_curve(std::to_string(i + 1), std::move(observed),
                                        scenario.domain, CurveMode::standardized));
    sample.truth.push_back(std::move(h));
    if (scenario.family == WarpFamilyKind::two_regime)
      sample.regime.push_back(i < scenario.n / 2 ? 0 : 1);
  }
  return sample;
}

}  // namespace eventwarp
