#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "eventwarp/event_curve.hpp"

namespace eventwarp {

enum class MuKind { linear, exponential };
enum class WarpFamilyKind { sine, two_regime };

/// Generative scenario for the time-warping model: a fixed base cumulative
/// curve mu, i.i.d. random warps with identity mean, and a random event count
/// per curve.
struct WarpScenario {
  int n = 50;
  int events_min = 5;
  int events_max = 15;
  MuKind mu = MuKind::linear;
  double mu_rate = 3.0;  // exponential-type steepness
  WarpFamilyKind family = WarpFamilyKind::sine;
  int components = 3;
  double amplitude = 0.08;    // per-component bound is amplitude / c
  double regime_shift = 0.25; // two-regime: sine bump height of the late regime
  bool quantile_spacing = true;  // deterministic mu-quantiles vs i.i.d. draws
  Domain domain{0.0, 1.0};
  std::uint64_t seed = 1;
  Eigen::Index warp_grid_size = 1001;
};

/// Throws bad_amplitude unless every possible draw is strictly increasing,
/// and bad_config for malformed counts/ranges.
void validate_scenario(const WarpScenario& scenario);

/// Warp of curve `index` under the scenario, as dense grid samples. Streams
/// are derived per curve, so this matches what simulate_sample uses.
WarpingFunction sample_warping(const WarpScenario& scenario, int index);

double mu_value(const WarpScenario& scenario, double t);
double mu_quantile(const WarpScenario& scenario, double p);

struct SimulatedSample {
  std::vector<EventCurve> curves;        // unanchored, standardized values
  std::vector<WarpingFunction> truth;    // h_i per curve
  std::vector<int> regime;               // two-regime family: 0 = shifted, 1 = near-identity
};

SimulatedSample simulate_sample(const WarpScenario& scenario);

}  // namespace eventwarp
