#pragma once

#include <stdexcept>
#include <string>

namespace eventwarp {

/// Error codes for all precondition and validation failures in the library.
enum class Errc {
  empty_curve,
  out_of_domain,
  already_anchored,
  anchor_collision,
  unanchored_input,
  invalid_forced_pair,
  too_large,
  shape_mismatch,
  non_positive_delta,
  too_few_curves,
  domain_mismatch,
  grid_mismatch,
  empty_group,
  bad_k,
  single_cluster,
  empty_range,
  id_mismatch,
  bad_amplitude,
  io_error,
  bad_config,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Closed observation window [t_min, t_max] shared by all curves of a sample.
struct Domain {
  double t_min;
  double t_max;

  Domain(double lo, double hi) : t_min(lo), t_max(hi) {
    if (!(t_min < t_max)) throw Error(Errc::bad_config, "domain requires t_min < t_max");
  }

  double span() const { return t_max - t_min; }
  bool contains(double t) const { return t >= t_min && t <= t_max; }

  /// Perturbation unit used to break ties between event times.
  double eps_dup() const { return 1e-9 * span(); }

  friend bool operator==(const Domain&, const Domain&) = default;
};

}  // namespace eventwarp
