#include "eventwarp/cluster.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "eventwarp/interp.hpp"
#include "eventwarp/parallel.hpp"

namespace eventwarp {

namespace {

// splitmix64; portable deterministic stream derivation
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
  Eigen::Index next_below(Eigen::Index n) {
    return static_cast<Eigen::Index>(next() % static_cast<std::uint64_t>(n));
  }
};

// Sequential squared-distance-proportional seeding of k distinct medoids.
std::vector<Eigen::Index> seed_medoids(const DistanceMatrix& d, int k, SplitMix& rng) {
  const Eigen::Index n = d.rows();
  std::vector<Eigen::Index> medoids{rng.next_below(n)};
  Eigen::VectorXd nearest = d.col(medoids[0]);
  while (static_cast<int>(medoids.size()) < k) {
    Eigen::VectorXd weights = nearest.array().square();
    for (Eigen::Index m : medoids) weights(m) = 0.0;
    const double total = weights.sum();
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double u = rng.next_unit() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += weights(i);
        if (u < acc) {
          pick = i;
          break;
        }
      }
    }
    if (pick < 0) {  // all remaining points coincide with a medoid
      for (Eigen::Index i = 0; i < n && pick < 0; ++i)
        if (std::find(medoids.begin(), medoids.end(), i) == medoids.end()) pick = i;
    }
    medoids.push_back(pick);
    nearest = nearest.cwiseMin(d.col(pick));
  }
  std::sort(medoids.begin(), medoids.end());
  return medoids;
}

double within_cluster_ss(const DistanceMatrix& d, const std::vector<int>& labels,
                         const std::vector<Eigen::Index>& medoids) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    const double dist = d(i, medoids[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]);
    total += dist * dist;
  }
  return total;
}

}  // namespace

double warp_distance(const WarpingEstimate& a, const WarpingEstimate& b) {
  if (a.grid.size() == 0 || b.grid.size() == 0)
    throw Error(Errc::grid_mismatch, "warp_distance requires common-grid estimates");
  if (a.grid.size() != b.grid.size() || (a.grid.array() != b.grid.array()).any())
    throw Error(Errc::grid_mismatch, "warp_distance: estimates use different grids");
  const Eigen::VectorXd diff2 = (a.grid_values - b.grid_values).array().square();
  return interp::trapezoid(a.grid, diff2);
}

DistanceMatrix distance_matrix(const std::vector<WarpingEstimate>& estimates, int threads) {
  const auto n = static_cast<Eigen::Index>(estimates.size());
  DistanceMatrix d = DistanceMatrix::Zero(n, n);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const double v =
        warp_distance(estimates[static_cast<std::size_t>(i)], estimates[static_cast<std::size_t>(j)]);
    d(i, j) = v;
    d(j, i) = v;
  });
  return d;
}

Eigen::Index frechet_medoid(const std::vector<Eigen::Index>& members, const DistanceMatrix& d) {
  if (members.empty()) throw Error(Errc::empty_group, "frechet_medoid: empty group");
  Eigen::Index best = -1;
  double best_ss = std::numeric_limits<double>::infinity();
  for (Eigen::Index candidate : members) {
    double ss = 0.0;
    for (Eigen::Index other : members) {
      const double dist = d(candidate, other);
      ss += dist * dist;
    }
    if (ss < best_ss || (ss == best_ss && candidate < best)) {
      best_ss = ss;
      best = candidate;
    }
  }
  return best;
}

Clustering kmedoids(const DistanceMatrix& d, int k, const KMedoidsOptions& options) {
  const Eigen::Index n = d.rows();
  if (k < 2 || k > n) throw Error(Errc::bad_k, "kmedoids requires 2 <= k <= n");

  std::vector<int> best_labels;
  std::vector<Eigen::Index> best_medoids;
  double best_objective = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < std::max(1, options.n_init); ++restart) {
    SplitMix rng(mix64(options.seed) ^ mix64(static_cast<std::uint64_t>(restart) + 1));
    std::vector<Eigen::Index> medoids = seed_medoids(d, k, rng);
    std::vector<int> labels(static_cast<std::size_t>(n), 0);

    for (int iter = 0; iter < options.max_iter; ++iter) {
      std::vector<int> new_labels(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) {
        int nearest = 0;
        for (int c = 1; c < k; ++c)
          if (d(i, medoids[static_cast<std::size_t>(c)]) <
              d(i, medoids[static_cast<std::size_t>(nearest)]))
            nearest = c;
        new_labels[static_cast<std::size_t>(i)] = nearest;
      }
      for (int c = 0; c < k; ++c)  // medoids stay in their own cluster
        new_labels[static_cast<std::size_t>(medoids[static_cast<std::size_t>(c)])] = c;

      std::vector<Eigen::Index> new_medoids(static_cast<std::size_t>(k));
      for (int c = 0; c < k; ++c) {
        std::vector<Eigen::Index> members;
        for (Eigen::Index i = 0; i < n; ++i)
          if (new_labels[static_cast<std::size_t>(i)] == c) members.push_back(i);
        new_medoids[static_cast<std::size_t>(c)] = frechet_medoid(members, d);
      }
      const bool converged = new_labels == labels && new_medoids == medoids;
      labels = std::move(new_labels);
      medoids = std::move(new_medoids);
      if (converged) break;
    }

    const double objective = within_cluster_ss(d, labels, medoids);
    if (objective < best_objective) {
      best_objective = objective;
      best_labels = labels;
      best_medoids = medoids;
    }
  }

  Clustering out;
  out.k = k;
  out.labels = std::move(best_labels);
  out.medoids = std::move(best_medoids);
  std::tie(out.silhouettes, out.coefficient) = silhouette(d, out.labels);
  return out;
}

std::pair<Eigen::VectorXd, double> silhouette(const DistanceMatrix& d,
                                              const std::vector<int>& labels) {
  const Eigen::Index n = d.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw Error(Errc::shape_mismatch, "silhouette: one label per point required");
  const std::set<int> clusters(labels.begin(), labels.end());
  if (clusters.size() < 2)
    throw Error(Errc::single_cluster, "silhouette needs at least two clusters");

  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double own_sum = 0.0;
    Eigen::Index own_count = 0;
    double nearest_other = std::numeric_limits<double>::infinity();
    for (int c : clusters) {
      if (c == labels[static_cast<std::size_t>(i)]) continue;
      double sum = 0.0;
      Eigen::Index count = 0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (labels[static_cast<std::size_t>(j)] == c) {
          sum += d(i, j);
          ++count;
        }
      nearest_other = std::min(nearest_other, sum / double(count));
    }
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i && labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(i)]) {
        own_sum += d(i, j);
        ++own_count;
      }
    if (own_count == 0) {
      s(i) = 0.0;  // singleton convention
    } else {
      const double a = own_sum / double(own_count);
      const double b = nearest_other;
      const double denom = std::max(a, b);
      s(i) = denom > 0.0 ? (b - a) / denom : 0.0;
    }
  }
  return {s, s.mean()};
}

KSelection select_k(const DistanceMatrix& d, int k_min, int k_max,
                    const KMedoidsOptions& options) {
  const Eigen::Index n = d.rows();
  if (k_min > k_max) throw Error(Errc::empty_range, "select_k: empty k range");
  if (k_min < 2 || k_max > n - 1)
    throw Error(Errc::bad_k, "select_k requires 2 <= k_min <= k_max <= n-1");

  KSelection sel;
  for (int k = k_min; k <= k_max; ++k) {
    Clustering c = kmedoids(d, k, options);
    sel.scan.emplace_back(k, c.coefficient);
    if (sel.k == 0 || c.coefficient > sel.coefficient) {
      sel.k = k;
      sel.coefficient = c.coefficient;
      sel.clustering = std::move(c);
    }
  }
  return sel;
}

const char* silhouette_band(double coefficient) {
  if (coefficient > 0.70) return "strong structure";
  if (coefficient > 0.51) return "reasonable structure";
  if (coefficient > 0.25) return "weak structure, could be artificial";
  return "no substantial structure";
}

}  // namespace eventwarp
