#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "eventwarp/registration.hpp"

namespace eventwarp {

/// Symmetric nonnegative matrix with zero diagonal. Entries are squared-L2
/// areas between warping estimates, so the triangle inequality is not
/// guaranteed.
using DistanceMatrix = Eigen::MatrixXd;

/// Trapezoidal integral of (h_i^{-1} - h_j^{-1})^2 over the common grid.
double warp_distance(const WarpingEstimate& a, const WarpingEstimate& b);

DistanceMatrix distance_matrix(const std::vector<WarpingEstimate>& estimates, int threads = 1);

/// Member minimizing the sum of squared distances to the group; ties go to
/// the smallest index.
Eigen::Index frechet_medoid(const std::vector<Eigen::Index>& members, const DistanceMatrix& d);

struct Clustering {
  int k = 0;
  std::vector<int> labels;            // 0-based cluster ids, one per point
  std::vector<Eigen::Index> medoids;  // point index per cluster
  Eigen::VectorXd silhouettes;
  double coefficient = 0.0;
};

struct KMedoidsOptions {
  std::uint64_t seed = 1;
  int n_init = 20;
  int max_iter = 100;
};

/// Distance-only k-means: assignment by nearest medoid (plain distance),
/// medoid update by Frechet mean (squared distance), over n_init seeded
/// restarts keeping the lowest within-cluster sum of squares.
Clustering kmedoids(const DistanceMatrix& d, int k, const KMedoidsOptions& options = {});

/// Per-point silhouettes and their mean. Singleton clusters score 0.
std::pair<Eigen::VectorXd, double> silhouette(const DistanceMatrix& d,
                                              const std::vector<int>& labels);

struct KSelection {
  int k = 0;
  double coefficient = 0.0;
  Clustering clustering;
  std::vector<std::pair<int, double>> scan;  // (k, coefficient) per candidate
};

/// Runs kmedoids for every k in [k_min, k_max] and keeps the silhouette
/// maximizer; ties go to the smaller k.
KSelection select_k(const DistanceMatrix& d, int k_min, int k_max,
                    const KMedoidsOptions& options = {});

/// Kaufman-Rousseeuw interpretation band for a silhouette coefficient.
const char* silhouette_band(double coefficient);

}  // namespace eventwarp
