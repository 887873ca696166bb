#pragma once

#include <Eigen/Dense>

#include "eventwarp/types.hpp"

namespace eventwarp::interp {

/// Value of the piecewise-linear function through (x, y) at xq.
/// x must be strictly increasing; queries outside [x(0), x(n-1)] clamp to the
/// boundary values (step extension).
double eval(const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y, double xq);

/// Vector form of eval. xq need not be sorted.
Eigen::VectorXd eval(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y,
                     const Eigen::Ref<const Eigen::VectorXd>& xq);

/// G equally spaced points spanning the domain, endpoints included.
Eigen::VectorXd uniform_grid(const Domain& domain, Eigen::Index size);

/// Trapezoidal-rule integral of y over x (x strictly increasing).
double trapezoid(const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace eventwarp::interp
