#include "eventwarp/interp.hpp"

#include <algorithm>

namespace eventwarp::interp {

double eval(const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y, double xq) {
  const Eigen::Index n = x.size();
  if (n == 0 || y.size() != n)
    throw Error(Errc::shape_mismatch, "interp::eval: empty knots or size mismatch");
  if (xq <= x(0)) return y(0);
  if (xq >= x(n - 1)) return y(n - 1);
  const double* begin = x.data();
  const double* it = std::upper_bound(begin, begin + n, xq);
  const Eigen::Index hi = it - begin;  // first knot strictly above xq, in [1, n-1]
  const Eigen::Index lo = hi - 1;
  const double w = (xq - x(lo)) / (x(hi) - x(lo));
  return y(lo) + w * (y(hi) - y(lo));
}

Eigen::VectorXd eval(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y,
                     const Eigen::Ref<const Eigen::VectorXd>& xq) {
  Eigen::VectorXd out(xq.size());
  for (Eigen::Index i = 0; i < xq.size(); ++i) out(i) = eval(x, y, xq(i));
  return out;
}

Eigen::VectorXd uniform_grid(const Domain& domain, Eigen::Index size) {
  if (size < 2) throw Error(Errc::bad_config, "grid needs at least 2 points");
  Eigen::VectorXd g = Eigen::VectorXd::LinSpaced(size, domain.t_min, domain.t_max);
  g(0) = domain.t_min;
  g(size - 1) = domain.t_max;
  return g;
}

double trapezoid(const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::Index n = x.size();
  if (y.size() != n) throw Error(Errc::shape_mismatch, "trapezoid: size mismatch");
  if (n < 2) return 0.0;
  const auto dx = x.tail(n - 1) - x.head(n - 1);
  const auto ym = 0.5 * (y.tail(n - 1) + y.head(n - 1));
  return dx.cwiseProduct(ym).sum();
}

}  // namespace eventwarp::interp
