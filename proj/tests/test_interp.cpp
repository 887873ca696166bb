#include <doctest.h>

#include "eventwarp/interp.hpp"

using namespace eventwarp;

TEST_CASE("linear interpolation hits knots and midpoints") {
  Eigen::VectorXd x(3), y(3);
  x << 0.0, 5.0, 10.0;
  y << 0.0, 6.0, 10.0;
  CHECK(interp::eval(x, y, 5.0) == doctest::Approx(6.0));
  CHECK(interp::eval(x, y, 2.5) == doctest::Approx(3.0));
  CHECK(interp::eval(x, y, 7.5) == doctest::Approx(8.0));
}

TEST_CASE("queries outside the knots clamp to the boundary values") {
  Eigen::VectorXd x(2), y(2);
  x << 1.0, 2.0;
  y << 3.0, 7.0;
  CHECK(interp::eval(x, y, 0.0) == 3.0);
  CHECK(interp::eval(x, y, 9.0) == 7.0);
}

TEST_CASE("uniform grid spans the domain exactly") {
  const Eigen::VectorXd g = interp::uniform_grid(Domain(2.0, 4.0), 5);
  CHECK(g.size() == 5);
  CHECK(g(0) == 2.0);
  CHECK(g(4) == 4.0);
  CHECK(g(2) == doctest::Approx(3.0));
  CHECK_THROWS_AS(interp::uniform_grid(Domain(0.0, 1.0), 1), Error);
}

TEST_CASE("trapezoid matches a closed form") {
  const Eigen::VectorXd x = interp::uniform_grid(Domain(0.0, 1.0), 101);
  const Eigen::VectorXd y = x;  // integral of t over [0,1] = 1/2
  CHECK(interp::trapezoid(x, y) == doctest::Approx(0.5).epsilon(1e-12));
  const Eigen::VectorXd y2 = x.array().square();
  CHECK(interp::trapezoid(x, y2) == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
}
