#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "tsw/exact_ot.hpp"
#include "tsw/rng.hpp"

using namespace tsw;

TEST_CASE("wasserstein_1d on diracs and identical measures") {
  Eigen::VectorXd x(1), y(1), one(1);
  x << -1.0;
  y << 2.5;
  one << 1.0;
  CHECK(wasserstein_1d(x, one, y, one, 1.0) == doctest::Approx(3.5));
  CHECK(wasserstein_1d(x, one, y, one, 2.0) == doctest::Approx(3.5));
  CHECK(wasserstein_1d(x, one, x, one, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("wasserstein_1d hand instance with uneven weights") {
  // mu = 0.75 at 0, 0.25 at 4; nu = uniform on {0, 1, 2, 3}.
  Eigen::VectorXd xs(2), ws(2), ys(4), vs(4);
  xs << 0, 4;
  ws << 0.75, 0.25;
  ys << 0, 1, 2, 3;
  vs << 0.25, 0.25, 0.25, 0.25;
  // quantile pairing: 0.25->0, 0.25->1, 0.25->2, then 0.25 moves 4->3.
  CHECK(wasserstein_1d(xs, ws, ys, vs, 1.0) ==
        doctest::Approx(0.25 * (0 + 1 + 2 + 1)).epsilon(1e-12));
}

TEST_CASE("wasserstein_1d matches the LP on random instances") {
  rng::Stream s(61);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(s.integer(6));
    int m = 2 + static_cast<int>(s.integer(6));
    DiscreteMeasure a = test::random_measure(n, 1, 700 + trial);
    DiscreteMeasure b = test::random_measure(m, 1, 800 + trial);
    double p = trial % 2 ? 1.0 : 2.0;
    CostMatrix cm;
    cm.cost.resize(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        cm.cost(i, j) = std::pow(std::abs(a.points(i, 0) - b.points(j, 0)), p);
    double quantile = wasserstein_1d(a.points.col(0), a.weights,
                                     b.points.col(0), b.weights, p);
    double lp = std::pow(exact_ot(a.weights, b.weights, cm), 1.0 / p);
    CHECK(quantile == doctest::Approx(lp).epsilon(1e-9));
  }
}

TEST_CASE("exact_ot equals brute-force assignment on 3x3 instances") {
  rng::Stream s(71);
  Eigen::VectorXd u = Eigen::VectorXd::Constant(3, 1.0 / 3);
  for (int trial = 0; trial < 100; ++trial) {
    CostMatrix cm;
    cm.cost.resize(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) cm.cost(i, j) = s.uniform(0, 10);
    int perm[3] = {0, 1, 2};
    double best = 1e300;
    do {
      double c = 0;
      for (int i = 0; i < 3; ++i) c += cm.cost(i, perm[i]) / 3.0;
      best = std::min(best, c);
    } while (std::next_permutation(perm, perm + 3));
    CHECK(exact_ot(u, u, cm) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("exact_ot scales linearly with the cost matrix") {
  rng::Stream s(81);
  CostMatrix cm;
  cm.cost.resize(4, 5);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j) cm.cost(i, j) = s.uniform(0, 1);
  DiscreteMeasure a = test::random_measure(4, 1, 1);
  DiscreteMeasure b = test::random_measure(5, 1, 2);
  double base = exact_ot(a.weights, b.weights, cm);
  CostMatrix scaled = cm;
  scaled.cost *= 7.5;
  CHECK(exact_ot(a.weights, b.weights, scaled) ==
        doctest::Approx(7.5 * base).epsilon(1e-12));
}

TEST_CASE("exact_ot is symmetric under transposition") {
  rng::Stream s(91);
  CostMatrix cm;
  cm.cost.resize(3, 6);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 6; ++j) cm.cost(i, j) = s.uniform(0, 2);
  DiscreteMeasure a = test::random_measure(3, 1, 5);
  DiscreteMeasure b = test::random_measure(6, 1, 6);
  CostMatrix t;
  t.cost = cm.cost.transpose();
  CHECK(exact_ot(a.weights, b.weights, cm) ==
        doctest::Approx(exact_ot(b.weights, a.weights, t)).epsilon(1e-12));
}

TEST_CASE("exact_ot input validation") {
  CostMatrix cm;
  cm.cost = Eigen::MatrixXd::Ones(2, 2);
  Eigen::VectorXd good(2), bad(2);
  good << 0.5, 0.5;
  bad << 0.9, 0.4;
  CHECK_THROWS_AS(exact_ot(good, bad, cm), std::invalid_argument);
  CostMatrix neg;
  neg.cost = -Eigen::MatrixXd::Ones(2, 2);
  CHECK_THROWS_AS(exact_ot(good, good, neg), std::invalid_argument);
  CostMatrix wrong;
  wrong.cost = Eigen::MatrixXd::Ones(3, 2);
  CHECK_THROWS_AS(exact_ot(good, good, wrong), std::invalid_argument);
}

TEST_CASE("wasserstein_p on point clouds") {
  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 0, 0;
  b << 3, 4;
  CHECK(wasserstein_p(validate_and_normalize(a), validate_and_normalize(b), 2.0) ==
        doctest::Approx(5.0));
  DiscreteMeasure m = test::random_measure(10, 3, 9);
  CHECK(wasserstein_p(m, m, 2.0) == doctest::Approx(0.0).epsilon(1e-9));
}
