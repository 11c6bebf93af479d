#include <doctest.h>

#include "helpers.hpp"
#include "tsw/exact_ot.hpp"
#include "tsw/radon.hpp"
#include "tsw/rng.hpp"
#include "tsw/tree_wasserstein.hpp"

using namespace tsw;

namespace {

TreeSystem single_axis_line() {
  TreeSystem ts;
  ts.sources = Eigen::MatrixXd::Zero(1, 1);
  ts.directions = Eigen::MatrixXd::Ones(1, 1);
  ts.parent = {-1};
  ts.attach_coord = Eigen::VectorXd::Zero(1);
  return ts;
}

DiscreteMeasure dirac1d(double x) {
  Eigen::MatrixXd p(1, 1);
  p << x;
  return validate_and_normalize(p);
}

}  // namespace

TEST_CASE("single-line node tree is a sorted path") {
  TreeSystem ts = single_axis_line();
  SplittingMap alpha = SplittingMap::Uniform(1);
  ProjectedMeasure pmu = project(dirac1d(-1.0), ts, alpha);
  ProjectedMeasure pnu = project(dirac1d(2.0), ts, alpha);
  NodeTree nt = build_node_tree(ts, pmu, pnu);
  CHECK(nt.nodes.size() == 3);  // entry at 0 plus the two atoms
  CHECK(tw_closed_form(nt) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("two diracs at distance 3 on one line") {
  TreeSystem ts = single_axis_line();
  SplittingMap alpha = SplittingMap::Uniform(1);
  NodeTree nt = build_node_tree(ts, project(dirac1d(0.0), ts, alpha),
                                project(dirac1d(3.0), ts, alpha));
  CHECK(tw_closed_form(nt) == doctest::Approx(3.0).epsilon(1e-15));
  TwGradient g = tw_subgradient(nt);
  CHECK(g.value == doctest::Approx(3.0));
  for (size_t v = 0; v < nt.nodes.size(); ++v) {
    if (nt.nodes[v].kind == NodeKind::kAtomMu)
      CHECK(g.coord_grad[v] == doctest::Approx(-1.0));
    if (nt.nodes[v].kind == NodeKind::kAtomNu)
      CHECK(g.coord_grad[v] == doctest::Approx(1.0));
  }
}

TEST_CASE("identical projections give value 0 and zero subgradients") {
  DiscreteMeasure m = test::random_measure(12, 2, 3);
  TreeSystem ts = sample_chain(3, 2, 3);
  SplittingMap alpha = SplittingMap::Uniform(3);
  ProjectedMeasure pm = project(m, ts, alpha);
  NodeTree nt = build_node_tree(ts, pm, pm);
  CHECK(tw_closed_form(nt) == 0.0);
  TwGradient g = tw_subgradient(nt);
  for (double gc : g.coord_grad) CHECK(gc == 0.0);
}

TEST_CASE("empty non-root line contributes only its entry node") {
  TreeSystem ts = sample_chain(2, 1, 4);
  SplittingMap alpha = SplittingMap::FixedVector(Eigen::Vector2d(1.0, 0.0));
  ProjectedMeasure pmu = project(dirac1d(0.3), ts, alpha);
  ProjectedMeasure pnu = project(dirac1d(-0.2), ts, alpha);
  CHECK(pmu.lines[1].empty());
  NodeTree nt = build_node_tree(ts, pmu, pnu);
  // root entry, line-1 attachment, two atoms
  CHECK(nt.nodes.size() == 4);
  CHECK(tw_closed_form(nt) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("node masses account for both measures") {
  DiscreteMeasure a = test::random_measure(7, 2, 10);
  DiscreteMeasure b = test::random_measure(9, 2, 11);
  TreeSystem ts = sample_chain(4, 2, 12);
  SplittingMap alpha = SplittingMap::RandomVector(4, 6);
  NodeTree nt = build_node_tree(ts, project(a, ts, alpha), project(b, ts, alpha));
  double smu = 0, snu = 0;
  for (const auto& node : nt.nodes) {
    smu += node.mass_mu;
    snu += node.mass_nu;
  }
  CHECK(smu == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(snu == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed form equals the exact LP over tree costs") {
  rng::Stream s(41);
  for (int trial = 0; trial < 60; ++trial) {
    int d = 1 + static_cast<int>(s.integer(3));
    int k = 1 + static_cast<int>(s.integer(4));
    int n = 2 + static_cast<int>(s.integer(6));
    DiscreteMeasure mu = test::random_measure(n, d, 100 + trial);
    DiscreteMeasure nu = test::random_measure(n + 1, d, 200 + trial);
    TreeSystem ts = sample_chain(k, d, 300 + trial);
    SplittingMap alpha = SplittingMap::RandomVector(k, trial);
    ProjectedMeasure pmu = project(mu, ts, alpha), pnu = project(nu, ts, alpha);
    double closed = tw_closed_form(build_node_tree(ts, pmu, pnu));
    double lp = exact_ot(flatten_masses(pmu), flatten_masses(pnu),
                         tree_cost_matrix(ts, pmu, pnu));
    CHECK(std::abs(closed - lp) <= 1e-9);
  }
}

TEST_CASE("value does not depend on the rooting") {
  rng::Stream s(51);
  for (int trial = 0; trial < 20; ++trial) {
    DiscreteMeasure mu = test::random_measure(6, 2, 400 + trial);
    DiscreteMeasure nu = test::random_measure(5, 2, 500 + trial);
    TreeSystem ts = sample_chain(3, 2, 600 + trial);
    SplittingMap alpha = SplittingMap::Uniform(3);
    NodeTree nt = build_node_tree(ts, project(mu, ts, alpha), project(nu, ts, alpha));
    double ref = tw_closed_form(nt);
    for (int root = 0; root < static_cast<int>(nt.nodes.size());
         root += 1 + static_cast<int>(s.integer(3)))
      CHECK(test::tw_rerooted(nt, root) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("mass subgradient equals root-path weighted signs") {
  // Two diracs on one line: adding mu mass at the mu atom moves mass across
  // the length-3 gap, adding nu mass there removes that need.
  TreeSystem ts = single_axis_line();
  SplittingMap alpha = SplittingMap::Uniform(1);
  NodeTree nt = build_node_tree(ts, project(dirac1d(0.0), ts, alpha),
                                project(dirac1d(3.0), ts, alpha));
  TwGradient g = tw_subgradient(nt);
  for (size_t v = 0; v < nt.nodes.size(); ++v) {
    if (nt.nodes[v].kind == NodeKind::kAtomMu) {
      CHECK(g.mass_grad_mu[v] == doctest::Approx(0.0));
      CHECK(g.mass_grad_nu[v] == doctest::Approx(0.0));
    }
    if (nt.nodes[v].kind == NodeKind::kAtomNu) {
      // Extra mu mass at nu's location must travel from mu's side: the
      // edge signs along the root path sum to -3 for mu (a saving) per
      // the sign convention c = S_mu - S_nu below each edge.
      CHECK(std::abs(g.mass_grad_mu[v]) == doctest::Approx(3.0));
    }
  }
}
