#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "tsw/measure.hpp"
#include "tsw/radon.hpp"
#include "tsw/splitting.hpp"
#include "tsw/tree_system.hpp"

namespace tsw {

// Monte-Carlo estimator configuration. Tree system l draws from the
// counter-based stream derive(seed, "tree", l), so results are independent
// of evaluation order and worker count.
struct TswConfig {
  int trees = 10;  // L
  int lines = 4;   // k
  std::uint64_t seed = 0;
  std::string splitting = "uniform";
  // Chain sampler unless a representation is given.
  std::optional<TreeRepresentation> representation;
  // Root box center: explicit vector wins; otherwise the mean of the second
  // measure's supports when root_at_data_mean, else the origin.
  std::optional<Eigen::VectorXd> root_center;
  bool root_at_data_mean = true;
  double root_box_halfwidth = 1.0;
  double step_halfwidth = 1.0;
};

struct MaxConfig {
  int lines = 4;       // k (MaxTSW-SL only)
  int iterations = 100;
  double learning_rate = 1e-4;
  std::uint64_t seed = 0;
  std::string splitting = "uniform";
  double root_box_halfwidth = 1.0;
  double step_halfwidth = 1.0;
  bool root_at_data_mean = true;
};

// Mean over L sampled tree systems of the closed-form tree-Wasserstein
// between the projected measures. Deterministic given cfg.seed; per-tree
// values are reduced in index order.
double tsw_sl(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
              const TswConfig& cfg);

// Value plus the gradient with respect to mu's support points (n x d).
// The value matches tsw_sl with the same config bitwise. Requires a
// splitting map that is constant in x.
std::pair<double, Eigen::MatrixXd> tsw_sl_grad(const DiscreteMeasure& mu,
                                               const DiscreteMeasure& nu,
                                               const TswConfig& cfg);

// Monte-Carlo Sliced p-Wasserstein over L uniform directions. Direction l
// is drawn from the same stream as the root-line direction of tree system
// l, so tsw_sl with k = 1 and sw with equal seeds use matched directions.
double sw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int L,
          double p, std::uint64_t seed);

// Loss (1/L) sum_l W_p^p along the sampled directions and its gradient
// with respect to mu's support points; used by gradient flows.
std::pair<double, Eigen::MatrixXd> sw_pp_grad(const DiscreteMeasure& mu,
                                              const DiscreteMeasure& nu, int L,
                                              double p, std::uint64_t seed);

// Max Sliced Wasserstein: projected gradient ascent on the unit sphere
// (tangent-space step, then renormalization). Returns W_p along the final
// direction and that direction.
std::pair<double, Eigen::VectorXd> max_sw(const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu,
                                          const MaxConfig& cfg, double p);

// W_p along one fixed direction and its gradient with respect to mu's
// support points (used by the max-sw gradient flow).
std::pair<double, Eigen::MatrixXd> sw_fixed_direction_grad(
    const DiscreteMeasure& mu, const DiscreteMeasure& nu,
    const Eigen::VectorXd& theta, double p);

// Max Tree-Sliced Wasserstein on Systems of Lines: ascent on the chain
// parameters (x_1, t_2..t_k, theta_1..theta_k), directions renormalized
// after each step. Returns the best value seen and its tree system, so the
// result is never below the value at initialization.
std::pair<double, TreeSystem> max_tsw_sl(const DiscreteMeasure& mu,
                                         const DiscreteMeasure& nu,
                                         const MaxConfig& cfg);

// Gradient of the tree-Wasserstein on one fixed tree system with respect
// to mu's support points (used by tsw_sl_grad and the max-variant flows).
std::pair<double, Eigen::MatrixXd> tw_grad_fixed_tree(
    const DiscreteMeasure& mu, const DiscreteMeasure& nu, const TreeSystem& ts,
    const SplittingMap& alpha);

}  // namespace tsw
