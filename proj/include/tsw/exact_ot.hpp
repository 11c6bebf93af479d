#pragma once

#include <Eigen/Dense>

#include "tsw/measure.hpp"
#include "tsw/radon.hpp"
#include "tsw/tree_system.hpp"

namespace tsw {

struct CostMatrix {
  Eigen::MatrixXd cost;  // n x m, nonnegative finite entries
  std::string ground_metric = "euclidean-p";
};

// Exact 1D p-Wasserstein between discrete measures via the quantile
// coupling: merge over cumulative-weight breakpoints of the sorted atoms.
// Weights must each sum to 1 within 1e-9.
double wasserstein_1d(const Eigen::VectorXd& xs, const Eigen::VectorXd& ws,
                      const Eigen::VectorXd& ys, const Eigen::VectorXd& vs,
                      double p);

// Exact optimum of the transportation LP min_pi <pi, cost> with marginals
// (mu_w, nu_w), solved by successive shortest augmenting paths with
// potentials on the bipartite graph. Capacity guard: n*m <= 1e7.
double exact_ot(const Eigen::VectorXd& mu_w, const Eigen::VectorXd& nu_w,
                const CostMatrix& cost);

// Exact W_p between point clouds under the Euclidean ground metric:
// (min-coupling of ||a - b||^p)^(1/p).
double wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     double p);

// Pairwise tree distances between the atoms of two projected measures
// (atoms flattened in line-major order), for use as an LP ground cost.
CostMatrix tree_cost_matrix(const TreeSystem& ts, const ProjectedMeasure& pm_mu,
                            const ProjectedMeasure& pm_nu);

// Marginals of a projected measure, flattened in line-major order.
Eigen::VectorXd flatten_masses(const ProjectedMeasure& pm);

}  // namespace tsw
