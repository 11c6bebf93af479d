#include "tsw/exact_ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

namespace tsw {

double wasserstein_1d(const Eigen::VectorXd& xs, const Eigen::VectorXd& ws,
                      const Eigen::VectorXd& ys, const Eigen::VectorXd& vs,
                      double p) {
  if (p < 1) throw std::invalid_argument("wasserstein_1d: p must be >= 1");
  if (xs.size() != ws.size() || ys.size() != vs.size() || xs.size() == 0 ||
      ys.size() == 0)
    throw std::invalid_argument("wasserstein_1d: bad atom arrays");
  if (std::abs(ws.sum() - 1.0) > 1e-9 || std::abs(vs.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("wasserstein_1d: weights must sum to 1");

  auto sorted_idx = [](const Eigen::VectorXd& v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&v](int a, int b) { return v[a] < v[b]; });
    return idx;
  };
  std::vector<int> ix = sorted_idx(xs), iy = sorted_idx(ys);

  double total = 0.0;
  size_t i = 0, j = 0;
  double a = ws[ix[0]], b = vs[iy[0]];
  while (i < ix.size() && j < iy.size()) {
    double m = std::min(a, b);
    total += m * std::pow(std::abs(xs[ix[i]] - ys[iy[j]]), p);
    a -= m;
    b -= m;
    if (a <= 0 && ++i < ix.size()) a = ws[ix[i]];
    if (b <= 0 && ++j < iy.size()) b = vs[iy[j]];
  }
  return std::pow(total, 1.0 / p);
}

double exact_ot(const Eigen::VectorXd& mu_w, const Eigen::VectorXd& nu_w,
                const CostMatrix& cm) {
  const int n = static_cast<int>(mu_w.size());
  const int m = static_cast<int>(nu_w.size());
  if (cm.cost.rows() != n || cm.cost.cols() != m)
    throw std::invalid_argument("exact_ot: cost shape mismatch");
  if (static_cast<long long>(n) * m > 10'000'000)
    throw std::invalid_argument("exact_ot: instance exceeds capacity guard");
  if ((cm.cost.array() < 0).any() || !cm.cost.allFinite())
    throw std::invalid_argument("exact_ot: cost must be nonnegative and finite");
  if (std::abs(mu_w.sum() - 1.0) > 1e-9 || std::abs(nu_w.sum() - 1.0) > 1e-9 ||
      (mu_w.array() < 0).any() || (nu_w.array() < 0).any())
    throw std::invalid_argument("exact_ot: infeasible marginals");

  // Successive shortest augmenting paths with Johnson potentials on the
  // complete bipartite graph. Real-valued supplies: each augmentation
  // saturates a source or a sink, so there are at most n + m of them.
  std::vector<double> supply(mu_w.data(), mu_w.data() + n);
  std::vector<double> demand(nu_w.data(), nu_w.data() + m);
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, m);
  std::vector<double> pot_u(n, 0.0), pot_v(m, 0.0);

  const double inf = std::numeric_limits<double>::infinity();
  const double eps = 1e-13 * std::max(1.0, cm.cost.maxCoeff());

  double remaining = 1.0;
  while (remaining > 1e-15) {
    // Dijkstra over the residual graph from all unsaturated sources.
    std::vector<double> dist_u(n, inf), dist_v(m, inf);
    std::vector<int> from_v(m, -1);   // source row reaching column j
    std::vector<int> from_u(n, -1);   // column reaching row i (backward arc)
    std::vector<char> done_u(n, 0), done_v(m, 0);
    using Item = std::pair<double, int>;  // (dist, node); cols offset by n
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int i = 0; i < n; ++i)
      if (supply[i] > 1e-15) {
        dist_u[i] = 0.0;
        pq.push({0.0, i});
      }
    int sink = -1;
    while (!pq.empty()) {
      auto [du, node] = pq.top();
      pq.pop();
      if (node < n) {
        if (done_u[node] || du > dist_u[node]) continue;
        done_u[node] = 1;
        for (int j = 0; j < m; ++j) {
          double rc = cm.cost(node, j) - pot_u[node] - pot_v[j];
          if (rc < -eps) rc = 0.0;  // rounding guard
          rc = std::max(rc, 0.0);
          if (du + rc < dist_v[j] - 1e-18) {
            dist_v[j] = du + rc;
            from_v[j] = node;
            pq.push({dist_v[j], n + j});
          }
        }
      } else {
        int j = node - n;
        if (done_v[j] || du > dist_v[j]) continue;
        done_v[j] = 1;
        if (demand[j] > 1e-15 && sink == -1) sink = j;
        for (int i = 0; i < n; ++i) {
          if (flow(i, j) <= 0) continue;
          double rc = -(cm.cost(i, j) - pot_u[i] - pot_v[j]);
          if (rc < -eps) rc = 0.0;
          rc = std::max(rc, 0.0);
          if (du + rc < dist_u[i] - 1e-18) {
            dist_u[i] = du + rc;
            from_u[i] = j;
            pq.push({dist_u[i], i});
          }
        }
      }
    }
    if (sink == -1)
      throw std::runtime_error("exact_ot: no augmenting path (infeasible)");

    // Bottleneck along the path, then augment.
    double bottleneck = demand[sink];
    {
      int j = sink;
      while (true) {
        int i = from_v[j];
        int jprev = from_u[i];
        if (jprev == -1) {
          bottleneck = std::min(bottleneck, supply[i]);
          break;
        }
        bottleneck = std::min(bottleneck, flow(i, jprev));
        j = jprev;
      }
    }
    {
      int j = sink;
      while (true) {
        int i = from_v[j];
        flow(i, j) += bottleneck;
        int jprev = from_u[i];
        if (jprev == -1) {
          supply[i] -= bottleneck;
          break;
        }
        flow(i, jprev) -= bottleneck;
        j = jprev;
      }
      demand[sink] -= bottleneck;
    }
    remaining -= bottleneck;

    // Johnson update capped at the sink distance; unreached nodes move by
    // the cap so every residual arc keeps a nonnegative reduced cost.
    const double dcap = dist_v[sink];
    for (int i = 0; i < n; ++i) pot_u[i] -= std::min(dist_u[i], dcap);
    for (int j = 0; j < m; ++j) pot_v[j] += std::min(dist_v[j], dcap);
  }
  return (flow.array() * cm.cost.array()).sum();
}

double wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     double p) {
  if (mu.dim() != nu.dim())
    throw std::invalid_argument("wasserstein_p: dimension mismatch");
  CostMatrix cm;
  cm.cost.resize(mu.size(), nu.size());
  for (int i = 0; i < mu.size(); ++i)
    for (int j = 0; j < nu.size(); ++j)
      cm.cost(i, j) =
          std::pow((mu.points.row(i) - nu.points.row(j)).norm(), p);
  return std::pow(exact_ot(mu.weights, nu.weights, cm), 1.0 / p);
}

CostMatrix tree_cost_matrix(const TreeSystem& ts, const ProjectedMeasure& pm_mu,
                            const ProjectedMeasure& pm_nu) {
  std::vector<GroundPoint> gm, gn;
  for (int l = 0; l < pm_mu.line_count(); ++l)
    for (const auto& a : pm_mu.lines[l]) gm.push_back({l, a.coord});
  for (int l = 0; l < pm_nu.line_count(); ++l)
    for (const auto& a : pm_nu.lines[l]) gn.push_back({l, a.coord});
  CostMatrix cm;
  cm.ground_metric = "tree";
  cm.cost.resize(gm.size(), gn.size());
  for (size_t i = 0; i < gm.size(); ++i)
    for (size_t j = 0; j < gn.size(); ++j)
      cm.cost(i, j) = tree_distance(ts, gm[i], gn[j]);
  return cm;
}

Eigen::VectorXd flatten_masses(const ProjectedMeasure& pm) {
  std::vector<double> w;
  for (const auto& line : pm.lines)
    for (const auto& a : line) w.push_back(a.mass);
  return Eigen::Map<Eigen::VectorXd>(w.data(), w.size());
}

}  // namespace tsw
