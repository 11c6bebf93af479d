#include "tsw/distances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "tsw/parallel.hpp"
#include "tsw/rng.hpp"
#include "tsw/tree_wasserstein.hpp"

namespace tsw {

namespace {

SamplerOptions sampler_options(const TswConfig& cfg, const DiscreteMeasure& nu) {
  SamplerOptions opts;
  opts.root_box_halfwidth = cfg.root_box_halfwidth;
  opts.step_halfwidth = cfg.step_halfwidth;
  if (cfg.root_center)
    opts.root_center = *cfg.root_center;
  else if (cfg.root_at_data_mean)
    opts.root_center = nu.mean().transpose();
  return opts;
}

int config_lines(const TswConfig& cfg) {
  if (cfg.representation) {
    if (!cfg.representation->valid())
      throw std::invalid_argument("tsw_sl: invalid tree representation");
    return cfg.representation->total_lines();
  }
  return cfg.lines;
}

TreeSystem sample_tree(const TswConfig& cfg, int d, const SamplerOptions& opts,
                       std::uint64_t key) {
  if (cfg.representation)
    return sample_from_representation(*cfg.representation, d, key, opts);
  return sample_chain(cfg.lines, d, key, opts);
}

void check_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim())
    throw std::invalid_argument("measure dimensions differ");
  if (mu.size() == 0 || nu.size() == 0)
    throw std::invalid_argument("empty measure");
}

// Gradient of the tree-Wasserstein value with respect to mu's support
// points, for a node tree that was built from (mu, nu) on ts. An atom's
// line-l coordinate is <a - x_l, theta_l>, so its derivative is theta_l.
Eigen::MatrixXd mu_point_grad(const NodeTree& nt, const TreeSystem& ts,
                              const TwGradient& g, int n, int d) {
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, d);
  for (size_t v = 0; v < nt.nodes.size(); ++v) {
    const TreeNode& node = nt.nodes[v];
    if (node.kind != NodeKind::kAtomMu || g.coord_grad[v] == 0.0) continue;
    grad.row(node.origin) += g.coord_grad[v] * ts.directions.row(node.line);
  }
  return grad;
}

// W_p^p between sorted-by-merge 1D measures plus derivatives of W_p^p with
// respect to the atom coordinates, via the quantile coupling.
double w1d_pp_grad(const Eigen::VectorXd& xs, const Eigen::VectorXd& ws,
                   const Eigen::VectorXd& ys, const Eigen::VectorXd& vs,
                   double p, Eigen::VectorXd* gx, Eigen::VectorXd* gy) {
  auto sorted_idx = [](const Eigen::VectorXd& v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&v](int a, int b) { return v[a] < v[b]; });
    return idx;
  };
  std::vector<int> ix = sorted_idx(xs), iy = sorted_idx(ys);
  if (gx) gx->setZero(xs.size());
  if (gy) gy->setZero(ys.size());

  double total = 0.0;
  size_t i = 0, j = 0;
  double a = ws[ix[0]], b = vs[iy[0]];
  while (i < ix.size() && j < iy.size()) {
    double m = std::min(a, b);
    double delta = xs[ix[i]] - ys[iy[j]];
    double ad = std::abs(delta);
    total += m * std::pow(ad, p);
    if (ad > 0) {
      double s = delta > 0 ? 1.0 : -1.0;
      double dpp = m * p * std::pow(ad, p - 1.0) * s;
      if (gx) (*gx)[ix[i]] += dpp;
      if (gy) (*gy)[iy[j]] -= dpp;
    }
    a -= m;
    b -= m;
    if (a <= 0 && ++i < ix.size()) a = ws[ix[i]];
    if (b <= 0 && ++j < iy.size()) b = vs[iy[j]];
  }
  return total;
}

}  // namespace

double tsw_sl(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
              const TswConfig& cfg) {
  check_pair(mu, nu);
  if (cfg.trees <= 0) throw std::invalid_argument("tsw_sl: trees must be > 0");
  const int d = mu.dim();
  const int k = config_lines(cfg);
  const SamplerOptions opts = sampler_options(cfg, nu);
  const SplittingMap alpha =
      parse_splitting(cfg.splitting, k, rng::derive(cfg.seed, "alpha"));

  std::vector<double> values(cfg.trees, 0.0);
  parallel_for(cfg.trees, [&](std::size_t l) {
    TreeSystem ts = sample_tree(cfg, d, opts, rng::derive(cfg.seed, "tree", l));
    NodeTree nt = build_node_tree(ts, project(mu, ts, alpha),
                                  project(nu, ts, alpha));
    values[l] = tw_closed_form(nt);
  });
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / cfg.trees;
}

std::pair<double, Eigen::MatrixXd> tsw_sl_grad(const DiscreteMeasure& mu,
                                               const DiscreteMeasure& nu,
                                               const TswConfig& cfg) {
  check_pair(mu, nu);
  if (cfg.trees <= 0) throw std::invalid_argument("tsw_sl: trees must be > 0");
  const int d = mu.dim();
  const int k = config_lines(cfg);
  const SamplerOptions opts = sampler_options(cfg, nu);
  const SplittingMap alpha =
      parse_splitting(cfg.splitting, k, rng::derive(cfg.seed, "alpha"));
  if (!alpha.constant())
    throw std::invalid_argument(
        "tsw_sl_grad: point-dependent splitting maps are not differentiable "
        "here");

  std::vector<double> values(cfg.trees, 0.0);
  std::vector<Eigen::MatrixXd> grads(cfg.trees);
  parallel_for(cfg.trees, [&](std::size_t l) {
    TreeSystem ts = sample_tree(cfg, d, opts, rng::derive(cfg.seed, "tree", l));
    NodeTree nt = build_node_tree(ts, project(mu, ts, alpha),
                                  project(nu, ts, alpha));
    TwGradient g = tw_subgradient(nt);
    values[l] = g.value;
    grads[l] = mu_point_grad(nt, ts, g, mu.size(), d);
  });
  double sum = 0.0;
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(mu.size(), d);
  for (int l = 0; l < cfg.trees; ++l) {
    sum += values[l];
    grad += grads[l];
  }
  return {sum / cfg.trees, grad / cfg.trees};
}

std::pair<double, Eigen::MatrixXd> tw_grad_fixed_tree(
    const DiscreteMeasure& mu, const DiscreteMeasure& nu, const TreeSystem& ts,
    const SplittingMap& alpha) {
  check_pair(mu, nu);
  NodeTree nt =
      build_node_tree(ts, project(mu, ts, alpha), project(nu, ts, alpha));
  TwGradient g = tw_subgradient(nt);
  return {g.value, mu_point_grad(nt, ts, g, mu.size(), mu.dim())};
}

double sw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int L,
          double p, std::uint64_t seed) {
  check_pair(mu, nu);
  if (L <= 0) throw std::invalid_argument("sw: L must be > 0");
  if (p < 1) throw std::invalid_argument("sw: p must be >= 1");
  const int d = mu.dim();
  std::vector<double> values(L, 0.0);
  parallel_for(L, [&](std::size_t l) {
    rng::Stream dir_stream(rng::derive(rng::derive(seed, "tree", l), "dir", 0));
    Eigen::VectorXd theta = dir_stream.unit_sphere(d);
    values[l] = w1d_pp_grad(mu.points * theta, mu.weights, nu.points * theta,
                            nu.weights, p, nullptr, nullptr);
  });
  double sum = 0.0;
  for (double v : values) sum += v;
  return std::pow(sum / L, 1.0 / p);
}

std::pair<double, Eigen::MatrixXd> sw_pp_grad(const DiscreteMeasure& mu,
                                              const DiscreteMeasure& nu, int L,
                                              double p, std::uint64_t seed) {
  check_pair(mu, nu);
  if (L <= 0) throw std::invalid_argument("sw: L must be > 0");
  const int d = mu.dim();
  std::vector<double> values(L, 0.0);
  std::vector<Eigen::MatrixXd> grads(L);
  parallel_for(L, [&](std::size_t l) {
    rng::Stream dir_stream(rng::derive(rng::derive(seed, "tree", l), "dir", 0));
    Eigen::VectorXd theta = dir_stream.unit_sphere(d);
    Eigen::VectorXd gx;
    values[l] = w1d_pp_grad(mu.points * theta, mu.weights, nu.points * theta,
                            nu.weights, p, &gx, nullptr);
    grads[l] = gx * theta.transpose();
  });
  double sum = 0.0;
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(mu.size(), d);
  for (int l = 0; l < L; ++l) {
    sum += values[l];
    grad += grads[l];
  }
  return {sum / L, grad / L};
}

std::pair<double, Eigen::MatrixXd> sw_fixed_direction_grad(
    const DiscreteMeasure& mu, const DiscreteMeasure& nu,
    const Eigen::VectorXd& theta, double p) {
  check_pair(mu, nu);
  Eigen::VectorXd gx;
  double v = w1d_pp_grad(mu.points * theta, mu.weights, nu.points * theta,
                         nu.weights, p, &gx, nullptr);
  if (v <= 0) return {0.0, Eigen::MatrixXd::Zero(mu.size(), mu.dim())};
  // d W / d coords = (1/p) V^{1/p - 1} d V / d coords, then chain to points.
  Eigen::VectorXd gw = (std::pow(v, 1.0 / p - 1.0) / p) * gx;
  return {std::pow(v, 1.0 / p), gw * theta.transpose()};
}

std::pair<double, Eigen::VectorXd> max_sw(const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu,
                                          const MaxConfig& cfg, double p) {
  check_pair(mu, nu);
  const int d = mu.dim();
  rng::Stream init(rng::derive(cfg.seed, "direction"));
  Eigen::VectorXd theta = init.unit_sphere(d);

  for (int it = 0; it < cfg.iterations; ++it) {
    Eigen::VectorXd gx, gy;
    double v = w1d_pp_grad(mu.points * theta, mu.weights, nu.points * theta,
                           nu.weights, p, &gx, &gy);
    if (v <= 0) break;  // measures coincide along theta; gradient vanishes
    // dV/dtheta via the chain rule through both projection vectors, then
    // dW/dtheta = (1/p) V^{1/p - 1} dV/dtheta.
    Eigen::VectorXd dv = mu.points.transpose() * gx + nu.points.transpose() * gy;
    Eigen::VectorXd grad = (std::pow(v, 1.0 / p - 1.0) / p) * dv;
    grad -= grad.dot(theta) * theta;  // tangent space of the sphere
    theta += cfg.learning_rate * grad;
    double norm = theta.norm();
    if (norm <= 0 || !std::isfinite(norm)) break;
    theta /= norm;
  }
  double value = std::pow(
      w1d_pp_grad(mu.points * theta, mu.weights, nu.points * theta, nu.weights,
                  p, nullptr, nullptr),
      1.0 / p);
  return {value, theta};
}

std::pair<double, TreeSystem> max_tsw_sl(const DiscreteMeasure& mu,
                                         const DiscreteMeasure& nu,
                                         const MaxConfig& cfg) {
  check_pair(mu, nu);
  const int d = mu.dim();
  const int k = cfg.lines;
  if (k < 1) throw std::invalid_argument("max_tsw_sl: need at least one line");
  const SplittingMap alpha =
      parse_splitting(cfg.splitting, k, rng::derive(cfg.seed, "alpha"));
  if (!alpha.constant())
    throw std::invalid_argument(
        "max_tsw_sl: point-dependent splitting maps are not supported");

  SamplerOptions opts;
  opts.root_box_halfwidth = cfg.root_box_halfwidth;
  opts.step_halfwidth = cfg.step_halfwidth;
  if (cfg.root_at_data_mean) opts.root_center = nu.mean().transpose();
  TreeSystem init = sample_chain(k, d, rng::derive(cfg.seed, "init"), opts);

  // Chain parameters: root source x1, steps t_l (l >= 1, the attachment
  // parameter of line l on line l-1), and one direction per line.
  Eigen::VectorXd x1 = init.sources.row(0).transpose();
  Eigen::VectorXd t = init.attach_coord.tail(k - 1 > 0 ? k - 1 : 0);
  Eigen::MatrixXd theta = init.directions;

  auto build = [&]() {
    TreeSystem ts;
    ts.sources.resize(k, d);
    ts.directions = theta;
    ts.parent.assign(k, -1);
    ts.attach_coord = Eigen::VectorXd::Zero(k);
    ts.sources.row(0) = x1.transpose();
    for (int l = 1; l < k; ++l) {
      ts.parent[l] = l - 1;
      ts.attach_coord[l] = t[l - 1];
      ts.sources.row(l) = ts.sources.row(l - 1) + t[l - 1] * theta.row(l - 1);
    }
    return ts;
  };

  double best_value = -1.0;
  TreeSystem best_ts;

  for (int it = 0; it <= cfg.iterations; ++it) {
    TreeSystem ts = build();
    NodeTree nt =
        build_node_tree(ts, project(mu, ts, alpha), project(nu, ts, alpha));
    TwGradient g = tw_subgradient(nt);
    if (g.value > best_value) {
      best_value = g.value;
      best_ts = ts;
    }
    if (it == cfg.iterations) break;

    // Per-line direct gradients. Atom coordinates on line l are
    // <a - x_l, theta_l>; the attachment parameter of line l is its entry
    // node's own-line coordinate on the parent line.
    Eigen::MatrixXd g_theta = Eigen::MatrixXd::Zero(k, d);
    Eigen::MatrixXd g_x = Eigen::MatrixXd::Zero(k, d);
    Eigen::VectorXd coord_sum = Eigen::VectorXd::Zero(k);
    for (size_t v = 0; v < nt.nodes.size(); ++v) {
      const TreeNode& node = nt.nodes[v];
      double cg = g.coord_grad[v];
      if (cg == 0.0) continue;
      if (node.kind == NodeKind::kAtomMu || node.kind == NodeKind::kAtomNu) {
        const Eigen::MatrixXd& pts =
            node.kind == NodeKind::kAtomMu ? mu.points : nu.points;
        int l = node.line;
        g_theta.row(l) += cg * (pts.row(node.origin) - ts.sources.row(l));
        coord_sum[l] += cg;
      }
    }
    for (int l = 0; l < k; ++l) g_x.row(l) = -coord_sum[l] * theta.row(l);

    // x_l = x1 + sum_{i<=l} t_i theta_{i-1}: suffix sums push source
    // gradients back onto x1, the steps, and the preceding directions.
    Eigen::MatrixXd suffix = g_x;
    for (int l = k - 2; l >= 0; --l) suffix.row(l) += suffix.row(l + 1);

    Eigen::VectorXd grad_x1 = suffix.row(0).transpose();
    Eigen::VectorXd grad_t = Eigen::VectorXd::Zero(std::max(k - 1, 0));
    for (int l = 1; l < k; ++l) {
      grad_t[l - 1] = suffix.row(l).dot(theta.row(l - 1)) +
                      g.coord_grad[nt.entry_node[l]];
    }
    Eigen::MatrixXd grad_theta = g_theta;
    for (int l = 0; l + 1 < k; ++l)
      grad_theta.row(l) += t[l] * suffix.row(l + 1);

    x1 += cfg.learning_rate * grad_x1;
    t += cfg.learning_rate * grad_t;
    for (int l = 0; l < k; ++l) {
      Eigen::RowVectorXd gr = grad_theta.row(l);
      gr -= gr.dot(theta.row(l)) * theta.row(l);
      Eigen::RowVectorXd cand = theta.row(l) + cfg.learning_rate * gr;
      double norm = cand.norm();
      if (norm > 0 && std::isfinite(norm)) theta.row(l) = cand / norm;
    }
    if (!x1.allFinite() || !t.allFinite()) break;
  }
  return {best_value, best_ts};
}

}  // namespace tsw
