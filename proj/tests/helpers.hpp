#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tsw/measure.hpp"
#include "tsw/rng.hpp"
#include "tsw/tree_wasserstein.hpp"

namespace tsw::test {

// Random measure with points in [-1, 1]^d; random positive weights when
// weighted is set, uniform weights otherwise.
inline DiscreteMeasure random_measure(int n, int d, std::uint64_t key,
                                      bool weighted = true) {
  rng::Stream s(key);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i)
    pts.row(i) = s.uniform_vector(d, -1.0, 1.0).transpose();
  if (!weighted) return validate_and_normalize(pts);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = s.uniform(0.1, 1.0);
  return validate_and_normalize(pts, w);
}

// Reference tree-Wasserstein on a NodeTree evaluated from an arbitrary
// root by depth-first traversal over the undirected edge set. Used to
// check that the closed form does not depend on the rooting.
inline double tw_rerooted(const NodeTree& nt, int new_root) {
  const int n = static_cast<int>(nt.nodes.size());
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (int v = 0; v < n; ++v) {
    int p = nt.nodes[v].parent;
    if (p < 0) continue;
    adj[v].push_back({p, nt.nodes[v].up_weight});
    adj[p].push_back({v, nt.nodes[v].up_weight});
  }
  double total = 0.0;
  std::vector<int> stack{new_root}, parent(n, -1), order;
  std::vector<char> seen(n, 0);
  seen[new_root] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (auto [v, w] : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        parent[v] = u;
        stack.push_back(v);
      }
  }
  std::vector<double> smu(n), snu(n), up_w(n, 0.0);
  for (int v = 0; v < n; ++v) {
    smu[v] = nt.nodes[v].mass_mu;
    snu[v] = nt.nodes[v].mass_nu;
  }
  for (int v = 0; v < n; ++v)
    for (auto [u, w] : adj[v])
      if (parent[v] == u) up_w[v] = w;
  for (int i = n; i-- > 1;) {
    int v = order[i];
    total += up_w[v] * std::abs(smu[v] - snu[v]);
    smu[parent[v]] += smu[v];
    snu[parent[v]] += snu[v];
  }
  return total;
}

}  // namespace tsw::test
