#include "tsw/tree_wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsw {

namespace {

// An occurrence of a node on a specific line, at parameter `coord` on that
// line. Entry occurrences reuse the node created on the parent line.
struct Event {
  double coord;
  int rank;  // tie order: entry/root 0, attach 1, mu atom 2, nu atom 3
  int origin;
  int node;
};

inline int sign(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace

NodeTree build_node_tree(const TreeSystem& ts, const ProjectedMeasure& pm_mu,
                         const ProjectedMeasure& pm_nu) {
  const int k = ts.lines();
  if (pm_mu.line_count() != k || pm_nu.line_count() != k)
    throw std::invalid_argument("build_node_tree: mismatched tree systems");

  NodeTree nt;
  nt.entry_node.assign(k, -1);

  std::vector<std::vector<int>> children(k);
  for (int i = 1; i < k; ++i) children[ts.parent[i]].push_back(i);

  auto add_node = [&nt](int line, double coord, NodeKind kind, int origin) {
    nt.nodes.push_back(TreeNode{line, coord, kind, origin});
    return static_cast<int>(nt.nodes.size()) - 1;
  };
  size_t total = static_cast<size_t>(k);
  for (int l = 0; l < k; ++l)
    total += pm_mu.lines[l].size() + pm_nu.lines[l].size();
  nt.nodes.reserve(total);

  // Root node: source of line 0 at parameter 0.
  nt.root = add_node(0, 0.0, NodeKind::kRoot, -1);
  nt.entry_node[0] = nt.root;

  // Per line, the sorted occurrence list. Lines are processed in index
  // order, so a child's entry node exists by the time its line is reached
  // (attachment nodes are created while processing the parent line).
  std::vector<std::vector<Event>> events(k);
  for (int l = 0; l < k; ++l) {
    auto& ev = events[l];
    ev.reserve(1 + children[l].size() + pm_mu.lines[l].size() +
               pm_nu.lines[l].size());
    ev.push_back({0.0, 0, -1, nt.entry_node[l]});
    for (int c : children[l]) {
      int id = add_node(l, ts.attach_coord[c], NodeKind::kSource, c);
      nt.entry_node[c] = id;
      ev.push_back({ts.attach_coord[c], 1, c, id});
    }
    for (const auto& a : pm_mu.lines[l]) {
      int id = add_node(l, a.coord, NodeKind::kAtomMu, a.origin);
      nt.nodes[id].mass_mu = a.mass;
      ev.push_back({a.coord, 2, a.origin, id});
    }
    for (const auto& a : pm_nu.lines[l]) {
      int id = add_node(l, a.coord, NodeKind::kAtomNu, a.origin);
      nt.nodes[id].mass_nu = a.mass;
      ev.push_back({a.coord, 3, a.origin, id});
    }
    std::sort(ev.begin(), ev.end(), [](const Event& x, const Event& y) {
      if (x.coord != y.coord) return x.coord < y.coord;
      if (x.rank != y.rank) return x.rank < y.rank;
      return x.origin < y.origin;
    });
  }

  // Each line's occurrences form a chain, and the only connections to the
  // rest of the tree are the entry node (up) and attachment nodes (down),
  // all of which lie on the chain itself. So orienting toward the root
  // means pointing every occurrence at its neighbor on the entry side; no
  // adjacency structure is needed. Lines are handled in index order and
  // chains are walked outward from the entry, which yields a parents-first
  // order (a line's entry node was emitted with its parent line).
  nt.order.clear();
  nt.order.reserve(nt.nodes.size());
  nt.order.push_back(nt.root);
  for (int l = 0; l < k; ++l) {
    const auto& ev = events[l];
    size_t e = 0;
    while (ev[e].node != nt.entry_node[l]) ++e;
    auto link = [&nt, l](const Event& child, const Event& parent) {
      TreeNode& v = nt.nodes[child.node];
      v.parent = parent.node;
      v.up_weight = std::abs(child.coord - parent.coord);
      v.up_line = l;
      v.up_child_coord = child.coord;
      v.up_parent_coord = parent.coord;
      nt.order.push_back(child.node);
    };
    for (size_t i = e + 1; i < ev.size(); ++i) link(ev[i], ev[i - 1]);
    for (size_t i = e; i-- > 0;) link(ev[i], ev[i + 1]);
  }
  if (nt.order.size() != nt.nodes.size())
    throw std::logic_error("build_node_tree: disconnected node set");
  return nt;
}

double tw_closed_form(const NodeTree& nt) {
  const size_t n = nt.nodes.size();
  std::vector<double> smu(n), snu(n);
  for (size_t i = 0; i < n; ++i) {
    smu[i] = nt.nodes[i].mass_mu;
    snu[i] = nt.nodes[i].mass_nu;
  }
  double total = 0.0;
  for (size_t i = n; i-- > 1;) {  // reverse BFS order skips the root slot
    int v = nt.order[i];
    int p = nt.nodes[v].parent;
    total += nt.nodes[v].up_weight * std::abs(smu[v] - snu[v]);
    smu[p] += smu[v];
    snu[p] += snu[v];
  }
  return total;
}

TwGradient tw_subgradient(const NodeTree& nt) {
  const size_t n = nt.nodes.size();
  TwGradient g;
  g.coord_grad.assign(n, 0.0);
  g.mass_grad_mu.assign(n, 0.0);
  g.mass_grad_nu.assign(n, 0.0);

  std::vector<double> smu(n), snu(n);
  for (size_t i = 0; i < n; ++i) {
    smu[i] = nt.nodes[i].mass_mu;
    snu[i] = nt.nodes[i].mass_nu;
  }
  // Same reverse accumulation order as tw_closed_form so the values agree
  // bitwise.
  for (size_t i = n; i-- > 1;) {
    int v = nt.order[i];
    int p = nt.nodes[v].parent;
    g.value += nt.nodes[v].up_weight * std::abs(smu[v] - snu[v]);
    smu[p] += smu[v];
    snu[p] += snu[v];
  }

  for (size_t i = 1; i < n; ++i) {
    int v = nt.order[i];
    const TreeNode& node = nt.nodes[v];
    int p = node.parent;
    double c = smu[v] - snu[v];

    // Edge weight is |t_child - t_parent| on up_line; only endpoints whose
    // own-line parameter lies on that line are free. Zero-length tie edges
    // contribute the subgradient 0.
    if (node.up_child_coord != node.up_parent_coord) {
      double s = node.up_child_coord > node.up_parent_coord ? 1.0 : -1.0;
      if (node.line == node.up_line)
        g.coord_grad[v] += s * std::abs(c);
      const TreeNode& par = nt.nodes[p];
      if (par.line == node.up_line)
        g.coord_grad[p] -= s * std::abs(c);
    }

    g.mass_grad_mu[v] = g.mass_grad_mu[p] + node.up_weight * sign(c);
    g.mass_grad_nu[v] = g.mass_grad_nu[p] - node.up_weight * sign(c);
  }
  return g;
}

}  // namespace tsw
