#pragma once

#include <vector>

#include "tsw/radon.hpp"
#include "tsw/tree_system.hpp"

namespace tsw {

enum class NodeKind { kRoot, kSource, kAtomMu, kAtomNu };

// A node of the finite rooted tree induced by two projected measures on a
// tree system. `line`/`coord` give the node's own parameterization: for a
// kSource node (the attachment point of child line `origin`) that is the
// parent line and the attachment parameter; the same node also acts as the
// child line's entry at parameter 0.
struct TreeNode {
  int line;
  double coord;
  NodeKind kind;
  int origin;  // input-atom index (atoms) or child line index (kSource)
  double mass_mu = 0.0;
  double mass_nu = 0.0;

  int parent = -1;      // node id of the neighbor toward the root
  double up_weight = 0.0;
  int up_line = -1;     // line the parent edge lies on
  double up_child_coord = 0.0;   // this node's parameter on up_line
  double up_parent_coord = 0.0;  // parent's parameter on up_line
};

struct NodeTree {
  std::vector<TreeNode> nodes;
  int root = 0;
  std::vector<int> order;           // parents before children
  std::vector<int> entry_node;      // per line: entry node id (root for line 0)
};

struct TwGradient {
  double value = 0.0;
  // d value / d nodes[i].coord (the node's own-line parameter). Entries for
  // fixed parameters (root, entry side of child-line edges) stay zero.
  std::vector<double> coord_grad;
  // d value / d (mass added to mu resp. nu at node i); valid subgradients
  // at ties, exact gradients elsewhere.
  std::vector<double> mass_grad_mu;
  std::vector<double> mass_grad_nu;
};

// Induced node tree: per line, atoms of both measures, child attachment
// points and the line's entry point, consecutive sorted nodes joined by
// edges; a child line's entry is identified with its attachment node on the
// parent line.
NodeTree build_node_tree(const TreeSystem& ts, const ProjectedMeasure& pm_mu,
                         const ProjectedMeasure& pm_nu);

// Closed-form tree-Wasserstein-1: sum over edges of w_e * |S_mu - S_nu|
// with S the subtree mass below the edge. One post-order accumulation.
double tw_closed_form(const NodeTree& nt);

TwGradient tw_subgradient(const NodeTree& nt);

}  // namespace tsw
