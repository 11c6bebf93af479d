#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tsw {

// A line in R^d: source point and unit direction, parameterized x + t*theta.
struct Line {
  Eigen::VectorXd source;
  Eigen::VectorXd direction;
};

// k lines with a canonical rooted-tree attachment structure: line 0 is the
// root; for i >= 1, the source of line i lies on its parent line at
// parameter attach_coord[i].
struct TreeSystem {
  Eigen::MatrixXd sources;     // k x d
  Eigen::MatrixXd directions;  // k x d, unit rows
  std::vector<int> parent;     // parent[0] == -1
  Eigen::VectorXd attach_coord;

  int lines() const { return static_cast<int>(sources.rows()); }
  int dim() const { return static_cast<int>(sources.cols()); }

  // Projection parameter of point a on line l: <a - source_l, dir_l>.
  double project(const Eigen::VectorXd& a, int l) const {
    return directions.row(l).dot(a.transpose() - sources.row(l));
  }
};

// Checks the TreeSystem invariants (rooted tree, unit directions, canonical
// attachment within tol). Throws std::invalid_argument on violation.
void check_tree_system(const TreeSystem& ts, double tol = 1e-9);

// Level-count encoding of a rooted tree shape: levels[0] = {1}; each level's
// length equals the sum of the previous level's entries.
struct TreeRepresentation {
  std::vector<std::vector<int>> levels;
  int total_lines() const;
  bool valid() const;
};

struct SamplerOptions {
  double root_box_halfwidth = 1.0;  // root source ~ U(center + [-h, h]^d)
  double step_halfwidth = 1.0;      // attachment parameter ~ U([-s, s])
  Eigen::VectorXd root_center;      // empty means origin
};

// Chain-like tree system: parent[i] = i-1, sources laid out as
// x_i = x_{i-1} + t_i * theta_{i-1}. Deterministic given key.
TreeSystem sample_chain(int k, int d, std::uint64_t key,
                        const SamplerOptions& opts = {});

// Tree system realizing an arbitrary representation: each level places the
// prescribed number of child sources on its parent lines, in sampling order.
TreeSystem sample_from_representation(const TreeRepresentation& rep, int d,
                                      std::uint64_t key,
                                      const SamplerOptions& opts = {});

// A point of the ground set: parameter `coord` on line `line_index`.
struct GroundPoint {
  int line_index;
  double coord;
};

// Length of the unique path between a and b through the tree structure.
double tree_distance(const TreeSystem& ts, const GroundPoint& a,
                     const GroundPoint& b);

// JSON dump/load: arrays "sources", "directions", "parent", "attach_coord".
std::string tree_system_to_json(const TreeSystem& ts);
TreeSystem tree_system_from_json(const std::string& text);

}  // namespace tsw
