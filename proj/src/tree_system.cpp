#include "tsw/tree_system.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "tsw/rng.hpp"

namespace tsw {

void check_tree_system(const TreeSystem& ts, double tol) {
  const int k = ts.lines();
  if (k < 1) throw std::invalid_argument("tree system: no lines");
  if (static_cast<int>(ts.parent.size()) != k ||
      ts.attach_coord.size() != k || ts.directions.rows() != k)
    throw std::invalid_argument("tree system: inconsistent array sizes");
  if (ts.parent[0] != -1)
    throw std::invalid_argument("tree system: line 0 must be the root");
  for (int i = 0; i < k; ++i) {
    if (std::abs(ts.directions.row(i).norm() - 1.0) > 1e-12)
      throw std::invalid_argument("tree system: direction not unit length");
    if (i >= 1) {
      if (ts.parent[i] < 0 || ts.parent[i] >= i)
        throw std::invalid_argument(
            "tree system: parent indices must precede children");
      Eigen::RowVectorXd expect =
          ts.sources.row(ts.parent[i]) +
          ts.attach_coord[i] * ts.directions.row(ts.parent[i]);
      if ((ts.sources.row(i) - expect).norm() > tol)
        throw std::invalid_argument(
            "tree system: source does not lie on parent line");
    }
  }
}

int TreeRepresentation::total_lines() const {
  int total = 0;
  for (const auto& lv : levels)
    total += std::accumulate(lv.begin(), lv.end(), 0);
  return total;
}

bool TreeRepresentation::valid() const {
  if (levels.empty()) return false;
  if (levels[0] != std::vector<int>{1}) return false;
  for (size_t i = 1; i < levels.size(); ++i) {
    int prev = std::accumulate(levels[i - 1].begin(), levels[i - 1].end(), 0);
    if (static_cast<int>(levels[i].size()) != prev) return false;
    for (int v : levels[i])
      if (v < 0) return false;
  }
  return true;
}

namespace {

Eigen::VectorXd root_center_or_origin(const SamplerOptions& opts, int d) {
  if (opts.root_center.size() == 0) return Eigen::VectorXd::Zero(d);
  if (opts.root_center.size() != d)
    throw std::invalid_argument("sampler: root_center dimension mismatch");
  return opts.root_center;
}

}  // namespace

TreeSystem sample_chain(int k, int d, std::uint64_t key,
                        const SamplerOptions& opts) {
  if (k < 1) throw std::invalid_argument("sample_chain: k must be >= 1");
  if (d < 1) throw std::invalid_argument("sample_chain: d must be >= 1");
  if (opts.root_box_halfwidth <= 0 || opts.step_halfwidth <= 0)
    throw std::invalid_argument("sample_chain: halfwidths must be positive");

  TreeSystem ts;
  ts.sources.resize(k, d);
  ts.directions.resize(k, d);
  ts.parent.assign(k, -1);
  ts.attach_coord = Eigen::VectorXd::Zero(k);

  const Eigen::VectorXd center = root_center_or_origin(opts, d);
  rng::Stream root(rng::derive(key, "root"));
  ts.sources.row(0) =
      (center + root.uniform_vector(d, -opts.root_box_halfwidth,
                                    opts.root_box_halfwidth))
          .transpose();
  ts.directions.row(0) =
      rng::Stream(rng::derive(key, "dir", 0)).unit_sphere(d).transpose();

  for (int i = 1; i < k; ++i) {
    double t = rng::Stream(rng::derive(key, "step", i))
                   .uniform(-opts.step_halfwidth, opts.step_halfwidth);
    ts.parent[i] = i - 1;
    ts.attach_coord[i] = t;
    ts.sources.row(i) = ts.sources.row(i - 1) + t * ts.directions.row(i - 1);
    ts.directions.row(i) =
        rng::Stream(rng::derive(key, "dir", i)).unit_sphere(d).transpose();
  }
  return ts;
}

TreeSystem sample_from_representation(const TreeRepresentation& rep, int d,
                                      std::uint64_t key,
                                      const SamplerOptions& opts) {
  if (!rep.valid())
    throw std::invalid_argument("sample_from_representation: invalid representation");
  const int k = rep.total_lines();
  if (k < 1)
    throw std::invalid_argument("sample_from_representation: zero lines");

  TreeSystem ts;
  ts.sources.resize(k, d);
  ts.directions.resize(k, d);
  ts.parent.assign(k, -1);
  ts.attach_coord = Eigen::VectorXd::Zero(k);

  const Eigen::VectorXd center = root_center_or_origin(opts, d);
  rng::Stream root(rng::derive(key, "root"));
  ts.sources.row(0) =
      (center + root.uniform_vector(d, -opts.root_box_halfwidth,
                                    opts.root_box_halfwidth))
          .transpose();
  ts.directions.row(0) =
      rng::Stream(rng::derive(key, "dir", 0)).unit_sphere(d).transpose();

  // Lines are indexed in sampling order: all of depth i before depth i+1.
  std::vector<int> prev_level{0};  // line indices of depth i-1
  int next = 1;
  for (size_t lvl = 1; lvl < rep.levels.size(); ++lvl) {
    std::vector<int> cur_level;
    const auto& counts = rep.levels[lvl];
    for (size_t j = 0; j < counts.size(); ++j) {
      int par = prev_level[j];
      for (int c = 0; c < counts[j]; ++c) {
        double t = rng::Stream(rng::derive(key, "step", next))
                       .uniform(-opts.step_halfwidth, opts.step_halfwidth);
        ts.parent[next] = par;
        ts.attach_coord[next] = t;
        ts.sources.row(next) =
            ts.sources.row(par) + t * ts.directions.row(par);
        ts.directions.row(next) =
            rng::Stream(rng::derive(key, "dir", next)).unit_sphere(d).transpose();
        cur_level.push_back(next);
        ++next;
      }
    }
    prev_level = std::move(cur_level);
  }
  return ts;
}

double tree_distance(const TreeSystem& ts, const GroundPoint& a,
                     const GroundPoint& b) {
  const int k = ts.lines();
  if (a.line_index < 0 || a.line_index >= k || b.line_index < 0 ||
      b.line_index >= k)
    throw std::invalid_argument("tree_distance: invalid line index");

  std::vector<int> depth(k, 0);
  for (int i = 1; i < k; ++i) depth[i] = depth[ts.parent[i]] + 1;

  // Lift the deeper point until both sit on the same line; climbing one
  // level costs |coord| (distance to the line's source at parameter 0).
  int la = a.line_index, lb = b.line_index;
  double ta = a.coord, tb = b.coord;
  double acc = 0.0;
  while (la != lb) {
    if (depth[la] >= depth[lb]) {
      acc += std::abs(ta);
      ta = ts.attach_coord[la];
      la = ts.parent[la];
    } else {
      acc += std::abs(tb);
      tb = ts.attach_coord[lb];
      lb = ts.parent[lb];
    }
  }
  return acc + std::abs(ta - tb);
}

std::string tree_system_to_json(const TreeSystem& ts) {
  nlohmann::json j;
  auto mat = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["sources"] = mat(ts.sources);
  j["directions"] = mat(ts.directions);
  j["parent"] = ts.parent;
  j["attach_coord"] = std::vector<double>(
      ts.attach_coord.data(), ts.attach_coord.data() + ts.attach_coord.size());
  return j.dump(2);
}

TreeSystem tree_system_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  auto mat = [](const nlohmann::json& rows) {
    Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        m(i, c) = rows[i][c].get<double>();
    return m;
  };
  TreeSystem ts;
  ts.sources = mat(j.at("sources"));
  ts.directions = mat(j.at("directions"));
  ts.parent = j.at("parent").get<std::vector<int>>();
  auto ac = j.at("attach_coord").get<std::vector<double>>();
  ts.attach_coord = Eigen::Map<Eigen::VectorXd>(ac.data(), ac.size());
  check_tree_system(ts);
  return ts;
}

}  // namespace tsw
