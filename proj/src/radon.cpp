#include "tsw/radon.hpp"

#include <algorithm>
#include <stdexcept>

namespace tsw {

double ProjectedMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& line : lines)
    for (const auto& a : line) s += a.mass;
  return s;
}

ProjectedMeasure project(const DiscreteMeasure& measure, const TreeSystem& ts,
                         const SplittingMap& alpha) {
  const int k = ts.lines();
  if (measure.dim() != ts.dim())
    throw std::invalid_argument("project: measure/tree dimension mismatch");
  if (alpha.k() != k)
    throw std::invalid_argument("project: splitting map arity mismatch");

  const int n = measure.size();
  ProjectedMeasure pm;
  pm.lines.resize(k);
  for (auto& line : pm.lines) line.reserve(n);

  // coords(i, l) = <a_i - x_l, theta_l>
  Eigen::MatrixXd coords =
      measure.points * ts.directions.transpose();  // n x k
  Eigen::VectorXd offset =
      (ts.sources.array() * ts.directions.array()).rowwise().sum();
  coords.rowwise() -= offset.transpose();

  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd a = alpha.constant()
                            ? alpha.vector()
                            : alpha.evaluate(measure.points.row(i).transpose());
    for (int l = 0; l < k; ++l) {
      double m = a[l] * measure.weights[i];
      if (m < 1e-300) continue;
      pm.lines[l].push_back({coords(i, l), m, i});
    }
  }
  for (auto& line : pm.lines)
    std::sort(line.begin(), line.end(),
              [](const ProjectedAtom& x, const ProjectedAtom& y) {
                return x.coord != y.coord ? x.coord < y.coord
                                          : x.origin < y.origin;
              });
  return pm;
}

}  // namespace tsw
