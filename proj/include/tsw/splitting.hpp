#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace tsw {

// alpha: R^d -> simplex over the k lines of a tree system. The built-in
// variants are constant in x (uniform, fixed vector, one Dirichlet draw per
// seed); a point-dependent hook is available for experimentation.
class SplittingMap {
 public:
  static SplittingMap Uniform(int k);
  static SplittingMap FixedVector(const Eigen::VectorXd& v);
  // One Dirichlet(1,...,1) draw, fixed for the lifetime of the map.
  static SplittingMap RandomVector(int k, std::uint64_t seed);
  static SplittingMap PointDependent(
      int k, std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn);

  int k() const { return k_; }
  bool constant() const { return !fn_; }
  // Constant component vector; throws for point-dependent maps.
  const Eigen::VectorXd& vector() const;

  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;

 private:
  SplittingMap(int k, Eigen::VectorXd v) : k_(k), vec_(std::move(v)) {}
  int k_;
  Eigen::VectorXd vec_;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn_;
};

// Parses "uniform" | "fixed:v1,v2,..." | "random" into a splitting map for k
// lines. Random draws use the given seed. Throws on malformed specs or a
// fixed vector whose length differs from k.
SplittingMap parse_splitting(const std::string& spec, int k, std::uint64_t seed);

}  // namespace tsw
