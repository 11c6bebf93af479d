#include "tsw/splitting.hpp"

#include <sstream>
#include <stdexcept>

#include "tsw/rng.hpp"

namespace tsw {

SplittingMap SplittingMap::Uniform(int k) {
  if (k < 1) throw std::invalid_argument("splitting: k must be >= 1");
  return SplittingMap(k, Eigen::VectorXd::Constant(k, 1.0 / k));
}

SplittingMap SplittingMap::FixedVector(const Eigen::VectorXd& v) {
  if (v.size() < 1) throw std::invalid_argument("splitting: empty vector");
  if ((v.array() < 0).any())
    throw std::invalid_argument("splitting: negative component");
  double s = v.sum();
  if (s <= 0) throw std::invalid_argument("splitting: zero-sum vector");
  return SplittingMap(static_cast<int>(v.size()), v / s);
}

SplittingMap SplittingMap::RandomVector(int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("splitting: k must be >= 1");
  rng::Stream s(rng::derive(seed, "alpha"));
  return SplittingMap(k, s.dirichlet_uniform(k));
}

SplittingMap SplittingMap::PointDependent(
    int k, std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn) {
  if (k < 1) throw std::invalid_argument("splitting: k must be >= 1");
  SplittingMap m(k, Eigen::VectorXd());
  m.fn_ = std::move(fn);
  return m;
}

const Eigen::VectorXd& SplittingMap::vector() const {
  if (fn_)
    throw std::logic_error("splitting: point-dependent map has no constant vector");
  return vec_;
}

Eigen::VectorXd SplittingMap::evaluate(const Eigen::VectorXd& x) const {
  if (!x.allFinite())
    throw std::invalid_argument("splitting: non-finite input point");
  if (!fn_) return vec_;
  Eigen::VectorXd v = fn_(x);
  if (v.size() != k_)
    throw std::runtime_error("splitting: hook returned wrong length");
  double s = v.sum();
  if ((v.array() < 0).any() || s <= 0)
    throw std::runtime_error("splitting: hook returned invalid simplex point");
  return v / s;
}

SplittingMap parse_splitting(const std::string& spec, int k, std::uint64_t seed) {
  if (spec == "uniform") return SplittingMap::Uniform(k);
  if (spec == "random") return SplittingMap::RandomVector(k, seed);
  const std::string prefix = "fixed:";
  if (spec.rfind(prefix, 0) == 0) {
    std::stringstream ss(spec.substr(prefix.size()));
    std::vector<double> vals;
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::invalid_argument("splitting: unparseable component '" + cell + "'");
      }
    }
    if (static_cast<int>(vals.size()) != k)
      throw std::invalid_argument("splitting: fixed vector length must equal k");
    return SplittingMap::FixedVector(
        Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size()));
  }
  throw std::invalid_argument("splitting: unknown spec '" + spec + "'");
}

}  // namespace tsw
