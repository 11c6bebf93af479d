#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace tsw::rng {

// SplitMix64 mixing step. Used both as a generator and as a hash combiner
// for deriving independent stream keys from (seed, label, indices).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t seed, std::string_view label,
                     std::uint64_t i = 0, std::uint64_t j = 0);

// A seeded random stream. Streams with distinct keys are independent for
// all practical purposes; the same key always reproduces the same draws.
class Stream {
 public:
  explicit Stream(std::uint64_t key) : eng_(splitmix64(key)) {}

  double uniform(double lo, double hi);
  double normal(double mean = 0.0, double stddev = 1.0);
  std::uint64_t integer(std::uint64_t bound);  // uniform on [0, bound)

  Eigen::VectorXd gaussian_vector(int d);
  // Uniform on the unit sphere S^{d-1}: normalized standard Gaussian.
  Eigen::VectorXd unit_sphere(int d);
  Eigen::VectorXd uniform_vector(int d, double lo, double hi);
  // One Dirichlet(1,...,1) draw, i.e. uniform on the simplex.
  Eigen::VectorXd dirichlet_uniform(int k);

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace tsw::rng
