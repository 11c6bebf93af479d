#include "tsw/rng.hpp"

namespace tsw::rng {

std::uint64_t derive(std::uint64_t seed, std::string_view label,
                     std::uint64_t i, std::uint64_t j) {
  // FNV-1a over the label, then splitmix rounds folding in the indices.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t k = splitmix64(seed ^ h);
  k = splitmix64(k ^ i);
  k = splitmix64(k ^ (j + 0x632be59bd9b4e019ULL));
  return k;
}

double Stream::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(eng_);
}

double Stream::normal(double mean, double stddev) {
  std::normal_distribution<double> dist(mean, stddev);
  return dist(eng_);
}

std::uint64_t Stream::integer(std::uint64_t bound) {
  std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
  return dist(eng_);
}

Eigen::VectorXd Stream::gaussian_vector(int d) {
  Eigen::VectorXd v(d);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < d; ++i) v[i] = dist(eng_);
  return v;
}

Eigen::VectorXd Stream::unit_sphere(int d) {
  Eigen::VectorXd v = gaussian_vector(d);
  double n = v.norm();
  while (n < 1e-12) {  // probability-zero retry
    v = gaussian_vector(d);
    n = v.norm();
  }
  return v / n;
}

Eigen::VectorXd Stream::uniform_vector(int d, double lo, double hi) {
  Eigen::VectorXd v(d);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (int i = 0; i < d; ++i) v[i] = dist(eng_);
  return v;
}

Eigen::VectorXd Stream::dirichlet_uniform(int k) {
  Eigen::VectorXd v(k);
  std::exponential_distribution<double> dist(1.0);
  for (int i = 0; i < k; ++i) v[i] = dist(eng_);
  return v / v.sum();
}

}  // namespace tsw::rng
