#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace tsw {

// A weighted point cloud representing an empirical probability measure on
// R^d. Rows of `points` are atoms; `weights` are nonnegative and sum to 1.
struct DiscreteMeasure {
  Eigen::MatrixXd points;   // n x d
  Eigen::VectorXd weights;  // n

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  Eigen::RowVectorXd mean() const { return weights.transpose() * points; }
};

// Validates invariants and rescales weights to sum exactly to 1. If weights
// are absent, assigns uniform weights. Throws std::invalid_argument on empty
// input, negative weight, all-zero weights, or non-finite entries.
DiscreteMeasure validate_and_normalize(
    const Eigen::MatrixXd& points,
    const std::optional<Eigen::VectorXd>& weights = std::nullopt);

// --- Synthetic dataset generators (deterministic given seed) -------------

// 2D swiss roll: t = 1.5*pi*(1+2u), point = (t cos t, t sin t)/kSwissRollScale
// plus optional isotropic Gaussian noise (applied before scaling). The
// middle (height) coordinate of the usual 3D generator is dropped.
inline constexpr double kSwissRollScale = 7.5;
DiscreteMeasure gen_swiss_roll(int n, double noise, std::uint64_t seed);

// 25 isotropic Gaussians centered on the 5x5 grid {-2,-1,0,1,2}^2 * scale.
// Cluster assignment is round-robin over the 25 centers, then shuffled.
DiscreteMeasure gen_gaussians_25(int n, double stddev, std::uint64_t seed,
                                 double scale = 1.0);

// High-dimensional Gaussian: mean = ones elementwise-scaled by independent
// U(0, mean_scale) draws, covariance = cov_scale * identity.
DiscreteMeasure gen_gaussian_hd(int d, int n, double cov_scale,
                                std::uint64_t seed, double mean_scale = 1.0);

// --- File I/O -------------------------------------------------------------

enum class MeasureFormat { kCsv, kJson };

// CSV: mandatory header row "x0,...,x{d-1}[,weight]"; '.' decimal separator,
// ',' delimiter. JSON: {"points": [[...]], "weights": [...]}.
DiscreteMeasure read_measure(const std::string& path, MeasureFormat format);
void write_measure(const DiscreteMeasure& m, const std::string& path,
                   MeasureFormat format);

// Format inferred from the file extension (.json -> JSON, otherwise CSV).
DiscreteMeasure read_measure(const std::string& path);
void write_measure(const DiscreteMeasure& m, const std::string& path);

}  // namespace tsw
