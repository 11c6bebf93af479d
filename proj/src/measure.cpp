#include "tsw/measure.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "tsw/rng.hpp"

namespace tsw {

DiscreteMeasure validate_and_normalize(
    const Eigen::MatrixXd& points,
    const std::optional<Eigen::VectorXd>& weights) {
  const auto n = points.rows();
  if (n < 1 || points.cols() < 1)
    throw std::invalid_argument("measure: need at least one point in R^d, d >= 1");
  if (!points.allFinite())
    throw std::invalid_argument("measure: non-finite coordinate");

  Eigen::VectorXd w;
  if (weights) {
    w = *weights;
    if (w.size() != n)
      throw std::invalid_argument("measure: weight count does not match point count");
    if (!w.allFinite()) throw std::invalid_argument("measure: non-finite weight");
    if ((w.array() < 0).any())
      throw std::invalid_argument("measure: negative weight");
    double s = w.sum();
    if (s <= 0) throw std::invalid_argument("measure: weights sum to zero");
    w /= s;
  } else {
    w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  }
  return DiscreteMeasure{points, w};
}

DiscreteMeasure gen_swiss_roll(int n, double noise, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_swiss_roll: n must be >= 1");
  if (noise < 0) throw std::invalid_argument("gen_swiss_roll: negative noise");
  rng::Stream s(rng::derive(seed, "swissroll"));
  Eigen::MatrixXd pts(n, 2);
  for (int i = 0; i < n; ++i) {
    double t = 1.5 * std::numbers::pi * (1.0 + 2.0 * s.uniform(0.0, 1.0));
    double x = t * std::cos(t);
    double z = t * std::sin(t);
    if (noise > 0) {
      x += noise * s.normal();
      z += noise * s.normal();
    }
    pts(i, 0) = x / kSwissRollScale;
    pts(i, 1) = z / kSwissRollScale;
  }
  return validate_and_normalize(pts);
}

DiscreteMeasure gen_gaussians_25(int n, double stddev, std::uint64_t seed,
                                 double scale) {
  if (n < 1) throw std::invalid_argument("gen_gaussians_25: n must be >= 1");
  if (stddev < 0) throw std::invalid_argument("gen_gaussians_25: negative stddev");
  rng::Stream s(rng::derive(seed, "gauss25"));
  // Round-robin over the 25 centers, then a Fisher-Yates shuffle.
  std::vector<int> assign(n);
  for (int i = 0; i < n; ++i) assign[i] = i % 25;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(s.integer(static_cast<std::uint64_t>(i) + 1));
    std::swap(assign[i], assign[j]);
  }
  Eigen::MatrixXd pts(n, 2);
  for (int i = 0; i < n; ++i) {
    int c = assign[i];
    double cx = static_cast<double>(c % 5) - 2.0;
    double cy = static_cast<double>(c / 5) - 2.0;
    pts(i, 0) = scale * (cx + stddev * s.normal());
    pts(i, 1) = scale * (cy + stddev * s.normal());
  }
  return validate_and_normalize(pts);
}

DiscreteMeasure gen_gaussian_hd(int d, int n, double cov_scale,
                                std::uint64_t seed, double mean_scale) {
  if (d < 1 || n < 1)
    throw std::invalid_argument("gen_gaussian_hd: d and n must be >= 1");
  if (cov_scale < 0)
    throw std::invalid_argument("gen_gaussian_hd: negative covariance scale");
  rng::Stream s(rng::derive(seed, "gausshd"));
  Eigen::VectorXd mean = s.uniform_vector(d, 0.0, mean_scale);
  const double sd = std::sqrt(cov_scale);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i)
    pts.row(i) = (mean + sd * s.gaussian_vector(d)).transpose();
  return validate_and_normalize(pts);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

DiscreteMeasure read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  auto header = split_csv_line(line);
  if (header.empty()) throw std::runtime_error(path + ": empty header");
  bool has_weight = header.back() == "weight";
  int d = static_cast<int>(header.size()) - (has_weight ? 1 : 0);
  if (d < 1) throw std::runtime_error(path + ": no coordinate columns");

  std::vector<std::vector<double>> rows;
  std::vector<double> ws;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != d + (has_weight ? 1 : 0))
      throw std::runtime_error(path + ": ragged row");
    std::vector<double> row(d);
    try {
      for (int j = 0; j < d; ++j) row[j] = std::stod(cells[j]);
      if (has_weight) ws.push_back(std::stod(cells[d]));
    } catch (const std::exception&) {
      throw std::runtime_error(path + ": unparseable cell");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  Eigen::MatrixXd pts(rows.size(), d);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < d; ++j) pts(static_cast<Eigen::Index>(i), j) = rows[i][j];
  std::optional<Eigen::VectorXd> w;
  if (has_weight)
    w = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
  return validate_and_normalize(pts, w);
}

void write_csv(const DiscreteMeasure& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  for (int j = 0; j < m.dim(); ++j) out << (j ? "," : "") << "x" << j;
  out << ",weight\n";
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.dim(); ++j) out << (j ? "," : "") << m.points(i, j);
    out << "," << m.weights[i] << "\n";
  }
}

DiscreteMeasure read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  const auto& jp = j.at("points");
  if (!jp.is_array() || jp.empty())
    throw std::runtime_error(path + ": points must be a nonempty array");
  int n = static_cast<int>(jp.size());
  int d = static_cast<int>(jp[0].size());
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(jp[i].size()) != d)
      throw std::runtime_error(path + ": ragged points");
    for (int c = 0; c < d; ++c) pts(i, c) = jp[i][c].get<double>();
  }
  std::optional<Eigen::VectorXd> w;
  if (j.contains("weights")) {
    Eigen::VectorXd wv(n);
    if (static_cast<int>(j["weights"].size()) != n)
      throw std::runtime_error(path + ": weight count mismatch");
    for (int i = 0; i < n; ++i) wv[i] = j["weights"][i].get<double>();
    w = wv;
  }
  return validate_and_normalize(pts, w);
}

void write_json(const DiscreteMeasure& m, const std::string& path) {
  nlohmann::json j;
  j["points"] = nlohmann::json::array();
  for (int i = 0; i < m.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.dim(); ++c) row.push_back(m.points(i, c));
    j["points"].push_back(std::move(row));
  }
  j["weights"] = std::vector<double>(m.weights.data(), m.weights.data() + m.size());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

}  // namespace

DiscreteMeasure read_measure(const std::string& path, MeasureFormat format) {
  return format == MeasureFormat::kCsv ? read_csv(path) : read_json(path);
}

void write_measure(const DiscreteMeasure& m, const std::string& path,
                   MeasureFormat format) {
  if (format == MeasureFormat::kCsv)
    write_csv(m, path);
  else
    write_json(m, path);
}

DiscreteMeasure read_measure(const std::string& path) {
  return read_measure(path, ends_with(path, ".json") ? MeasureFormat::kJson
                                                     : MeasureFormat::kCsv);
}

void write_measure(const DiscreteMeasure& m, const std::string& path) {
  write_measure(m, path, ends_with(path, ".json") ? MeasureFormat::kJson
                                                  : MeasureFormat::kCsv);
}

}  // namespace tsw
