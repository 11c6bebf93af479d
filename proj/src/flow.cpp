#include "tsw/flow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tsw/exact_ot.hpp"
#include "tsw/rng.hpp"

namespace tsw {

FlowMethod flow_method_from_string(const std::string& name) {
  if (name == "tsw-sl") return FlowMethod::kTswSl;
  if (name == "sw") return FlowMethod::kSw;
  if (name == "max-sw") return FlowMethod::kMaxSw;
  if (name == "max-tsw-sl") return FlowMethod::kMaxTswSl;
  throw std::invalid_argument("unsupported flow method: " + name);
}

std::string to_string(FlowMethod method) {
  switch (method) {
    case FlowMethod::kTswSl: return "tsw-sl";
    case FlowMethod::kSw: return "sw";
    case FlowMethod::kMaxSw: return "max-sw";
    case FlowMethod::kMaxTswSl: return "max-tsw-sl";
  }
  throw std::logic_error("unreachable");
}

FlowTrace run_flow(const DiscreteMeasure& target, const FlowConfig& cfg) {
  if (cfg.iterations <= 0)
    throw std::invalid_argument("run_flow: iterations must be > 0");
  const int n = target.size();
  const int d = target.dim();

  DiscreteMeasure src;
  src.points.resize(n, d);
  src.weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  rng::Stream init(rng::derive(cfg.seed, "flow-init"));
  for (int i = 0; i < n; ++i)
    src.points.row(i) = init.gaussian_vector(d).transpose();

  std::vector<int> checkpoints = cfg.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());

  FlowTrace trace;
  std::size_t next_cp = 0;
  auto block_start = std::chrono::steady_clock::now();
  int block_iters = 0;

  for (int it = 1; it <= cfg.iterations; ++it) {
    const std::uint64_t it_seed = cfg.fixed_trees
                                      ? rng::derive(cfg.seed, "loss")
                                      : rng::derive(cfg.seed, "iter", it);
    Eigen::MatrixXd grad;
    switch (cfg.method) {
      case FlowMethod::kTswSl: {
        TswConfig c = cfg.tsw;
        c.seed = it_seed;
        grad = tsw_sl_grad(src, target, c).second;
        break;
      }
      case FlowMethod::kSw: {
        grad = sw_pp_grad(src, target, cfg.tsw.trees, cfg.sw_p, it_seed).second;
        break;
      }
      case FlowMethod::kMaxSw: {
        MaxConfig m = cfg.max_cfg;
        m.seed = it_seed;
        Eigen::VectorXd theta = max_sw(src, target, m, cfg.sw_p).second;
        grad = sw_fixed_direction_grad(src, target, theta, cfg.sw_p).second;
        break;
      }
      case FlowMethod::kMaxTswSl: {
        MaxConfig m = cfg.max_cfg;
        m.seed = it_seed;
        TreeSystem ts = max_tsw_sl(src, target, m).second;
        SplittingMap alpha = parse_splitting(m.splitting, ts.lines(),
                                             rng::derive(m.seed, "alpha"));
        grad = tw_grad_fixed_tree(src, target, ts, alpha).second;
        break;
      }
    }
    // Particles carry mass 1/n, so the position update rescales by n.
    double lr = cfg.learning_rate;
    int hold = static_cast<int>(cfg.lr_hold_fraction * cfg.iterations);
    if (it > hold) lr *= std::pow(cfg.lr_decay, it - hold);
    Eigen::MatrixXd step = lr * n * grad;
    if (step.allFinite()) src.points -= step;

    ++block_iters;
    if (next_cp < checkpoints.size() && it == checkpoints[next_cp]) {
      auto now = std::chrono::steady_clock::now();
      double secs = std::chrono::duration<double>(now - block_start).count() /
                    std::max(block_iters, 1);
      trace.rows.push_back(
          {it, wasserstein_p(src, target, cfg.eval_p), secs});
      block_start = std::chrono::steady_clock::now();
      block_iters = 0;
      ++next_cp;
    }
  }
  trace.final_source = src;
  return trace;
}

void write_trace_csv(const FlowTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "iter,w_distance,seconds_per_iter\n";
  out.precision(17);
  for (const auto& row : trace.rows)
    out << row.iter << ',' << row.w_distance << ',' << row.seconds_per_iter
        << '\n';
}

}  // namespace tsw
