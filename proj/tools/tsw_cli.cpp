// tsw: compute tree-sliced and sliced Wasserstein distances, run particle
// gradient flows, sample tree systems, benchmark, and generate datasets.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsw/distances.hpp"
#include "tsw/exact_ot.hpp"
#include "tsw/flow.hpp"
#include "tsw/measure.hpp"
#include "tsw/parallel.hpp"
#include "tsw/rng.hpp"
#include "tsw/tree_system.hpp"

namespace {

void print_value(double v) { std::printf("%.12g\n", v); }

tsw::DiscreteMeasure make_dataset(const std::string& name, int n, int dim,
                                  double noise, double stddev, double scale,
                                  std::uint64_t seed) {
  std::uint64_t data_seed = tsw::rng::derive(seed, "data");
  if (name == "swissroll") return tsw::gen_swiss_roll(n, noise, data_seed);
  if (name == "gauss25")
    return tsw::gen_gaussians_25(n, stddev, data_seed, scale);
  if (name == "gaussian-hd")
    return tsw::gen_gaussian_hd(dim, n, 0.01, data_seed, 1.0);
  throw std::invalid_argument("unknown dataset: " + name);
}

struct BenchPoint {
  std::string param;
  long long value;
  double seconds;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-sliced Wasserstein distances on systems of lines"};
  app.require_subcommand(1);
  int threads = -1;
  app.add_option("--threads", threads, "worker pool size (0 = auto)");

  // ---- dist ----------------------------------------------------------------
  auto* dist = app.add_subcommand("dist", "distance between two measures");
  std::string mu_path, nu_path, method = "tsw-sl", splitting = "uniform";
  int trees = 100, lines = 4, iters = 100;
  double p = 1.0, lr = 0.1;
  std::uint64_t seed = 0;
  dist->add_option("--mu", mu_path, "first measure (CSV or JSON)")->required();
  dist->add_option("--nu", nu_path, "second measure (CSV or JSON)")->required();
  dist->add_option("--method", method, "tsw-sl|sw|max-sw|max-tsw-sl");
  dist->add_option("--trees", trees, "number of sampled systems / directions")
      ->check(CLI::PositiveNumber);
  dist->add_option("--lines", lines, "lines per system")
      ->check(CLI::PositiveNumber);
  dist->add_option("--seed", seed, "master seed");
  dist->add_option("--splitting", splitting, "uniform|fixed:v1,..|random");
  dist->add_option("--p", p, "order for sliced baselines")
      ->check(CLI::Range(1.0, 64.0));
  dist->add_option("--iters", iters, "ascent iterations (max variants)")
      ->check(CLI::PositiveNumber);
  dist->add_option("--lr", lr, "ascent learning rate (max variants)");

  // ---- flow ----------------------------------------------------------------
  auto* flow = app.add_subcommand("flow", "particle gradient flow to a target");
  std::string dataset, out_path;
  int dim = 2, n = 100, flow_iters = 2500, flow_trees = 25, flow_lines = 4;
  double flow_lr = 5e-3, eval_p = 2.0, noise = 0.0, stddev = 0.05;
  double scale = 0.5, flow_p = 2.0;
  bool fixed_trees = false;
  std::string flow_method = "tsw-sl", flow_splitting = "uniform";
  std::uint64_t flow_seed = 0;
  flow->add_option("--dataset", dataset, "swissroll|gauss25|gaussian-hd")
      ->required();
  flow->add_option("--dim", dim, "ambient dimension (gaussian-hd)")
      ->check(CLI::PositiveNumber);
  flow->add_option("--n", n, "target sample count")->check(CLI::PositiveNumber);
  flow->add_option("--method", flow_method, "tsw-sl|sw|max-sw|max-tsw-sl");
  flow->add_option("--trees", flow_trees, "systems / directions per iteration")
      ->check(CLI::PositiveNumber);
  flow->add_option("--lines", flow_lines, "lines per system")
      ->check(CLI::PositiveNumber);
  flow->add_option("--iters", flow_iters, "flow iterations")
      ->check(CLI::PositiveNumber);
  flow->add_option("--lr", flow_lr, "flow learning rate");
  flow->add_option("--seed", flow_seed, "master seed");
  flow->add_option("--out", out_path, "trace CSV path")->required();
  flow->add_option("--splitting", flow_splitting, "splitting map spec");
  flow->add_option("--p", flow_p, "order of the sliced loss");
  flow->add_option("--eval-p", eval_p, "order of the exact checkpoint metric");
  flow->add_option("--noise", noise, "swissroll noise level");
  flow->add_option("--stddev", stddev, "gauss25 cluster spread");
  flow->add_option("--scale", scale, "gauss25 grid scale");
  flow->add_flag("--fixed-trees", fixed_trees,
                 "reuse one set of systems every iteration");

  // ---- sample-trees --------------------------------------------------------
  auto* st = app.add_subcommand("sample-trees", "sample chain tree systems");
  int st_lines = 4, st_count = 1, st_dim = 2;
  std::uint64_t st_seed = 0;
  std::string st_out;
  st->add_option("--lines", st_lines, "lines per system")
      ->check(CLI::PositiveNumber);
  st->add_option("--count", st_count, "number of systems")
      ->check(CLI::PositiveNumber);
  st->add_option("--seed", st_seed, "master seed");
  st->add_option("--dim", st_dim, "ambient dimension")
      ->check(CLI::PositiveNumber);
  st->add_option("--out", st_out, "output JSON path (default stdout)");

  // ---- bench ---------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "time tsw-sl over a sweep");
  std::string sweep, bench_out;
  int b_n = 1000, b_trees = 10, b_lines = 4, b_dim = 3;
  std::uint64_t b_seed = 0;
  bench->add_option("--sweep", sweep, "e.g. n=1000,10000,100000 or trees=...")
      ->required();
  bench->add_option("--n", b_n, "points per measure")
      ->check(CLI::PositiveNumber);
  bench->add_option("--trees", b_trees, "systems")->check(CLI::PositiveNumber);
  bench->add_option("--lines", b_lines, "lines per system")
      ->check(CLI::PositiveNumber);
  bench->add_option("--dim", b_dim, "ambient dimension")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", b_seed, "master seed");
  bench->add_option("--out", bench_out, "timing CSV path (default stdout)");

  // ---- gen-data ------------------------------------------------------------
  auto* gen = app.add_subcommand("gen-data", "write a synthetic dataset");
  std::string g_dataset, g_out;
  int g_n = 100, g_dim = 2;
  double g_noise = 0.0, g_stddev = 0.05, g_scale = 0.5;
  std::uint64_t g_seed = 0;
  gen->add_option("--dataset", g_dataset, "swissroll|gauss25|gaussian-hd")
      ->required();
  gen->add_option("--n", g_n, "sample count")->check(CLI::PositiveNumber);
  gen->add_option("--dim", g_dim, "ambient dimension (gaussian-hd)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", g_seed, "master seed");
  gen->add_option("--noise", g_noise, "swissroll noise level");
  gen->add_option("--stddev", g_stddev, "gauss25 cluster spread");
  gen->add_option("--scale", g_scale, "gauss25 grid scale");
  gen->add_option("--out", g_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  try {
    if (threads >= 0) tsw::set_thread_count(threads);

    if (dist->parsed()) {
      tsw::DiscreteMeasure mu = tsw::read_measure(mu_path);
      tsw::DiscreteMeasure nu = tsw::read_measure(nu_path);
      double value = 0.0;
      if (method == "tsw-sl") {
        tsw::TswConfig cfg;
        cfg.trees = trees;
        cfg.lines = lines;
        cfg.seed = seed;
        cfg.splitting = splitting;
        value = tsw::tsw_sl(mu, nu, cfg);
      } else if (method == "sw") {
        value = tsw::sw(mu, nu, trees, p, seed);
      } else if (method == "max-sw") {
        tsw::MaxConfig cfg{lines, iters, lr, seed, splitting};
        value = tsw::max_sw(mu, nu, cfg, p).first;
      } else if (method == "max-tsw-sl") {
        tsw::MaxConfig cfg{lines, iters, lr, seed, splitting};
        value = tsw::max_tsw_sl(mu, nu, cfg).first;
      } else {
        std::cerr << "unknown method: " << method << "\n";
        return 2;
      }
      print_value(value);
      return 0;
    }

    if (flow->parsed()) {
      tsw::DiscreteMeasure target =
          make_dataset(dataset, n, dim, noise, stddev, scale, flow_seed);
      tsw::FlowConfig cfg;
      cfg.method = tsw::flow_method_from_string(flow_method);
      cfg.iterations = flow_iters;
      cfg.checkpoints.clear();
      for (int c = 500; c <= flow_iters; c += 500) cfg.checkpoints.push_back(c);
      if (cfg.checkpoints.empty() || cfg.checkpoints.back() != flow_iters)
        cfg.checkpoints.push_back(flow_iters);
      cfg.learning_rate = flow_lr;
      cfg.eval_p = eval_p;
      cfg.seed = flow_seed;
      cfg.fixed_trees = fixed_trees;
      cfg.tsw.trees = flow_trees;
      cfg.tsw.lines = flow_lines;
      cfg.tsw.splitting = flow_splitting;
      cfg.sw_p = flow_p;
      cfg.max_cfg.lines = flow_lines;
      cfg.max_cfg.splitting = flow_splitting;
      tsw::FlowTrace trace = tsw::run_flow(target, cfg);
      tsw::write_trace_csv(trace, out_path);
      std::printf("%10s  %14s  %14s\n", "iter", "w_distance", "sec/iter");
      for (const auto& row : trace.rows)
        std::printf("%10d  %14.6g  %14.6g\n", row.iter, row.w_distance,
                    row.seconds_per_iter);
      return 0;
    }

    if (st->parsed()) {
      nlohmann::json out = nlohmann::json::array();
      for (int i = 0; i < st_count; ++i) {
        tsw::TreeSystem ts = tsw::sample_chain(
            st_lines, st_dim, tsw::rng::derive(st_seed, "tree", i));
        tsw::check_tree_system(ts);
        out.push_back(nlohmann::json::parse(tsw::tree_system_to_json(ts)));
      }
      nlohmann::json doc;
      doc["tree_systems"] = std::move(out);
      if (st_out.empty()) {
        std::cout << doc.dump(2) << "\n";
      } else {
        std::ofstream f(st_out);
        if (!f) throw std::runtime_error("cannot open " + st_out);
        f << doc.dump(2) << "\n";
      }
      return 0;
    }

    if (bench->parsed()) {
      auto eq = sweep.find('=');
      if (eq == std::string::npos)
        throw CLI::ValidationError("--sweep", "expected key=v1,v2,...");
      std::string key = sweep.substr(0, eq);
      if (key != "n" && key != "trees" && key != "lines" && key != "dim")
        throw CLI::ValidationError("--sweep", "unknown sweep key: " + key);
      std::vector<long long> values;
      std::stringstream ss(sweep.substr(eq + 1));
      for (std::string tok; std::getline(ss, tok, ',');)
        values.push_back(std::stoll(tok));
      if (values.empty())
        throw CLI::ValidationError("--sweep", "no sweep values");

      std::vector<BenchPoint> points;
      for (long long v : values) {
        int cn = b_n, ct = b_trees, cl = b_lines, cd = b_dim;
        (key == "n" ? cn : key == "trees" ? ct : key == "lines" ? cl : cd) =
            static_cast<int>(v);
        tsw::rng::Stream sm(tsw::rng::derive(b_seed, "bench-mu"));
        tsw::rng::Stream sn(tsw::rng::derive(b_seed, "bench-nu"));
        Eigen::MatrixXd pm(cn, cd), pn(cn, cd);
        for (int i = 0; i < cn; ++i) {
          pm.row(i) = sm.uniform_vector(cd, -1.0, 1.0).transpose();
          pn.row(i) = sn.uniform_vector(cd, -1.0, 1.0).transpose();
        }
        tsw::DiscreteMeasure mu = tsw::validate_and_normalize(pm);
        tsw::DiscreteMeasure nu = tsw::validate_and_normalize(pn);
        tsw::TswConfig cfg;
        cfg.trees = ct;
        cfg.lines = cl;
        cfg.seed = tsw::rng::derive(b_seed, "bench-eval");
        double best = 1e300;
        for (int rep = 0; rep < 3; ++rep) {
          auto t0 = std::chrono::steady_clock::now();
          volatile double sink = tsw::tsw_sl(mu, nu, cfg);
          (void)sink;
          auto t1 = std::chrono::steady_clock::now();
          best = std::min(best,
                          std::chrono::duration<double>(t1 - t0).count());
        }
        points.push_back({key, v, best});
      }
      std::ostringstream csv;
      csv << "param,value,seconds\n";
      csv.precision(17);
      for (const auto& pt : points)
        csv << pt.param << ',' << pt.value << ',' << pt.seconds << '\n';
      if (bench_out.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream f(bench_out);
        if (!f) throw std::runtime_error("cannot open " + bench_out);
        f << csv.str();
      }
      return 0;
    }

    if (gen->parsed()) {
      tsw::DiscreteMeasure m =
          make_dataset(g_dataset, g_n, g_dim, g_noise, g_stddev, g_scale, g_seed);
      tsw::write_measure(m, g_out);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
