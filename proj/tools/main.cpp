#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trek/experiments.hpp"
#include "trek/selftest.hpp"
#include "trek/solvers.hpp"
#include "trek/spectral.hpp"
#include "trek/tensor_io.hpp"

namespace {

struct ExperimentArgs {
  trek::ExperimentSpec spec;
  std::string algos;
  std::string out;
  std::string dump_dir;
};

void add_experiment_flags(CLI::App* cmd, ExperimentArgs& args) {
  cmd->add_option("--n1", args.spec.n1, "row extent of A");
  cmd->add_option("--n2", args.spec.n2, "column extent of A");
  cmd->add_option("--n3", args.spec.n3, "tube extent");
  cmd->add_option("--k", args.spec.k, "lateral width of B");
  cmd->add_option("--trials", args.spec.trials, "independent trials to average");
  cmd->add_option("--max-iters", args.spec.max_iters, "iteration budget per trial");
  cmd->add_option("--tol", args.spec.tol, "relative-change stopping tolerance (0 = run full budget)");
  cmd->add_option("--seed", args.spec.seed, "base seed");
  cmd->add_option("--step-factor", args.spec.step_factor, "step sizes are this over lambda_row/lambda_col");
  cmd->add_option("--noise-scale", args.spec.noise_scale, "perturbation magnitude");
  cmd->add_option("--log-every", args.spec.log_every, "checkpoint stride in the trace");
  cmd->add_option("--algos", args.algos, "comma separated algorithm list");
  cmd->add_option("--out", args.out, "trace csv path (default: stdout)");
  cmd->add_option("--dump-dir", args.dump_dir, "also write a.t3/b.t3/reference.t3 here");
}

std::vector<trek::Algorithm> parse_algos(const std::string& list) {
  std::vector<trek::Algorithm> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string tok = list.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) out.push_back(trek::parse_algorithm(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("no algorithms in --algos");
  return out;
}

int run_experiment_cmd(ExperimentArgs& args) {
  args.spec.algos = parse_algos(args.algos);
  const trek::ExperimentResult result = trek::run_experiment(args.spec);
  if (!args.dump_dir.empty()) {
    std::filesystem::path dir(args.dump_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw trek::io_error("cannot create '" + args.dump_dir + "': " + ec.message());
    trek::save_tensor((dir / "a.t3").string(), result.problem.a);
    trek::save_tensor((dir / "b.t3").string(), result.problem.b);
    trek::save_tensor((dir / "reference.t3").string(), result.problem.reference);
  }
  if (args.out.empty()) {
    trek::write_trace_csv(std::cout, result);
  } else {
    trek::write_trace_csv_file(args.out, result);
  }
  return 0;
}

int run_rates_cmd(const std::string& path, const std::string& objective,
                  double lambda, double step_factor,
                  std::optional<double> alpha_r_opt,
                  std::optional<double> alpha_c_opt, std::optional<double> nu,
                  std::optional<double> delta) {
  const trek::Tensor3 a = trek::load_tensor(path);
  const trek::Objective obj = objective == "elastic-net"
                                  ? trek::Objective::elastic_net(lambda)
                                  : trek::Objective::frobenius();
  const auto [def_r, def_c] = trek::default_stepsizes(a, step_factor);
  const double alpha_r = alpha_r_opt.value_or(def_r);
  const double alpha_c = alpha_c_opt.value_or(def_c);
  const trek::RateReport r = trek::theoretical_rates(a, obj, alpha_r, alpha_c, nu);

  const auto line = [](const char* name, double v) {
    std::printf("%-12s %.12g\n", name, v);
  };
  line("lambda_r", r.lambda_r);
  line("lambda_c", r.lambda_c);
  line("sigma_min", r.sigma_min);
  line("fro_norm2", r.a_fro2);
  line("gamma", r.gamma);
  line("alpha_r", r.alpha_r);
  line("alpha_c", r.alpha_c);
  line("rho_c", r.rho_c);
  if (r.nu) line("nu", *r.nu);
  if (r.rho_r) {
    line("rho_r", *r.rho_r);
  } else {
    std::printf("%-12s unavailable (supply --nu for this objective)\n", "rho_r");
  }
  if (delta && r.rho_r) {
    line("delta", *delta);
    line("combined", (1.0 + *delta / r.gamma) * std::max(r.rho_c, *r.rho_r));
  }
  for (const auto& w : trek::stepsize_warnings(r)) {
    std::printf("warning: %s\n", w.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"t-product tensor algebra and randomized Kaczmarz solver family"};
  app.require_subcommand(1);

  ExperimentArgs lsq;
  lsq.spec = [] {
    trek::ExperimentSpec s;
    s.kind = trek::ExperimentKind::least_squares;
    s.n1 = 100; s.n2 = 20; s.n3 = 20; s.k = 20;
    s.max_iters = 1000;
    return s;
  }();
  lsq.algos = "trek,trk";
  CLI::App* lsq_cmd = app.add_subcommand(
      "lsq", "gaussian least-squares experiment, averaged error traces");
  add_experiment_flags(lsq_cmd, lsq);

  ExperimentArgs sparse;
  sparse.spec = [] {
    trek::ExperimentSpec s;
    s.kind = trek::ExperimentKind::sparse_recovery;
    s.n1 = 100; s.n2 = 200; s.n3 = 10; s.k = 20;
    s.max_iters = 20000;
    return s;
  }();
  sparse.algos = "rrek_sparse,rrk";
  CLI::App* sparse_cmd = app.add_subcommand(
      "sparse", "sparse recovery experiment with the elastic net");
  add_experiment_flags(sparse_cmd, sparse);
  sparse_cmd->add_option("--lambda", sparse.spec.lambda, "shrinkage level");

  std::string rates_path, rates_objective = "frobenius";
  double rates_lambda = 1.0, rates_step_factor = 1.5;
  std::optional<double> rates_alpha_r, rates_alpha_c, rates_nu, rates_delta;
  CLI::App* rates_cmd = app.add_subcommand(
      "rates", "print contraction factors and admissibility warnings for a tensor");
  rates_cmd->add_option("tensor", rates_path, "tensor container path")->required();
  rates_cmd->add_option("--objective", rates_objective, "frobenius | elastic-net")
      ->check(CLI::IsMember({"frobenius", "elastic-net"}));
  rates_cmd->add_option("--lambda", rates_lambda, "elastic net shrinkage level");
  rates_cmd->add_option("--step-factor", rates_step_factor, "default step factor");
  rates_cmd->add_option("--alpha-r", rates_alpha_r, "row step size override");
  rates_cmd->add_option("--alpha-c", rates_alpha_c, "column step size override");
  rates_cmd->add_option("--nu", rates_nu, "strong-convexity input for rho_r");
  rates_cmd->add_option("--delta", rates_delta, "also print the combined rate");

  std::string pinv_a, pinv_b, pinv_out;
  CLI::App* pinv_cmd = app.add_subcommand(
      "pinv", "least-norm least-squares solve: X = pinv(A) B");
  pinv_cmd->add_option("a", pinv_a, "tensor A path")->required();
  pinv_cmd->add_option("b", pinv_b, "tensor B path")->required();
  pinv_cmd->add_option("out", pinv_out, "output tensor path")->required();

  int selftest_instances = 100;
  std::uint64_t selftest_seed = 2026;
  CLI::App* selftest_cmd = app.add_subcommand(
      "selftest", "cross-check fast routes against the materialized circulant");
  selftest_cmd->add_option("--instances", selftest_instances, "random instances");
  selftest_cmd->add_option("--seed", selftest_seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (lsq_cmd->parsed()) return run_experiment_cmd(lsq);
    if (sparse_cmd->parsed()) return run_experiment_cmd(sparse);
    if (rates_cmd->parsed()) {
      return run_rates_cmd(rates_path, rates_objective, rates_lambda,
                           rates_step_factor, rates_alpha_r, rates_alpha_c,
                           rates_nu, rates_delta);
    }
    if (pinv_cmd->parsed()) {
      const trek::Tensor3 a = trek::load_tensor(pinv_a);
      const trek::Tensor3 b = trek::load_tensor(pinv_b);
      trek::save_tensor(pinv_out, trek::pinv_apply(a, b));
      return 0;
    }
    if (selftest_cmd->parsed()) {
      const trek::SelfTestReport report =
          trek::run_selftest(selftest_instances, selftest_seed);
      trek::print_report(report, std::cout);
      return report.all_pass() ? 0 : 1;
    }
  } catch (const trek::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
