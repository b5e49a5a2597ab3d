#include "trek/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "trek/oracle.hpp"
#include "trek/tensor_io.hpp"

namespace trek {

namespace {

void validate(const ExperimentSpec& spec) {
  if (spec.n1 <= 0 || spec.n2 <= 0 || spec.n3 <= 0 || spec.k <= 0) {
    throw std::invalid_argument("experiment dims must be positive");
  }
  if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (spec.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (spec.log_every < 1) throw std::invalid_argument("log_every must be >= 1");
  if (!(spec.step_factor > 0.0) || !(spec.step_factor < 2.0)) {
    throw std::invalid_argument("step_factor must lie in (0, 2)");
  }
  if (!(spec.noise_scale >= 0.0)) {
    throw std::invalid_argument("noise_scale must be >= 0");
  }
  if (!(spec.tol >= 0.0)) throw std::invalid_argument("tol must be >= 0");
  if (spec.algos.empty()) throw std::invalid_argument("no algorithms selected");
  for (Algorithm alg : spec.algos) {
    if (spec.kind == ExperimentKind::least_squares &&
        alg == Algorithm::rrek_sparse) {
      throw std::invalid_argument(
          "rrek_sparse needs the sparse recovery experiment");
    }
    if (spec.kind == ExperimentKind::sparse_recovery &&
        (alg == Algorithm::trk || alg == Algorithm::trek)) {
      throw std::invalid_argument(to_string(alg) +
                                  " is least-squares only; use rrk/rrek/rrek_sparse");
    }
  }
  if (spec.kind == ExperimentKind::sparse_recovery) {
    if (!(spec.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (spec.n1 < 10) {
      throw std::invalid_argument("sparse recovery needs n1 >= 10 (slice copies)");
    }
  }
}

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.next_gaussian();
  }
  return m;
}

}  // namespace

Problem gen_least_squares(const ExperimentSpec& spec) {
  Rng rng = Rng::substream(spec.seed, 0);
  Problem p;
  p.a = gaussian_tensor({spec.n1, spec.n2, spec.n3}, rng);
  const Tensor3 x_true = gaussian_tensor({spec.n2, spec.k, spec.n3}, rng);
  const Tensor3 noise = gaussian_tensor({spec.n1, spec.k, spec.n3}, rng);
  p.b = tprod(p.a, x_true);
  add_scaled(p.b, spec.noise_scale, noise);
  p.reference = pinv_apply(p.a, p.b);
  return p;
}

Problem gen_sparse_recovery(const ExperimentSpec& spec) {
  constexpr double kKeepAbove = 2.33;
  Rng rng = Rng::substream(spec.seed, 0);
  Problem p;
  p.a = gaussian_tensor({spec.n1, spec.n2, spec.n3}, rng);
  for (int r = 0; r < 5; ++r) {
    embed_horizontal(p.a, spec.n1 - 10 + r, horizontal_slice(p.a, spec.n1 - 5 + r));
  }

  Tensor3 x_s(spec.n2, spec.k, spec.n3);
  std::int64_t nnz = 0;
  do {
    const Tensor3 g = gaussian_tensor(x_s.dims(), rng);
    nnz = 0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      const double v = g.data()[i] >= kKeepAbove ? g.data()[i] : 0.0;
      x_s.data()[i] = v;
      if (v != 0.0) ++nnz;
    }
  } while (nnz == 0);
  p.density = static_cast<double>(nnz) / static_cast<double>(x_s.size());

  p.b = tprod(p.a, x_s);
  const Eigen::MatrixXd basis = oracle::null_space_basis(oracle::bcirc(p.a).transpose());
  if (basis.cols() > 0 && spec.noise_scale > 0.0) {
    const Eigen::MatrixXd g = gaussian_matrix(basis.cols(), spec.k, rng);
    const Tensor3 e = oracle::fold(basis * g, {spec.n1, spec.k, spec.n3});
    add_scaled(p.b, spec.noise_scale, e);
  }
  p.reference = std::move(x_s);
  return p;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  validate(spec);

  ExperimentResult result;
  result.problem = spec.kind == ExperimentKind::least_squares
                       ? gen_least_squares(spec)
                       : gen_sparse_recovery(spec);
  const Objective obj = spec.kind == ExperimentKind::least_squares
                            ? Objective::frobenius()
                            : Objective::elastic_net(spec.lambda);
  const auto [alpha_r, alpha_c] = default_stepsizes(result.problem.a, spec.step_factor);
  result.alpha_r = alpha_r;
  result.alpha_c = alpha_c;

  result.iters.push_back(0);
  for (std::int64_t k = spec.log_every; k < spec.max_iters; k += spec.log_every) {
    result.iters.push_back(k);
  }
  result.iters.push_back(spec.max_iters);

  for (std::size_t ai = 0; ai < spec.algos.size(); ++ai) {
    const Algorithm alg = spec.algos[ai];
    result.algo_names.push_back(to_string(alg));
    std::vector<double> mean(result.iters.size(), 0.0);
    for (int trial = 0; trial < spec.trials; ++trial) {
      SolverConfig cfg;
      cfg.alpha_r = alpha_r;
      cfg.alpha_c = alpha_c;
      cfg.max_iters = spec.max_iters;
      cfg.tol = spec.tol;
      cfg.log_every = spec.log_every;
      cfg.reference = result.problem.reference;
      const std::uint64_t stream =
          1 + static_cast<std::uint64_t>(ai) * static_cast<std::uint64_t>(spec.trials) +
          static_cast<std::uint64_t>(trial);
      cfg.seed = substream_seed(spec.seed, stream);
      const RunResult run_out = run(alg, result.problem.a, result.problem.b, obj, cfg);

      // Hold the last recorded value forward so early-stopped trials still
      // contribute at every checkpoint.
      std::size_t src = 0;
      double held = run_out.trace.front().value;
      for (std::size_t c = 0; c < result.iters.size(); ++c) {
        while (src < run_out.trace.size() &&
               run_out.trace[src].iter <= result.iters[c]) {
          held = run_out.trace[src].value;
          ++src;
        }
        mean[c] += held;
      }
    }
    for (double& v : mean) v /= spec.trials;
    result.mean_relerr.push_back(std::move(mean));
  }
  return result;
}

void write_trace_csv(std::ostream& out, const ExperimentResult& result) {
  out << "iter";
  for (const auto& name : result.algo_names) out << "," << name << "_mean_relerr";
  out << "\n";
  char buf[40];
  for (std::size_t c = 0; c < result.iters.size(); ++c) {
    out << result.iters[c];
    for (const auto& col : result.mean_relerr) {
      std::snprintf(buf, sizeof(buf), "%.17g", col[c]);
      out << "," << buf;
    }
    out << "\n";
  }
}

void write_trace_csv_file(const std::string& path, const ExperimentResult& result) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  write_trace_csv(out, result);
  out.flush();
  if (!out) throw io_error("short write to '" + path + "'");
}

}  // namespace trek
