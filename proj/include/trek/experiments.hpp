#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trek/solvers.hpp"
#include "trek/tensor.hpp"

namespace trek {

enum class ExperimentKind { least_squares, sparse_recovery };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::least_squares;
  int n1 = 100, n2 = 20, n3 = 20;
  int k = 20;  // lateral width of B
  int trials = 10;
  std::int64_t max_iters = 1000;
  double tol = 0.0;
  std::uint64_t seed = 0;
  double step_factor = 1.5;
  double lambda = 1.0;       // shrinkage level, sparse recovery only
  double noise_scale = 0.1;
  std::vector<Algorithm> algos;
  std::int64_t log_every = 1;
};

struct Problem {
  Tensor3 a, b;
  Tensor3 reference;     // least-norm solution, or the planted sparse truth
  double density = 0.0;  // fraction of nonzeros in the planted truth
};

// Gaussian A and X, B = A X + noise_scale * gaussian; the reference is the
// least-norm least-squares solution. Draw order: A, X, noise.
Problem gen_least_squares(const ExperimentSpec& spec);

// Gaussian A made rank-deficient by copying horizontal slices
// n1-5..n1-1 over n1-10..n1-6; planted X keeps gaussian entries >= 2.33
// (about 1% survive, redrawn whole if empty); the perturbation lies in the
// null space of the adjoint so the least-squares solution set is unchanged:
// B = A X + noise_scale * fold(basis G). Draw order: A, X (with redraws), G.
Problem gen_sparse_recovery(const ExperimentSpec& spec);

struct ExperimentResult {
  std::vector<std::string> algo_names;
  std::vector<std::int64_t> iters;                // shared checkpoint axis
  std::vector<std::vector<double>> mean_relerr;   // [algo][checkpoint]
  Problem problem;
  double alpha_r = 0.0, alpha_c = 0.0;
};

// Runs every algorithm for spec.trials independent trials on one shared
// problem instance and averages the per-iteration relative errors pointwise.
// Trial t of algorithm a uses rng substream 1 + a*trials + t (stream 0
// belongs to problem generation).
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Header "iter,<name>_mean_relerr,..." then one row per checkpoint, values
// printed with %.17g so reruns are byte-identical.
void write_trace_csv(std::ostream& out, const ExperimentResult& result);
void write_trace_csv_file(const std::string& path, const ExperimentResult& result);

}  // namespace trek
