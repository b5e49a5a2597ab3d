#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trek/objectives.hpp"
#include "trek/rng.hpp"
#include "trek/spectral.hpp"
#include "trek/tensor.hpp"

namespace trek {

// trk/trek are the least-squares members of the family (frobenius objective
// required); rrk/rrek take any objective; rrek_sparse is rrek restricted to
// the elastic net.
enum class Algorithm { trk, rrk, trek, rrek, rrek_sparse };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

enum class StopReason { tolerance_met, budget_exhausted };

// Discrete distribution sampled by inverse CDF over prefix sums; one uniform
// draw per sample.
class SamplingDist {
 public:
  explicit SamplingDist(std::vector<double> weights);

  static SamplingDist over_horizontal_slices(const Tensor3& a);
  static SamplingDist over_lateral_slices(const Tensor3& a);

  int sample(Rng& rng) const;
  int size() const { return static_cast<int>(prefix_.size()); }
  double total() const { return prefix_.back(); }

 private:
  std::vector<double> prefix_;
};

// Materialized slices, their transposes, squared norms and sampling
// distributions for one system A X = B. Built once per run.
class KaczmarzSystem {
 public:
  KaczmarzSystem(const Tensor3& a, const Tensor3& b, bool with_columns);

  const Tensor3& a() const { return a_; }
  const Tensor3& b() const { return b_; }
  bool has_columns() const { return !col_slices_.empty(); }

  const Tensor3& row_slice(int i) const { return row_slices_[i]; }
  const Tensor3& row_slice_t(int i) const { return row_slices_t_[i]; }
  const Tensor3& b_row(int i) const { return b_rows_[i]; }
  double row_norm2(int i) const { return row_norm2_[i]; }
  const SamplingDist& row_dist() const { return *row_dist_; }

  const Tensor3& col_slice(int j) const { return col_slices_[j]; }
  const Tensor3& col_slice_t(int j) const { return col_slices_t_[j]; }
  double col_norm2(int j) const { return col_norm2_[j]; }
  const SamplingDist& col_dist() const { return *col_dist_; }

  double a_fro2() const { return a_fro2_; }

 private:
  Tensor3 a_, b_;
  std::vector<Tensor3> row_slices_, row_slices_t_, b_rows_;
  std::vector<Tensor3> col_slices_, col_slices_t_;
  std::vector<double> row_norm2_, col_norm2_;
  std::optional<SamplingDist> row_dist_, col_dist_;
  double a_fro2_ = 0.0;
};

// x is always grad f*(y); z exists only for the extended variants.
struct SolverState {
  Tensor3 x, y;
  std::optional<Tensor3> z;
  std::int64_t k = 0;
  int last_row = -1;
  int last_col = -1;
};

struct StepWorkspace {
  Tensor3 row_resid, y_delta, col_tmp, z_delta;
};

SolverState init_row_state(const KaczmarzSystem& sys, const Objective& obj);
SolverState init_extended_state(const KaczmarzSystem& sys, const Objective& obj);

// One row-action step: sample i, relax the dual along (A_i)^T, refresh x.
// Consumes exactly one uniform draw.
void rrk_step(const KaczmarzSystem& sys, const Objective& obj, double alpha_r,
              SolverState& state, StepWorkspace& ws, Rng& rng);

// Residual-shrinking half step on z alone: sample j, project out the sampled
// lateral slice's range component. One uniform draw.
void z_step(const KaczmarzSystem& sys, double alpha_c, Tensor3& z,
            SolverState* state, StepWorkspace& ws, Rng& rng);

// One extended step: z update first, then the row update reads the refreshed
// z. Consumes exactly two uniform draws (column index, then row index).
void rrek_step(const KaczmarzSystem& sys, const Objective& obj, double alpha_r,
               double alpha_c, SolverState& state, StepWorkspace& ws, Rng& rng);

struct SolverConfig {
  double alpha_r = 1.0;
  double alpha_c = 1.0;
  std::int64_t max_iters = 1000;
  double tol = 0.0;  // relative-change stop; 0 runs the full budget
  std::uint64_t seed = 0;
  std::int64_t log_every = 1;
  std::optional<Tensor3> reference;  // trace relative error against this
};

struct TracePoint {
  std::int64_t iter;
  double value;
};

struct RunResult {
  Tensor3 x;
  std::int64_t iterations = 0;
  StopReason stop_reason = StopReason::budget_exhausted;
  // Relative error vs the reference when one is given, else relative change
  // between consecutive iterates.
  std::vector<TracePoint> trace;
  // Bregman distance to the reference (only with a reference).
  std::vector<TracePoint> bregman_trace;
};

RunResult run(Algorithm alg, const Tensor3& a, const Tensor3& b,
              const Objective& obj, const SolverConfig& cfg);

// (alpha_r, alpha_c) = step_factor / (lambda_row, lambda_col).
std::pair<double, double> default_stepsizes(const Tensor3& a,
                                            double step_factor = 1.5);

struct RateReport {
  double alpha_r = 0.0, alpha_c = 0.0;
  double lambda_r = 0.0, lambda_c = 0.0;
  double sigma_min = 0.0;
  double a_fro2 = 0.0;
  double gamma = 1.0;
  double rho_c = 0.0;                // residual-shrinking contraction factor
  std::optional<double> nu;          // strong-convexity input for rho_r
  std::optional<double> rho_r;       // dual contraction factor, needs nu
};

// nu defaults to 2 sigma_min^2 for the frobenius objective and stays empty
// otherwise unless supplied.
RateReport theoretical_rates(const Tensor3& a, const Objective& obj,
                             double alpha_r, double alpha_c,
                             std::optional<double> nu_user = {},
                             RankTolerance tol = {});

// Warnings (not errors) when a step size leaves its admissible interval
// (0, 2 gamma / lambda).
std::vector<std::string> stepsize_warnings(const RateReport& r);

// Expected-distance bound for the extended iteration after k steps:
//   coef * sum_{i=0}^{k-1} rho_c^{k-i} q^i + q^k * d0,  q = (1+delta/gamma) rho_r,
//   coef = (delta+gamma)/(2 delta gamma) * alpha_r^2 lambda_r / ||A||_F^2 * proj2,
// bounding E[D(xhat)] where d0 is the initial Bregman distance and proj2 the
// squared norm of the range component of B. Requires rho_r.
double extended_bregman_bound(const RateReport& r, double proj2, double d0,
                              double delta, std::int64_t k);

// Frobenius specialization bounding E||x_k - xhat||_F^2 directly.
double extended_mse_bound(const RateReport& r, double proj2, double x0_err2,
                          double delta, std::int64_t k);

struct ZBoundCheckpoint {
  std::int64_t k = 0;
  double mean_err2 = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ZBoundReport {
  double rho_c = 0.0;
  double proj2 = 0.0;
  std::vector<ZBoundCheckpoint> points;
  bool all_pass = true;
};

// Monte Carlo check that the residual-shrinking iteration contracts at least
// as fast as rho_c^k in the mean: mean ||z_k - z_inf||_F^2 over num_seeds
// independent runs must stay below rho_c^k * ||range component of B||^2
// times slack at every checkpoint.
ZBoundReport z_error_bound_check(const Tensor3& a, const Tensor3& b,
                                 double alpha_c, int num_seeds,
                                 std::uint64_t base_seed,
                                 const std::vector<std::int64_t>& checkpoints,
                                 double slack, RankTolerance tol = {});

}  // namespace trek
