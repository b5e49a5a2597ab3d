#include "trek/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trek {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::trk: return "trk";
    case Algorithm::rrk: return "rrk";
    case Algorithm::trek: return "trek";
    case Algorithm::rrek: return "rrek";
    case Algorithm::rrek_sparse: return "rrek_sparse";
  }
  throw std::logic_error("bad Algorithm");
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "trk") return Algorithm::trk;
  if (name == "rrk") return Algorithm::rrk;
  if (name == "trek") return Algorithm::trek;
  if (name == "rrek") return Algorithm::rrek;
  if (name == "rrek_sparse" || name == "rrek-sparse") return Algorithm::rrek_sparse;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

SamplingDist::SamplingDist(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("SamplingDist: no weights");
  prefix_.resize(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("SamplingDist: weights must be finite and nonnegative");
    }
    acc += w;
    prefix_[i] = acc;
  }
  if (!(acc > 0.0)) throw std::invalid_argument("SamplingDist: total weight is zero");
}

SamplingDist SamplingDist::over_horizontal_slices(const Tensor3& a) {
  std::vector<double> w(static_cast<std::size_t>(a.n1()), 0.0);
  for (int c = 0; c < a.n3(); ++c) {
    const auto f = a.frontal(c);
    for (int i = 0; i < a.n1(); ++i) w[static_cast<std::size_t>(i)] += f.row(i).squaredNorm();
  }
  return SamplingDist(std::move(w));
}

SamplingDist SamplingDist::over_lateral_slices(const Tensor3& a) {
  std::vector<double> w(static_cast<std::size_t>(a.n2()), 0.0);
  for (int c = 0; c < a.n3(); ++c) {
    const auto f = a.frontal(c);
    for (int j = 0; j < a.n2(); ++j) w[static_cast<std::size_t>(j)] += f.col(j).squaredNorm();
  }
  return SamplingDist(std::move(w));
}

int SamplingDist::sample(Rng& rng) const {
  const double u = rng.next_uniform() * prefix_.back();
  const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
  const auto idx = it == prefix_.end() ? prefix_.size() - 1
                                       : static_cast<std::size_t>(it - prefix_.begin());
  return static_cast<int>(idx);
}

KaczmarzSystem::KaczmarzSystem(const Tensor3& a, const Tensor3& b,
                               bool with_columns)
    : a_(a), b_(b) {
  if (a.n1() != b.n1() || a.n3() != b.n3()) {
    throw std::invalid_argument("system: A and B row/tube extents must agree");
  }
  const int n1 = a.n1(), n2 = a.n2();
  row_slices_.reserve(n1);
  row_slices_t_.reserve(n1);
  b_rows_.reserve(n1);
  row_norm2_.reserve(n1);
  std::vector<double> row_w(static_cast<std::size_t>(n1));
  for (int i = 0; i < n1; ++i) {
    row_slices_.push_back(horizontal_slice(a, i));
    row_slices_t_.push_back(transpose(row_slices_.back()));
    b_rows_.push_back(horizontal_slice(b, i));
    const double n2i = frobenius_norm2(row_slices_.back());
    if (n2i == 0.0) {
      throw std::invalid_argument("system: zero horizontal slice at index " +
                                  std::to_string(i));
    }
    row_norm2_.push_back(n2i);
    row_w[static_cast<std::size_t>(i)] = n2i;
    a_fro2_ += n2i;
  }
  row_dist_.emplace(std::move(row_w));

  if (with_columns) {
    col_slices_.reserve(n2);
    col_slices_t_.reserve(n2);
    col_norm2_.reserve(n2);
    std::vector<double> col_w(static_cast<std::size_t>(n2));
    for (int j = 0; j < n2; ++j) {
      col_slices_.push_back(lateral_slice(a, j));
      col_slices_t_.push_back(transpose(col_slices_.back()));
      const double n2j = frobenius_norm2(col_slices_.back());
      if (n2j == 0.0) {
        throw std::invalid_argument("system: zero lateral slice at index " +
                                    std::to_string(j));
      }
      col_norm2_.push_back(n2j);
      col_w[static_cast<std::size_t>(j)] = n2j;
    }
    col_dist_.emplace(std::move(col_w));
  }
}

SolverState init_row_state(const KaczmarzSystem& sys, const Objective& obj) {
  SolverState st;
  st.y = Tensor3(sys.a().n2(), sys.b().n2(), sys.a().n3());
  st.x = obj.conjugate_grad(st.y);
  return st;
}

SolverState init_extended_state(const KaczmarzSystem& sys, const Objective& obj) {
  SolverState st = init_row_state(sys, obj);
  st.z = sys.b();
  return st;
}

namespace {

// resid += horizontal slice i of z, without materializing the slice
void add_row_of(Tensor3& resid, const Tensor3& z, int i) {
  for (int c = 0; c < z.n3(); ++c) {
    resid.frontal(c) += z.frontal(c).row(i);
  }
}

}  // namespace

void rrk_step(const KaczmarzSystem& sys, const Objective& obj, double alpha_r,
              SolverState& state, StepWorkspace& ws, Rng& rng) {
  const int i = sys.row_dist().sample(rng);
  state.last_row = i;
  tprod_into(sys.row_slice(i), state.x, ws.row_resid);
  sub_inplace(ws.row_resid, sys.b_row(i));
  scale_inplace(ws.row_resid, 1.0 / sys.row_norm2(i));
  tprod_into(sys.row_slice_t(i), ws.row_resid, ws.y_delta);
  add_scaled(state.y, -alpha_r, ws.y_delta);
  obj.conjugate_grad_into(state.y, state.x);
  ++state.k;
}

void z_step(const KaczmarzSystem& sys, double alpha_c, Tensor3& z,
            SolverState* state, StepWorkspace& ws, Rng& rng) {
  const int j = sys.col_dist().sample(rng);
  if (state != nullptr) state->last_col = j;
  tprod_into(sys.col_slice_t(j), z, ws.col_tmp);
  scale_inplace(ws.col_tmp, alpha_c / sys.col_norm2(j));
  tprod_into(sys.col_slice(j), ws.col_tmp, ws.z_delta);
  sub_inplace(z, ws.z_delta);
}

void rrek_step(const KaczmarzSystem& sys, const Objective& obj, double alpha_r,
               double alpha_c, SolverState& state, StepWorkspace& ws, Rng& rng) {
  z_step(sys, alpha_c, *state.z, &state, ws, rng);
  const int i = sys.row_dist().sample(rng);
  state.last_row = i;
  tprod_into(sys.row_slice(i), state.x, ws.row_resid);
  sub_inplace(ws.row_resid, sys.b_row(i));
  add_row_of(ws.row_resid, *state.z, i);
  scale_inplace(ws.row_resid, 1.0 / sys.row_norm2(i));
  tprod_into(sys.row_slice_t(i), ws.row_resid, ws.y_delta);
  add_scaled(state.y, -alpha_r, ws.y_delta);
  obj.conjugate_grad_into(state.y, state.x);
  ++state.k;
}

namespace {

bool is_extended(Algorithm alg) {
  return alg == Algorithm::trek || alg == Algorithm::rrek ||
         alg == Algorithm::rrek_sparse;
}

void check_objective(Algorithm alg, const Objective& obj) {
  const bool needs_frobenius = alg == Algorithm::trk || alg == Algorithm::trek;
  if (needs_frobenius && obj.kind() != ObjectiveKind::frobenius) {
    throw std::invalid_argument(to_string(alg) + " requires the frobenius objective");
  }
  if (alg == Algorithm::rrek_sparse && obj.kind() != ObjectiveKind::elastic_net) {
    throw std::invalid_argument("rrek_sparse requires the elastic_net objective");
  }
}

void check_config(const SolverConfig& cfg) {
  if (!(cfg.alpha_r > 0.0) || !std::isfinite(cfg.alpha_r) ||
      !(cfg.alpha_c > 0.0) || !std::isfinite(cfg.alpha_c)) {
    throw std::invalid_argument("step sizes must be positive and finite");
  }
  if (cfg.max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  if (!(cfg.tol >= 0.0)) throw std::invalid_argument("tol must be >= 0");
  if (cfg.log_every < 1) throw std::invalid_argument("log_every must be >= 1");
}

double frobenius_distance2(const Tensor3& a, const Tensor3& b) {
  const double* pa = a.data();
  const double* pb = b.data();
  double acc = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) {
    const double d = pa[i] - pb[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

RunResult run(Algorithm alg, const Tensor3& a, const Tensor3& b,
              const Objective& obj, const SolverConfig& cfg) {
  check_objective(alg, obj);
  check_config(cfg);

  const bool extended = is_extended(alg);
  KaczmarzSystem sys(a, b, extended);
  SolverState state = extended ? init_extended_state(sys, obj)
                               : init_row_state(sys, obj);
  if (cfg.reference && !cfg.reference->same_dims(state.x)) {
    throw std::invalid_argument("reference dims must match the solution");
  }

  StepWorkspace ws;
  Rng rng(cfg.seed);
  RunResult out;

  const bool has_ref = cfg.reference.has_value();
  double ref_norm = 0.0;
  if (has_ref) ref_norm = frobenius_norm(*cfg.reference);

  const auto rel_error = [&](const Tensor3& x) {
    const double d = std::sqrt(frobenius_distance2(x, *cfg.reference));
    return ref_norm > 0.0 ? d / ref_norm : d;
  };

  std::int64_t last_logged = -1;
  const auto log_point = [&](std::int64_t k, double change_value) {
    if (k == last_logged) return;
    last_logged = k;
    if (has_ref) {
      out.trace.push_back({k, rel_error(state.x)});
      out.bregman_trace.push_back(
          {k, bregman_distance(obj, {state.x, state.y}, *cfg.reference)});
    } else if (k > 0) {
      out.trace.push_back({k, change_value});
    }
  };

  if (has_ref) log_point(0, 0.0);

  Tensor3 x_prev = state.x;
  StopReason reason = StopReason::budget_exhausted;
  std::int64_t k = 0;
  double last_change = 0.0;
  while (k < cfg.max_iters) {
    x_prev = state.x;
    if (extended) {
      rrek_step(sys, obj, cfg.alpha_r, cfg.alpha_c, state, ws, rng);
    } else {
      rrk_step(sys, obj, cfg.alpha_r, state, ws, rng);
    }
    ++k;
    const double prev_norm = frobenius_norm(x_prev);
    const double change = std::sqrt(frobenius_distance2(state.x, x_prev));
    last_change = prev_norm > 0.0 ? change / prev_norm : change;
    if (k % cfg.log_every == 0) log_point(k, last_change);
    if (prev_norm > 0.0 && change / prev_norm < cfg.tol) {
      reason = StopReason::tolerance_met;
      break;
    }
  }
  log_point(k, last_change);

  out.x = std::move(state.x);
  out.iterations = k;
  out.stop_reason = reason;
  return out;
}

std::pair<double, double> default_stepsizes(const Tensor3& a, double step_factor) {
  if (!(step_factor > 0.0) || !(step_factor < 2.0)) {
    throw std::invalid_argument("step_factor must lie in (0, 2)");
  }
  return {step_factor / lambda_row(a), step_factor / lambda_col(a)};
}

RateReport theoretical_rates(const Tensor3& a, const Objective& obj,
                             double alpha_r, double alpha_c,
                             std::optional<double> nu_user, RankTolerance tol) {
  if (!(alpha_r > 0.0) || !(alpha_c > 0.0)) {
    throw std::invalid_argument("step sizes must be positive");
  }
  RateReport r;
  r.alpha_r = alpha_r;
  r.alpha_c = alpha_c;
  r.lambda_r = lambda_row(a);
  r.lambda_c = lambda_col(a);
  r.sigma_min = sigma_min_nonzero(a, tol);
  r.a_fro2 = frobenius_norm2(a);
  r.gamma = obj.gamma();
  r.rho_c = 1.0 - (2.0 * alpha_c - alpha_c * alpha_c * r.lambda_c) *
                      r.sigma_min * r.sigma_min / r.a_fro2;
  if (nu_user) {
    r.nu = *nu_user;
  } else if (obj.kind() == ObjectiveKind::frobenius) {
    r.nu = 2.0 * r.sigma_min * r.sigma_min;
  }
  if (r.nu) {
    r.rho_r = 1.0 - (2.0 * r.gamma * alpha_r - alpha_r * alpha_r * r.lambda_r) *
                        *r.nu / (2.0 * r.gamma * r.a_fro2);
  }
  return r;
}

std::vector<std::string> stepsize_warnings(const RateReport& r) {
  std::vector<std::string> out;
  const double row_hi = 2.0 * r.gamma / r.lambda_r;
  const double col_hi = 2.0 / r.lambda_c;
  if (!(r.alpha_r > 0.0) || !(r.alpha_r < row_hi)) {
    out.push_back("alpha_r = " + std::to_string(r.alpha_r) +
                  " outside admissible (0, " + std::to_string(row_hi) + ")");
  }
  if (!(r.alpha_c > 0.0) || !(r.alpha_c < col_hi)) {
    out.push_back("alpha_c = " + std::to_string(r.alpha_c) +
                  " outside admissible (0, " + std::to_string(col_hi) + ")");
  }
  return out;
}

double extended_bregman_bound(const RateReport& r, double proj2, double d0,
                              double delta, std::int64_t k) {
  if (!r.rho_r) {
    throw std::invalid_argument("extended_bregman_bound: rho_r unavailable (supply nu)");
  }
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double g = r.gamma;
  const double q = (1.0 + delta / g) * (*r.rho_r);
  const double coef = (delta + g) / (2.0 * delta * g) * r.alpha_r * r.alpha_r *
                      r.lambda_r / r.a_fro2 * proj2;
  double sum = 0.0;
  for (std::int64_t i = 0; i < k; ++i) {
    sum += std::pow(r.rho_c, static_cast<double>(k - i)) *
           std::pow(q, static_cast<double>(i));
  }
  return coef * sum + std::pow(q, static_cast<double>(k)) * d0;
}

double extended_mse_bound(const RateReport& r, double proj2, double x0_err2,
                          double delta, std::int64_t k) {
  return 2.0 * extended_bregman_bound(r, proj2, 0.5 * x0_err2, delta, k);
}

ZBoundReport z_error_bound_check(const Tensor3& a, const Tensor3& b,
                                 double alpha_c, int num_seeds,
                                 std::uint64_t base_seed,
                                 const std::vector<std::int64_t>& checkpoints,
                                 double slack, RankTolerance tol) {
  if (num_seeds < 1) throw std::invalid_argument("num_seeds must be >= 1");
  if (checkpoints.empty()) throw std::invalid_argument("no checkpoints given");
  for (std::size_t i = 0; i + 1 < checkpoints.size(); ++i) {
    if (checkpoints[i] >= checkpoints[i + 1] || checkpoints[i] < 0) {
      throw std::invalid_argument("checkpoints must be increasing and nonnegative");
    }
  }

  const Tensor3 xhat = pinv_apply(a, b, tol);
  const Tensor3 proj = tprod(a, xhat);
  const Tensor3 z_inf = sub(b, proj);
  const double proj2 = frobenius_norm2(proj);

  const double lc = lambda_col(a);
  const double smin = sigma_min_nonzero(a, tol);
  const double rho_c = 1.0 - (2.0 * alpha_c - alpha_c * alpha_c * lc) *
                                 smin * smin / frobenius_norm2(a);

  KaczmarzSystem sys(a, b, true);
  std::vector<double> sums(checkpoints.size(), 0.0);
  StepWorkspace ws;
  for (int s = 0; s < num_seeds; ++s) {
    Rng rng = Rng::substream(base_seed, static_cast<std::uint64_t>(s));
    Tensor3 z = b;
    std::int64_t k = 0;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      while (k < checkpoints[c]) {
        z_step(sys, alpha_c, z, nullptr, ws, rng);
        ++k;
      }
      sums[c] += frobenius_distance2(z, z_inf);
    }
  }

  ZBoundReport report;
  report.rho_c = rho_c;
  report.proj2 = proj2;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    ZBoundCheckpoint pt;
    pt.k = checkpoints[c];
    pt.mean_err2 = sums[c] / num_seeds;
    pt.bound = std::pow(rho_c, static_cast<double>(pt.k)) * proj2;
    pt.pass = pt.mean_err2 <= pt.bound * slack;
    report.all_pass = report.all_pass && pt.pass;
    report.points.push_back(pt);
  }
  return report;
}

}  // namespace trek
