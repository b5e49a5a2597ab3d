#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <stdexcept>

#include "trek/experiments.hpp"
#include "trek/objectives.hpp"
#include "trek/solvers.hpp"
#include "trek/spectral.hpp"
#include "trek/tensor.hpp"
#include "trek/tensor_io.hpp"

namespace py = pybind11;

namespace {

using FArray = py::array_t<double, py::array::f_style | py::array::forcecast>;

trek::Tensor3 to_tensor(const FArray& arr) {
  if (arr.ndim() != 3) {
    throw std::invalid_argument("expected a 3-d array of shape (n1, n2, n3)");
  }
  trek::Tensor3 t(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
                  static_cast<int>(arr.shape(2)));
  // f_style guarantees fortran-contiguous data, which is exactly the
  // frontal-slice-major layout
  std::memcpy(t.data(), arr.data(), sizeof(double) * static_cast<std::size_t>(t.size()));
  return t;
}

py::array_t<double> from_tensor(const trek::Tensor3& t) {
  const auto n1 = static_cast<py::ssize_t>(t.n1());
  const auto n2 = static_cast<py::ssize_t>(t.n2());
  const auto n3 = static_cast<py::ssize_t>(t.n3());
  py::array_t<double> arr({n1, n2, n3},
                          {static_cast<py::ssize_t>(sizeof(double)),
                           static_cast<py::ssize_t>(sizeof(double)) * n1,
                           static_cast<py::ssize_t>(sizeof(double)) * n1 * n2});
  std::memcpy(arr.mutable_data(), t.data(),
              sizeof(double) * static_cast<std::size_t>(t.size()));
  return arr;
}

trek::Objective make_objective(const std::string& name, double lam) {
  if (name == "frobenius") return trek::Objective::frobenius();
  if (name == "elastic_net" || name == "elastic-net") {
    return trek::Objective::elastic_net(lam);
  }
  throw std::invalid_argument("objective must be 'frobenius' or 'elastic_net'");
}

}  // namespace

PYBIND11_MODULE(_trek, m) {
  m.doc() = "t-product tensor algebra and randomized Kaczmarz solver family";

  m.def("tprod", [](const FArray& a, const FArray& b) {
    return from_tensor(trek::tprod(to_tensor(a), to_tensor(b)));
  }, py::arg("a"), py::arg("b"));

  m.def("transpose", [](const FArray& a) {
    return from_tensor(trek::transpose(to_tensor(a)));
  }, py::arg("a"));

  m.def("inner", [](const FArray& a, const FArray& b) {
    return trek::inner(to_tensor(a), to_tensor(b));
  }, py::arg("a"), py::arg("b"));

  m.def("frobenius_norm", [](const FArray& a) {
    return trek::frobenius_norm(to_tensor(a));
  }, py::arg("a"));

  m.def("spectral_norm", [](const FArray& a) {
    return trek::spectral_norm(to_tensor(a));
  }, py::arg("a"));

  m.def("sigma_min_nonzero", [](const FArray& a, double rel_tol) {
    return trek::sigma_min_nonzero(to_tensor(a), {rel_tol});
  }, py::arg("a"), py::arg("rel_tol") = 1e-10);

  m.def("lambda_row", [](const FArray& a) {
    return trek::lambda_row(to_tensor(a));
  }, py::arg("a"));

  m.def("lambda_col", [](const FArray& a) {
    return trek::lambda_col(to_tensor(a));
  }, py::arg("a"));

  m.def("pinv_apply", [](const FArray& a, const FArray& b, double rel_tol) {
    return from_tensor(trek::pinv_apply(to_tensor(a), to_tensor(b), {rel_tol}));
  }, py::arg("a"), py::arg("b"), py::arg("rel_tol") = 1e-10);

  m.def("soft_shrinkage", [](const FArray& x, double lam) {
    return from_tensor(trek::soft_shrinkage(to_tensor(x), lam));
  }, py::arg("x"), py::arg("lam"));

  m.def("default_stepsizes", [](const FArray& a, double step_factor) {
    return trek::default_stepsizes(to_tensor(a), step_factor);
  }, py::arg("a"), py::arg("step_factor") = 1.5);

  m.def("theoretical_rates", [](const FArray& a, const std::string& objective,
                                double lam, double alpha_r, double alpha_c,
                                std::optional<double> nu) {
    const trek::RateReport r = trek::theoretical_rates(
        to_tensor(a), make_objective(objective, lam), alpha_r, alpha_c, nu);
    py::dict d;
    d["lambda_r"] = r.lambda_r;
    d["lambda_c"] = r.lambda_c;
    d["sigma_min"] = r.sigma_min;
    d["fro_norm2"] = r.a_fro2;
    d["gamma"] = r.gamma;
    d["alpha_r"] = r.alpha_r;
    d["alpha_c"] = r.alpha_c;
    d["rho_c"] = r.rho_c;
    d["nu"] = r.nu ? py::object(py::float_(*r.nu)) : py::object(py::none());
    d["rho_r"] = r.rho_r ? py::object(py::float_(*r.rho_r)) : py::object(py::none());
    return d;
  }, py::arg("a"), py::arg("objective") = "frobenius", py::arg("lam") = 1.0,
     py::arg("alpha_r") = 1.0, py::arg("alpha_c") = 1.0,
     py::arg("nu") = py::none());

  m.def("solve", [](const std::string& algorithm, const FArray& a, const FArray& b,
                    const std::string& objective, double lam, double alpha_r,
                    double alpha_c, std::int64_t max_iters, double tol,
                    std::uint64_t seed, std::int64_t log_every,
                    std::optional<FArray> reference) {
    trek::SolverConfig cfg;
    cfg.alpha_r = alpha_r;
    cfg.alpha_c = alpha_c;
    cfg.max_iters = max_iters;
    cfg.tol = tol;
    cfg.seed = seed;
    cfg.log_every = log_every;
    if (reference) cfg.reference = to_tensor(*reference);
    const trek::RunResult res =
        trek::run(trek::parse_algorithm(algorithm), to_tensor(a), to_tensor(b),
                  make_objective(objective, lam), cfg);
    py::dict d;
    d["x"] = from_tensor(res.x);
    d["iterations"] = res.iterations;
    d["stop_reason"] = res.stop_reason == trek::StopReason::tolerance_met
                           ? "tolerance_met" : "budget_exhausted";
    std::vector<std::int64_t> iters;
    std::vector<double> values;
    for (const auto& p : res.trace) {
      iters.push_back(p.iter);
      values.push_back(p.value);
    }
    d["trace_iters"] = iters;
    d["trace_values"] = values;
    return d;
  }, py::arg("algorithm"), py::arg("a"), py::arg("b"),
     py::arg("objective") = "frobenius", py::arg("lam") = 1.0,
     py::arg("alpha_r") = 1.0, py::arg("alpha_c") = 1.0,
     py::arg("max_iters") = 1000, py::arg("tol") = 0.0, py::arg("seed") = 0,
     py::arg("log_every") = 1, py::arg("reference") = py::none());

  m.def("save_tensor", [](const std::string& path, const FArray& t) {
    trek::save_tensor(path, to_tensor(t));
  }, py::arg("path"), py::arg("t"));

  m.def("load_tensor", [](const std::string& path) {
    return from_tensor(trek::load_tensor(path));
  }, py::arg("path"));
}
