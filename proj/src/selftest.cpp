#include "trek/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "trek/oracle.hpp"
#include "trek/rng.hpp"
#include "trek/spectral.hpp"
#include "trek/tensor.hpp"

namespace trek {

bool SelfTestReport::all_pass() const {
  return std::all_of(lines.begin(), lines.end(),
                     [](const SelfTestLine& l) { return l.pass; });
}

namespace {

int rand_extent(Rng& rng) {
  return 1 + static_cast<int>(rng.next_uniform() * 8.0);
}

struct Worst {
  double value = 0.0;
  void feed(double v) { value = std::max(value, v); }
};

double rel(double got, double want) {
  const double scale = std::max({1.0, std::abs(got), std::abs(want)});
  return std::abs(got - want) / scale;
}

double rel_tensor(const Tensor3& got, const Tensor3& want) {
  const double scale = std::max(1.0, frobenius_norm(want));
  return frobenius_norm(sub(got, want)) / scale;
}

}  // namespace

SelfTestReport run_selftest(int instances, std::uint64_t seed) {
  Worst w_tprod, w_ttop, w_adjoint, w_spec, w_smin, w_lam, w_pinv;

  for (int inst = 0; inst < instances; ++inst) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(inst));
    const int n1 = rand_extent(rng), n2 = rand_extent(rng), n3 = rand_extent(rng);
    const int k = rand_extent(rng);
    Tensor3 a = gaussian_tensor({n1, n2, n3}, rng);
    if (inst % 3 == 0 && n1 >= 2) {
      // rank-deficient flavor: duplicate a horizontal slice
      embed_horizontal(a, 0, horizontal_slice(a, n1 - 1));
    }
    const Tensor3 b = gaussian_tensor({n2, k, n3}, rng);
    const Tensor3 c = gaussian_tensor({n1, k, n3}, rng);
    const Tensor3 rhs = gaussian_tensor({n1, k, n3}, rng);

    w_tprod.feed(rel_tensor(tprod(a, b), oracle::tprod_reference(a, b)));

    const Tensor3 at = transpose(a);
    const Eigen::MatrixXd bt_direct = oracle::bcirc(at);
    const Eigen::MatrixXd bt_want = oracle::bcirc(a).transpose();
    w_ttop.feed((bt_direct - bt_want).cwiseAbs().maxCoeff());
    w_ttop.feed(frobenius_norm(sub(transpose(at), a)));

    const double lhs = inner(tprod(a, b), c);
    const double rhsv = inner(b, tprod(at, c));
    w_adjoint.feed(std::abs(lhs - rhsv) / (1.0 + std::abs(lhs) + std::abs(rhsv)));

    w_spec.feed(rel(spectral_norm(a), oracle::spectral_norm_dense(a)));
    w_smin.feed(rel(sigma_min_nonzero(a), oracle::sigma_min_nonzero_dense(a)));
    w_lam.feed(rel(lambda_row(a), oracle::lambda_row_dense(a)));
    w_lam.feed(rel(lambda_col(a), oracle::lambda_col_dense(a)));

    const Tensor3 x_spec = pinv_apply(a, rhs);
    const Tensor3 x_dense = oracle::pinv_apply_dense(a, rhs);
    w_pinv.feed(rel_tensor(x_spec, x_dense));
    // normal equations hold for any least-squares solution
    const Tensor3 resid = tprod(at, sub(tprod(a, x_spec), rhs));
    w_pinv.feed(frobenius_norm(resid) /
                std::max(1.0, frobenius_norm(a) * frobenius_norm(rhs)));
  }

  SelfTestReport report;
  const auto line = [&](const char* name, const Worst& w, double tol) {
    report.lines.push_back({name, instances, w.value, tol, w.value <= tol});
  };
  line("tprod vs materialized circulant", w_tprod, 1e-12);
  line("transpose circulant identity + involution", w_ttop, 0.0);
  line("adjoint inner-product identity", w_adjoint, 1e-10);
  line("spectral_norm vs dense", w_spec, 1e-10);
  line("sigma_min_nonzero vs dense", w_smin, 1e-8);
  line("lambda_row/lambda_col vs dense", w_lam, 1e-10);
  line("pinv_apply vs dense + normal equations", w_pinv, 1e-8);
  return report;
}

void print_report(const SelfTestReport& report, std::ostream& out) {
  for (const auto& l : report.lines) {
    out << (l.pass ? "PASS" : "FAIL") << "  " << l.name << "  (worst "
        << l.worst << ", tol " << l.tol << ", " << l.cases << " instances)\n";
  }
}

}  // namespace trek
