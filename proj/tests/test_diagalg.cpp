#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ulelab/sampling.hpp"
#include "ulelab/specops.hpp"

#include "ulelab/diagalg.hpp"

using namespace ulelab::diagalg;

namespace {

using Dense = std::vector<std::vector<double>>;

Dense dense_mul(const Dense& a, const Dense& b) {
  size_t n = a.size();
  Dense c(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k)
      for (size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

double max_abs_diff(const Dense& a, const Dense& b) {
  double worst = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  return worst;
}

DiagMatrix random_banded(int n, int band, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(-band, band);
  DiagMatrix m(n);
  for (int tries = 0; tries < band + 2; ++tries) {
    int k = pick(rng);
    if (m.has_diagonal(k)) continue;
    std::vector<double> diag(n - std::abs(k));
    for (double& v : diag) v = dist(rng);
    m.set_diagonal(k, std::move(diag));
  }
  return m;
}

}  // namespace

TEST_CASE("dense round trip is exact") {
  std::mt19937 rng(7);
  DiagMatrix m = random_banded(17, 4, rng);
  CHECK(max_abs_diff(DiagMatrix::from_dense(m.to_dense()).to_dense(), m.to_dense()) == 0.0);
}

TEST_CASE("shift times diagonal, 3x3 dense oracle") {
  // A = unit upper shift, B = diag(b): Z_1(i) = b(i+1), nothing else.
  DiagMatrix a(3);
  a.set_diagonal(1, {1.0, 1.0});
  DiagMatrix b = DiagMatrix::from_diagonal({5.0, 7.0, 11.0});
  DiagMatrix z = diag_product(a, b);
  CHECK(max_abs_diff(z.to_dense(), dense_mul(a.to_dense(), b.to_dense())) == 0.0);
  CHECK(z.at(1, 0) == 7.0);
  CHECK(z.at(1, 1) == 11.0);
  CHECK(z.at(0, 0) == 0.0);
  CHECK(z.at(-1, 1) == 0.0);
}

TEST_CASE("product against dense multiplication on random banded pairs") {
  std::mt19937 rng(42);
  for (int pair = 0; pair < 10; ++pair) {
    DiagMatrix a = random_banded(64, 5, rng);
    DiagMatrix b = random_banded(64, 7, rng);
    DiagMatrix z = diag_product(a, b);
    CHECK(max_abs_diff(z.to_dense(), dense_mul(a.to_dense(), b.to_dense())) <= 1e-12);
  }
}

TEST_CASE("identity and associativity") {
  std::mt19937 rng(3);
  DiagMatrix a = random_banded(32, 4, rng);
  DiagMatrix id = DiagMatrix::identity(32);
  CHECK(max_abs_diff(diag_product(a, id).to_dense(), a.to_dense()) == 0.0);

  for (int triple = 0; triple < 5; ++triple) {
    DiagMatrix x = random_banded(32, 3, rng);
    DiagMatrix y = random_banded(32, 4, rng);
    DiagMatrix z = random_banded(32, 2, rng);
    Dense left = diag_product(diag_product(x, y), z).to_dense();
    Dense right = diag_product(x, diag_product(y, z)).to_dense();
    CHECK(max_abs_diff(left, right) <= 1e-12);
  }
  CHECK_THROWS_AS(diag_product(DiagMatrix(3), DiagMatrix(4)), std::invalid_argument);
}

TEST_CASE("norm_s worked examples") {
  CHECK(norm_s(DiagMatrix::identity(6), 0.0) == 1.0);
  CHECK(norm_s(DiagMatrix::identity(6), 2.5) == 1.0);

  DiagMatrix m(8);
  m.set_diagonal(3, {2.0, -1.0, 0.5, 2.0, 1.0});
  CHECK(norm_s(m, 1.0) == doctest::Approx(2.0 * std::exp(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(norm_s(m, -0.1), std::invalid_argument);
}

TEST_CASE("norm_s is nondecreasing in s") {
  std::mt19937 rng(11);
  DiagMatrix m = random_banded(24, 6, rng);
  double prev = norm_s(m, 0.0);
  for (double s : {0.25, 0.5, 1.0, 2.0}) {
    double cur = norm_s(m, s);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("sup-of-diagonals norm submultiplicativity, banded form") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    DiagMatrix a = random_banded(48, 4, rng);
    DiagMatrix b = random_banded(48, 5, rng);
    double bound = static_cast<double>(a.stored_offsets().size()) * norm_s(a, 0.0) * norm_s(b, 0.0);
    CHECK(norm_s(diag_product(a, b), 0.0) <= bound * (1 + 1e-12));
  }
}

TEST_CASE("conjugation residual special cases") {
  // H diagonal, V = I, D = H: exactly zero.
  DiagMatrix h = DiagMatrix::from_diagonal({1.0, -2.0, 0.25, 9.0});
  CHECK(conjugation_residual(h, DiagMatrix::identity(4), h) == 0.0);

  // exact eigendecomposition of the free 8-site chain: residual at rounding
  int n = 8;
  double hopping = 0.5;
  DiagMatrix h2 = DiagMatrix::from_tridiagonal(std::vector<double>(n, 0.0), hopping);
  std::vector<std::vector<double>> cols(n, std::vector<double>(n));
  std::vector<double> evals(n);
  for (int k = 0; k < n; ++k) {
    evals[k] = 2.0 * hopping * std::cos(M_PI * (k + 1) / (n + 1));
    for (int i = 0; i < n; ++i)
      cols[k][i] = std::sqrt(2.0 / (n + 1)) * std::sin(M_PI * (k + 1) * (i + 1) / (n + 1));
  }
  DiagMatrix v = DiagMatrix::from_columns(cols);
  DiagMatrix d = DiagMatrix::from_diagonal(evals);
  double base = conjugation_residual(h2, v, d);
  CHECK(base <= 1e-13);

  // perturbing one entry of V moves the residual by at least ~hopping * delta
  cols[2][4] += 1e-3;
  double bumped = conjugation_residual(h2, DiagMatrix::from_columns(cols), d);
  CHECK(bumped >= 1e-4 * hopping);
}

TEST_CASE("decay profile fit") {
  // synthetic V_k = e^{-2|k|}: exact log-linear data
  DiagMatrix v(16);
  for (int k = -15; k <= 15; ++k) {
    std::vector<double> diag(16 - std::abs(k), std::exp(-2.0 * std::abs(k)));
    v.set_diagonal(k, std::move(diag));
  }
  DecayProfile prof = diagonal_decay_profile(v);
  REQUIRE(prof.fit_ok);
  CHECK(prof.r_fit == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(prof.c_fit == doctest::Approx(1.0).epsilon(1e-9));

  // V = I: single point, fit refused
  DecayProfile id_prof = diagonal_decay_profile(DiagMatrix::identity(5));
  CHECK(!id_prof.fit_ok);
  REQUIRE(id_prof.points.size() == 1);
  CHECK(id_prof.points[0].first == 0);
  CHECK(id_prof.points[0].second == 1.0);
}

TEST_CASE("eigenvector matrices decay faster at smaller hopping") {
  using namespace ulelab;
  sampling::DistalGenerator gen(
      hull::FrequencyChain({2, 8, 512}, hull::GrowthPattern::parse("cube")), 2);
  int n = 48;
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = to_double(gen.value(i, 3));
  auto rate_at = [&](double eps) {
    specops::DressedResult res = specops::construct_dressed_potential(d, eps, 1e-8, 100, 6);
    REQUIRE(res.converged);
    specops::EigenSystem es = specops::eigensystem(
        specops::window_from_diagonal(res.p, eps, specops::WindowForm::Standard));
    // fit above the resonance-bump scale: far diagonals carry weight ~ J/delta
    // from distance-8 resonances rather than the exponential envelope
    DecayProfile prof = diagonal_decay_profile(DiagMatrix::from_columns(es.vectors), 1e-6);
    REQUIRE(prof.fit_ok);
    return prof.r_fit;
  };
  CHECK(rate_at(0.04) > rate_at(0.08));
}

TEST_CASE("shift covariance reduces to the plain residual at t = 0") {
  // Any exact eigendecomposition data would do; use a small analytic one.
  DiagMatrix h = DiagMatrix::from_tridiagonal({0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 1.0);
  // eigenvectors of the free 6-site chain: sine modes
  int n = 6;
  std::vector<std::vector<double>> cols(n, std::vector<double>(n));
  std::vector<double> evals(n);
  for (int k = 0; k < n; ++k) {
    evals[k] = 2.0 * std::cos(M_PI * (k + 1) / (n + 1));
    for (int i = 0; i < n; ++i)
      cols[k][i] = std::sqrt(2.0 / (n + 1)) * std::sin(M_PI * (k + 1) * (i + 1) / (n + 1));
  }
  DiagMatrix v = DiagMatrix::from_columns(cols);
  DiagMatrix d = DiagMatrix::from_diagonal(evals);
  double plain = conjugation_residual(h, v, d);
  double shifted = shift_covariance_residual(h, v, d, 0, 0);
  CHECK(plain <= 1e-13);
  // the t = 0 interior residual can only drop entries, never add new ones
  CHECK(shifted <= plain + 1e-15);
  CHECK_THROWS_AS(shift_covariance_residual(h, v, d, 3, 2), std::invalid_argument);
}
