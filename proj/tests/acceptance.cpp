// Acceptance suite: one timed pass/fail line per criterion, nonzero exit on
// any failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <limits>
#include <cstdio>
#include <random>
#include <vector>

#include "ulelab/approx.hpp"
#include "ulelab/diagalg.hpp"
#include "ulelab/hull.hpp"
#include "ulelab/locreport.hpp"
#include "ulelab/rational.hpp"
#include "ulelab/sampling.hpp"
#include "ulelab/specops.hpp"

using namespace ulelab;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int criterion, const char* label, bool ok, double seconds, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s) [%.2f s]\n", ok ? "PASS" : "FAIL", criterion, label,
              detail.c_str(), seconds);
  if (!ok) ++failures;
}

sampling::DistalGenerator standard_gen() {
  return sampling::DistalGenerator(
      hull::FrequencyChain({2, 8, 512}, hull::GrowthPattern::parse("cube")), 2);
}

std::vector<double> distal_targets(int n, std::int64_t shift = 0) {
  sampling::DistalGenerator gen = standard_gen();
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = to_double(gen.value(i + shift, 3));
  return d;
}

// ---------------------------------------------------------------------------

void criterion_1_exact_distality() {
  Timer timer;
  sampling::DistalGenerator gen = standard_gen();
  sampling::DistalityReport rep = sampling::verify_distality(gen, 0, 512, 16);
  bool ok = rep.all_ok;
  // the floor must be exactly 2 / (3 max(k,2)^7)
  for (const auto& s : rep.separations) {
    BigInt base = std::max<std::int64_t>(s.k, 2);
    ok = ok && s.floor == Rational(2, 3 * pow_big(base, 7));
    ok = ok && s.certified >= s.floor;
  }
  double secs = timer.seconds();
  ok = ok && secs < 60.0;
  report(1, "exact distality of the generator sequence", ok, secs,
         "window [0,512), |k| <= 16, L = " + std::to_string(rep.layers_used));
}

void criterion_2_poeschel_distality() {
  Timer timer;
  sampling::DistalityReport rep = sampling::verify_poeschel_distality(0, 1024, 256);
  int violations = 0;
  for (const auto& s : rep.separations)
    if (!s.ok) ++violations;
  double secs = timer.seconds();
  bool ok = rep.all_ok && violations == 0 && secs < 30.0;
  report(2, "dyadic example separation floor 1/(16k)", ok, secs,
         "window [0,1024), |k| <= 256, violations = " + std::to_string(violations));
}

void criterion_3_uniform_approximation() {
  Timer timer;
  sampling::DistalGenerator gen = standard_gen();
  bool ok = true;
  std::string detail;
  for (int k = 1; k <= 3; ++k) {
    // ||d - d^{(k)}|| <= ||d^{(4)} - d^{(k)}|| + tail(4) <= tail(k), exact.
    Rational realized = 0;
    for (std::int64_t i = 0; i < 4096; ++i)
      realized = std::max(realized, ulelab::abs(gen.value(i, 4) - gen.value(i, k)));
    Rational lhs = realized + gen.tail_bound(4);
    Rational rhs = gen.tail_bound(k);
    ok = ok && lhs <= rhs;
    detail += "k=" + std::to_string(k) + (lhs <= rhs ? " ok " : " VIOLATED ");
  }
  report(3, "uniform approximation against the closed-form tail", ok, timer.seconds(), detail);
}

void criterion_4_approximation_closed_forms() {
  Timer timer;
  bool ok = true;
  std::string detail;

  approx::ApproximationFunction c = approx::ApproximationFunction::constant(3.0);
  double worst_rel = 0;
  for (int i = 0; i <= 20; ++i) {
    double t = 0.1 * std::pow(100.0, i / 20.0);
    double val = approx::h_upper(c, t) * std::pow(t, 4.0) / 3.0;
    worst_rel = std::max(worst_rel, std::abs(val - 256.0) / 256.0);
  }
  ok = ok && worst_rel <= 1e-6;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "const rel err %.2e; ", worst_rel);
  detail += buf;

  for (double r : {1.0, 3.0}) {
    approx::ApproximationFunction q = approx::ApproximationFunction::power_law(1.0, r, 0.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int npts = 0;
    for (int i = 0; i <= 20; ++i) {
      double t = 0.1 * std::pow(100.0, i / 20.0);
      double x = std::log(t), y = std::log(approx::h_upper(q, t));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++npts;
    }
    double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    bool slope_ok = std::abs(slope + 4.0 + r) <= 1e-3;
    ok = ok && slope_ok;
    std::snprintf(buf, sizeof(buf), "slope(r=%g) %.6f; ", r, slope);
    detail += buf;
  }
  report(4, "approximation-function closed forms", ok, timer.seconds(), detail);
}

void criterion_5_diag_product() {
  Timer timer;
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(-8, 8);

  auto random_banded = [&](int n) {
    diagalg::DiagMatrix m(n);
    for (int tries = 0; tries < 6; ++tries) {
      int k = pick(rng);
      if (m.has_diagonal(k)) continue;
      std::vector<double> diag(n - std::abs(k));
      for (double& v : diag) v = dist(rng);
      m.set_diagonal(k, std::move(diag));
    }
    return m;
  };
  auto dense_mul = [](const std::vector<std::vector<double>>& a,
                      const std::vector<std::vector<double>>& b) {
    size_t n = a.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
  };
  auto max_diff = [](const std::vector<std::vector<double>>& a,
                     const std::vector<std::vector<double>>& b) {
    double worst = 0;
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < a.size(); ++j)
        worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
    return worst;
  };

  double worst_pair = 0;
  for (int trial = 0; trial < 200; ++trial) {
    diagalg::DiagMatrix a = random_banded(64);
    diagalg::DiagMatrix b = random_banded(64);
    worst_pair = std::max(
        worst_pair,
        max_diff(diag_product(a, b).to_dense(), dense_mul(a.to_dense(), b.to_dense())));
  }
  double worst_assoc = 0;
  for (int trial = 0; trial < 50; ++trial) {
    diagalg::DiagMatrix x = random_banded(64);
    diagalg::DiagMatrix y = random_banded(64);
    diagalg::DiagMatrix z = random_banded(64);
    worst_assoc = std::max(
        worst_assoc, max_diff(diag_product(diag_product(x, y), z).to_dense(),
                              diag_product(x, diag_product(y, z)).to_dense()));
  }
  bool ok = worst_pair <= 1e-12 && worst_assoc <= 1e-12;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "pair err %.2e, assoc err %.2e", worst_pair, worst_assoc);
  report(5, "diagonal product lemma vs dense multiplication", ok, timer.seconds(), buf);
}

// Runs the dressing grid and checks convergence, independent re-matching and
// the deviation halving ratios; shared by the stated grid and the info run.
struct DressGridOutcome {
  bool ok = true;
  std::string detail;
};

DressGridOutcome dress_grid(const std::vector<double>& eps_grid, int n, int margin,
                            double tol) {
  std::vector<double> d = distal_targets(n);
  DressGridOutcome out;
  std::vector<double> deviations;
  for (double eps : eps_grid) {
    specops::DressedResult res = specops::construct_dressed_potential(d, eps, tol, 100, margin);
    char buf[96];
    if (!res.converged) {
      out.ok = false;
      std::snprintf(buf, sizeof(buf), "eps=%g NOT CONVERGED in %d; ", eps, res.iterations);
      out.detail += buf;
      deviations.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    // independent re-verification with a fresh decomposition
    specops::EigenSystem es = specops::eigensystem(
        specops::window_from_diagonal(res.p, eps, specops::WindowForm::Standard));
    std::vector<double> targets(n);
    for (int i = 0; i < n; ++i) targets[i] = d[i] / eps;
    specops::MatchReport match = specops::match_eigenvalues(es, targets, margin);
    out.ok = out.ok && res.iterations <= 100 && match.max_interior_mismatch <= tol;

    deviations.push_back(specops::dressed_deviation(res.p, d, eps, margin));
    std::snprintf(buf, sizeof(buf), "eps=%g iters=%d dev=%.3e; ", eps, res.iterations,
                  deviations.back());
    out.detail += buf;
  }
  for (size_t i = 0; i + 1 < deviations.size(); ++i) {
    double ratio = deviations[i] / deviations[i + 1];
    bool in_band = ratio >= 2.5 && ratio <= 6.0;
    out.ok = out.ok && in_band;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "ratio %.2f; ", ratio);
    out.detail += buf;
  }
  return out;
}

void criterion_6_dressed_potential() {
  Timer timer;
  DressGridOutcome stated = dress_grid({0.2, 0.1, 0.05}, 128, 16, 1e-8);
  double secs = timer.seconds();
  bool ok = stated.ok && secs < 300.0;
  report(6, "dressed potential: convergence and eps^2 scaling", ok, secs, stated.detail);
  if (!ok) {
    // The stated grid exceeds the finite-volume eps_0 of this configuration
    // (the solution branch terminates near eps = 0.085; see the dressing
    // feasibility analysis). The same checks on a feasible grid:
    DressGridOutcome feasible = dress_grid({0.08, 0.04, 0.02}, 128, 16, 1e-8);
    std::printf("       [info] feasible grid {0.08, 0.04, 0.02}: %s (%s)\n",
                feasible.ok ? "all checks pass" : "FAILS TOO", feasible.detail.c_str());
  }
}

void criterion_7_ule() {
  Timer timer;
  const int n = 128, margin = 16;
  bool ok = true;
  std::string detail;

  bool grid_converged = true;
  auto uniform_of = [&](double eps, const std::vector<double>& targets) {
    specops::DressedResult res =
        specops::construct_dressed_potential(targets, eps, 1e-8, 100, margin);
    if (!res.converged) grid_converged = false;
    specops::EigenSystem es = specops::eigensystem(
        specops::window_from_diagonal(res.p, eps, specops::WindowForm::Standard));
    return locreport::ule_report(es, 1e-12);
  };

  std::vector<double> d = distal_targets(n);
  double r005 = uniform_of(0.05, d).uniform_r;
  double r01 = uniform_of(0.1, d).uniform_r;
  double r02 = uniform_of(0.2, d).uniform_r;
  ok = grid_converged && r005 > r01 && r01 > r02;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "r(.05)=%.3f r(.1)=%.3f r(.2)=%.3f%s; ", r005, r01, r02,
                grid_converged ? "" : " (dressing not converged at .1/.2)");
  detail += buf;

  // Phase uniformity at finite volume: the window at phase T^t(e) equals the
  // window at phase e pushed t sites to the right, so the uniform constants
  // agree to rounding.
  sampling::DistalGenerator gen = standard_gen();
  sampling::LimitPeriodicSeries series = gen.to_series(3);
  hull::GroupElement e = hull::GroupElement::identity(series.chain());
  double worst = 0;
  for (std::int64_t t = 0; t <= 7; ++t) {
    hull::GroupElement g = hull::odometer_add(e, t);
    std::vector<double> via_phase(n), via_offset(n);
    for (int i = 0; i < n; ++i) {
      via_phase[i] = to_double(sampling::evaluate_at(series, g, i, 3));
      via_offset[i] = to_double(sampling::evaluate_at(series, e, i + t, 3));
    }
    locreport::ULEReport a = uniform_of(0.1, via_phase);
    locreport::ULEReport b = uniform_of(0.1, via_offset);
    worst = std::max({worst, std::abs(a.uniform_c - b.uniform_c),
                      std::abs(a.uniform_r - b.uniform_r)});
  }
  ok = ok && worst <= 1e-10;
  std::snprintf(buf, sizeof(buf), "phase constants diff %.2e", worst);
  detail += buf;
  report(7, "ULE monotonicity and phase uniformity", ok, timer.seconds(), detail);
  if (!ok) {
    // Monotonicity of the uniform rate on a grid inside the dressable regime.
    grid_converged = true;
    double r08 = uniform_of(0.08, d).uniform_r;
    double r04 = uniform_of(0.04, d).uniform_r;
    double r02f = uniform_of(0.02, d).uniform_r;
    bool mono = grid_converged && r02f > r04 && r04 > r08;
    std::printf("       [info] feasible grid: r(.02)=%.3f > r(.04)=%.3f > r(.08)=%.3f: %s\n",
                r02f, r04, r08, mono ? "holds" : "FAILS TOO");
  }
}

void criterion_8_dynamical_localization() {
  Timer timer;
  const int n = 128, margin = 16;
  std::vector<double> d = distal_targets(n);
  specops::DressedResult res = specops::construct_dressed_potential(d, 0.05, 1e-8, 100, margin);
  bool ok = res.converged;
  specops::EigenSystem es = specops::eigensystem(
      specops::window_from_diagonal(res.p, 0.05, specops::WindowForm::Standard));

  auto kernel = locreport::dynloc_kernel(es);
  for (int i = 0; i < n; ++i) ok = ok && std::abs(kernel[i][i] - 1.0) <= 1e-9;

  locreport::DynLocReport rep = locreport::dynloc_report(es, {0.0, 1.0, 10.0, 100.0}, 1e-12);
  ok = ok && rep.kernel_r > 0;
  // certified envelope: re-scan every above-floor entry
  double envelope_worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (kernel[i][j] <= 1e-12) continue;
      double bound = rep.kernel_c * std::exp(-rep.kernel_r * std::abs(i - j));
      envelope_worst = std::max(envelope_worst, kernel[i][j] / bound);
    }
  ok = ok && envelope_worst <= 1.0 + 1e-9;

  // dominance over a 64-window around the center
  double violation = 0;
  for (double t : {0.0, 1.0, 10.0, 100.0})
    for (int i = 32; i < 96; ++i)
      for (int j = 32; j < 96; ++j)
        violation =
            std::max(violation, locreport::evolution_amplitude(es, t, i, j) - kernel[i][j]);
  ok = ok && violation <= 1e-12;

  char buf[128];
  std::snprintf(buf, sizeof(buf), "kernel (C=%.3g, r=%.3f), envelope %.6f, violation %.2e",
                rep.kernel_c, rep.kernel_r, envelope_worst, violation);
  report(8, "uniform dynamical localization via the dominating kernel", ok, timer.seconds(),
         buf);
}

void criterion_9_conjugation() {
  Timer timer;
  const int n = 128;
  sampling::DistalGenerator gen = standard_gen();
  sampling::LimitPeriodicSeries series = gen.to_series(3);
  hull::GroupElement e = hull::GroupElement::identity(series.chain());

  specops::OperatorWindow w =
      specops::build_window(series, e, 0, n, 0.05, specops::WindowForm::Standard, 3);
  specops::EigenSystem es = specops::eigensystem(w);
  double scale = w.scale();

  diagalg::DiagMatrix h = diagalg::DiagMatrix::from_tridiagonal(w.diagonal, w.hopping);
  diagalg::DiagMatrix v = diagalg::DiagMatrix::from_columns(es.vectors);
  diagalg::DiagMatrix dm = diagalg::DiagMatrix::from_diagonal(es.eigenvalues);

  double resid = diagalg::conjugation_residual(h, v, dm);
  bool ok = resid <= 1e-9 * scale;

  double worst_shift = 0;
  for (int t : {1, 5}) {
    hull::GroupElement g = hull::odometer_add(e, t);
    specops::OperatorWindow ws =
        specops::build_window(series, g, 0, n, 0.05, specops::WindowForm::Standard, 3);
    diagalg::DiagMatrix hs = diagalg::DiagMatrix::from_tridiagonal(ws.diagonal, ws.hopping);
    worst_shift =
        std::max(worst_shift, diagalg::shift_covariance_residual(hs, v, dm, t, 16));
  }
  ok = ok && worst_shift <= 1e-9 * scale;

  char buf[96];
  std::snprintf(buf, sizeof(buf), "HV-VD %.2e, shifted %.2e, scale %.3g", resid, worst_shift,
                scale);
  report(9, "conjugation identity HV = VD and its translate", ok, timer.seconds(), buf);
}

void criterion_10_hull() {
  Timer timer;
  bool ok = true;

  ok = ok && hull::condition_A(hull::FrequencyChain({2, 4, 8, 16})).m_min == 2;
  ok = ok && hull::condition_A(hull::FrequencyChain({2, 8, 512})).m_min == 3;
  ok = ok && hull::condition_A(hull::FrequencyChain({2, std::int64_t(1) << 62})).m_min == 62;

  using hull::GrowthPattern;
  using hull::IsoVerdict;
  hull::FrequencyChain p2({2, 4, 8}, GrowthPattern::parse("powers"));
  hull::FrequencyChain p4({4, 16, 64}, GrowthPattern::parse("powers"));
  hull::FrequencyChain p3({3, 9, 27}, GrowthPattern::parse("powers"));
  hull::FrequencyChain p6({6, 12, 24}, GrowthPattern::ratio(2));
  ok = ok && hull::hulls_isomorphic(p2, p4, 16).verdict == IsoVerdict::Isomorphic;
  ok = ok && hull::hulls_isomorphic(p2, p3, 16).verdict == IsoVerdict::NotIsomorphic;
  ok = ok && hull::hulls_isomorphic(p2, p6, 16).verdict == IsoVerdict::NotIsomorphic;

  ok = ok && hull::maximalize(hull::FrequencyChain({6, 36}), 4).elements() ==
                 std::vector<std::int64_t>{2, 6, 12, 36};
  ok = ok && hull::maximalize(hull::FrequencyChain({8}), 3).elements() ==
                 std::vector<std::int64_t>{2, 4, 8};

  // exhaustive group action over k in [-1024, 1024]
  hull::FrequencyChain fc({2, 8, 512});
  hull::GroupElement e = hull::GroupElement::identity(fc);
  bool action_ok = true;
  for (std::int64_t a = -1024; a <= 1024 && action_ok; ++a) {
    hull::GroupElement ga = hull::odometer_add(e, a);
    for (std::int64_t b = -1024; b <= 1024; ++b) {
      if (!(hull::odometer_add(ga, b) == hull::odometer_add(e, a + b))) {
        action_ok = false;
        break;
      }
    }
  }
  ok = ok && action_ok;
  report(10, "hull predicates and exhaustive odometer action", ok, timer.seconds(),
         action_ok ? "4198401 pairs checked" : "group action violated");
}

}  // namespace

int main() {
  criterion_1_exact_distality();
  criterion_2_poeschel_distality();
  criterion_3_uniform_approximation();
  criterion_4_approximation_closed_forms();
  criterion_5_diag_product();
  criterion_6_dressed_potential();
  criterion_7_ule();
  criterion_8_dynamical_localization();
  criterion_9_conjugation();
  criterion_10_hull();

  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return 1;
}
