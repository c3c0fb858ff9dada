#include "ulelab/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ulelab::approx {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ApproximationFunction ApproximationFunction::constant(double c) {
  if (!(c >= 1)) throw std::invalid_argument("constant Q must be >= 1");
  ApproximationFunction f;
  f.kind_ = QKind::Constant;
  f.beta_ = c;
  return f;
}

ApproximationFunction ApproximationFunction::power_law(double beta, double r, double x0) {
  if (!(beta > 0) || !(r >= 0) || !(x0 >= 0))
    throw std::invalid_argument("power law needs beta > 0, r >= 0, x0 >= 0");
  if (x0 > 0 && beta * std::pow(x0, r) < 1)
    throw std::invalid_argument("power-law floor must be >= 1");
  ApproximationFunction f;
  f.kind_ = QKind::PowerLaw;
  f.beta_ = beta;
  f.r_ = r;
  f.x0_ = x0;
  return f;
}

ApproximationFunction ApproximationFunction::tabulated(std::vector<double> x,
                                                       std::vector<double> q) {
  if (x.empty() || x.size() != q.size())
    throw std::invalid_argument("tabulated Q needs matching nonempty grids");
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0) || !(q[i] >= 1))
      throw std::invalid_argument("tabulated Q needs x >= 0 and Q >= 1");
    if (i > 0 && x[i] <= x[i - 1])
      throw std::invalid_argument("tabulated grid must be strictly increasing");
  }
  ApproximationFunction f;
  f.kind_ = QKind::Tabulated;
  f.grid_x_ = std::move(x);
  f.grid_q_ = std::move(q);
  return f;
}

ApproximationFunction ApproximationFunction::lemma_distal(std::int64_t n1, int m) {
  if (n1 < 2 || m < 2) throw std::invalid_argument("lemma Q needs n1 >= 2, m >= 2");
  return power_law(1.5, 3.0 * m + 1.0, static_cast<double>(n1));
}

double ApproximationFunction::value(double x) const {
  if (!(x >= 0)) throw std::invalid_argument("Q is defined on [0, inf)");
  switch (kind_) {
    case QKind::Constant:
      return beta_;
    case QKind::PowerLaw:
      return beta_ * std::pow(std::max(x, x0_), r_);
    case QKind::Tabulated: {
      // Step interpolation from the left is enough for grid evaluations.
      auto it = std::upper_bound(grid_x_.begin(), grid_x_.end(), x);
      size_t idx = it == grid_x_.begin() ? 0 : static_cast<size_t>(it - grid_x_.begin()) - 1;
      return grid_q_[idx];
    }
  }
  return beta_;
}

double q_of(const ApproximationFunction& Q, double t) {
  if (!(t > 0)) throw std::invalid_argument("q(t) needs t > 0");
  double t4 = std::pow(t, -4.0);
  switch (Q.kind()) {
    case QKind::Constant:
      return Q.beta() * t4;  // supremum sits at x = 0
    case QKind::PowerLaw: {
      double r = Q.exponent();
      if (r == 0) return Q.beta() * t4;
      double floor_value = Q.x0() > 0 ? Q.beta() * std::pow(Q.x0(), r) : 0.0;
      double xstar = std::max(Q.x0(), r / t);
      double branch = Q.beta() * std::pow(xstar, r) * std::exp(-t * xstar);
      return std::max(floor_value, branch) * t4;
    }
    case QKind::Tabulated: {
      double best = -kInf;
      size_t arg = 0;
      for (size_t i = 0; i < Q.grid_x().size(); ++i) {
        double v = Q.grid_q()[i] * std::exp(-t * Q.grid_x()[i]);
        if (v > best) {
          best = v;
          arg = i;
        }
      }
      // A weighted maximum on the table's far edge leaves the supremum over
      // [0, inf) unbracketed.
      if (arg + 1 == Q.grid_x().size() && Q.grid_x().size() > 1) return kInf;
      return best * t4;
    }
  }
  return kInf;
}

KappaSchedule KappaSchedule::geometric(double ratio) {
  if (!(ratio > 0) || !(ratio < 1))
    throw std::invalid_argument("schedule ratio must lie in (0,1)");
  return KappaSchedule{ratio};
}

double KappaSchedule::t_i(double t, int i) const {
  return t * (1.0 - ratio) * std::pow(ratio, i);
}

double h_upper(const ApproximationFunction& Q, double t, const KappaSchedule& schedule,
               double weight_cut) {
  if (!(t > 0)) throw std::invalid_argument("h(t) needs t > 0");
  if (!(schedule.ratio > 0) || !(schedule.ratio < 1))
    throw std::invalid_argument("schedule violates the admissibility constraints");
  if (!(weight_cut > 0) || !(weight_cut < 1))
    throw std::invalid_argument("weight_cut must lie in (0,1)");

  double log_sum = 0;
  int I = 0;
  for (int i = 0;; ++i) {
    double q = q_of(Q, schedule.t_i(t, i));
    if (!std::isfinite(q)) return kInf;
    log_sum += std::ldexp(std::log(q), -(i + 1));  // weight 2^{-i-1}
    I = i;
    if (std::ldexp(1.0, -(i + 1)) < weight_cut) break;
  }

  // Analytic bound on the dropped log-tail. Each kind satisfies
  // q(s) <= s^{-4} (F + B s^{-r}), so for s <= t,
  // log q(s) <= log(F t^r + B) - (4+r) log s, and the weighted sums over
  // i > I have closed forms. Exact for Constant and for PowerLaw with x0 = 0.
  double F = 0, B = 0, r = 0;
  switch (Q.kind()) {
    case QKind::Constant:
      F = Q.beta();
      break;
    case QKind::PowerLaw:
      r = Q.exponent();
      if (r == 0) {
        F = Q.beta();
        r = 0;
      } else {
        F = Q.x0() > 0 ? Q.beta() * std::pow(Q.x0(), r) : 0.0;
        B = Q.beta() * std::pow(r, r) * std::exp(-r);
      }
      break;
    case QKind::Tabulated:
      F = *std::max_element(Q.grid_q().begin(), Q.grid_q().end());
      break;
  }
  double K = std::log(F * std::pow(t, r) + B);
  double mass = std::ldexp(1.0, -(I + 1));             // sum_{i>I} 2^{-i-1}
  double imass = (I + 2) * std::ldexp(1.0, -(I + 1));  // sum_{i>I} i 2^{-i-1}
  double tail = K * mass -
                (4.0 + r) * (std::log(t * (1.0 - schedule.ratio)) * mass +
                             std::log(schedule.ratio) * imass);
  return std::exp(log_sum + tail);
}

double h_upper_refined(const ApproximationFunction& Q, double t, double weight_cut) {
  double best = kInf;
  for (double a : {0.38, 0.44, 0.5, 0.56, 0.62})
    best = std::min(best, h_upper(Q, t, KappaSchedule::geometric(a), weight_cut));
  return best;
}

bool is_approximation_function(const ApproximationFunction& Q,
                               const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("nonempty t grid required");
  for (double t : t_grid) {
    if (!std::isfinite(q_of(Q, t))) return false;
    if (!std::isfinite(h_upper(Q, t))) return false;
  }
  return true;
}

}  // namespace ulelab::approx
