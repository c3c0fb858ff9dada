#include "ulelab/locreport.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace ulelab::locreport {

int localization_center(const std::vector<double>& u) {
  if (u.empty()) throw std::invalid_argument("empty vector");
  int best = 0;
  bool nonzero = u[0] != 0.0;
  for (int i = 1; i < static_cast<int>(u.size()); ++i) {
    nonzero = nonzero || u[i] != 0.0;
    if (std::abs(u[i]) > std::abs(u[best])) best = i;
  }
  if (!nonzero) throw std::invalid_argument("zero vector has no localization center");
  return best;
}

DecayFit fit_decay(const std::vector<double>& u, int center, double floor) {
  if (center < 0 || center >= static_cast<int>(u.size()))
    throw std::invalid_argument("center out of range");
  if (!(floor > 0)) throw std::invalid_argument("floor must be positive");

  int off_center = 0;
  for (int n = 0; n < static_cast<int>(u.size()); ++n)
    if (n != center && std::abs(u[n]) > floor) ++off_center;

  DecayFit fit;
  if (off_center < 3) {
    fit.capped = true;
    fit.r = kRateCap;
    fit.c = std::abs(u[center]);
    fit.points_used = off_center;
    return fit;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npts = 0;
  for (int n = 0; n < static_cast<int>(u.size()); ++n) {
    double a = std::abs(u[n]);
    if (a <= floor) continue;
    double x = std::abs(n - center);
    double y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++npts;
  }
  double det = npts * sxx - sx * sx;
  double slope = (npts * sxy - sx * sy) / det;
  fit.r = -slope;
  fit.points_used = npts;

  // Certified envelope: the smallest c for which the bound holds at every
  // site above the floor.
  double c = 0;
  for (int n = 0; n < static_cast<int>(u.size()); ++n) {
    double a = std::abs(u[n]);
    if (a <= floor) continue;
    c = std::max(c, a * std::exp(fit.r * std::abs(n - center)));
  }
  fit.c = c;
  return fit;
}

ULEReport ule_report(const specops::EigenSystem& e, double floor) {
  if (e.size() == 0) throw std::invalid_argument("empty eigensystem");
  ULEReport rep;
  rep.floor = floor;
  rep.window_offset = e.offset;
  rep.window_size = e.size();

  double r_min = kRateCap;
  bool any_uncapped = false;
  for (int k = 0; k < e.size(); ++k) {
    DecayFit fit = fit_decay(e.vectors[k], e.centers[k], floor);
    rep.per_vector.push_back({e.centers[k], fit.c, fit.r, fit.capped});
    if (fit.capped) {
      ++rep.rate_capped_count;
    } else {
      any_uncapped = true;
      r_min = std::min(r_min, fit.r);
    }
  }
  rep.uniform_r = any_uncapped ? r_min : kRateCap;

  // Envelope constant for the uniform rate, certified across all vectors.
  double c = 0;
  for (int k = 0; k < e.size(); ++k) {
    const auto& u = e.vectors[k];
    for (int n = 0; n < e.size(); ++n) {
      double a = std::abs(u[n]);
      if (a <= floor) continue;
      c = std::max(c, a * std::exp(rep.uniform_r * std::abs(n - e.centers[k])));
    }
  }
  rep.uniform_c = c;
  return rep;
}

double verify_ule_envelope(const specops::EigenSystem& e, const ULEReport& rep) {
  double worst = 0;
  for (int k = 0; k < e.size(); ++k) {
    const auto& u = e.vectors[k];
    for (int n = 0; n < e.size(); ++n) {
      double a = std::abs(u[n]);
      if (a <= rep.floor) continue;
      double bound = rep.uniform_c * std::exp(-rep.uniform_r * std::abs(n - rep.per_vector[k].center));
      worst = std::max(worst, a / bound);
    }
  }
  return worst;
}

std::vector<std::vector<double>> dynloc_kernel(const specops::EigenSystem& e) {
  int n = e.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (int k = 0; k < n; ++k) {
    const auto& u = e.vectors[k];
    for (int i = 0; i < n; ++i) {
      double ui = std::abs(u[i]);
      if (ui == 0.0) continue;
      for (int j = i; j < n; ++j) a[i][j] += ui * std::abs(u[j]);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) a[i][j] = a[j][i];
  return a;
}

nlohmann::json ULEReport::to_json() const {
  nlohmann::json pv = nlohmann::json::array();
  for (const auto& v : per_vector)
    pv.push_back({{"center", v.center}, {"c", v.c}, {"r", v.r}, {"capped", v.capped}});
  return {{"uniform_c", uniform_c},
          {"uniform_r", uniform_r},
          {"floor", floor},
          {"per_vector", pv},
          {"rate_capped_count", rate_capped_count},
          {"window_offset", window_offset},
          {"window_size", window_size}};
}

nlohmann::json DynLocReport::to_json() const {
  return {{"kernel_C", kernel_c},
          {"kernel_r", kernel_r},
          {"max_violation", max_violation},
          {"times", times},
          {"floor", floor}};
}

DynLocReport dynloc_report(const specops::EigenSystem& e, const std::vector<double>& times,
                           double floor) {
  DynLocReport rep;
  rep.times = times;
  rep.floor = floor;
  auto kernel = dynloc_kernel(e);
  int n = e.size();

  // Least-squares rate over off-diagonal entries above the floor, then the
  // certified envelope constant for that rate.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npts = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (kernel[i][j] <= floor) continue;
      double x = std::abs(i - j);
      double y = std::log(kernel[i][j]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++npts;
    }
  if (npts >= 3 && npts * sxx - sx * sx > 0) {
    rep.kernel_r = -(npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    double c = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (kernel[i][j] <= floor) continue;
        c = std::max(c, kernel[i][j] * std::exp(rep.kernel_r * std::abs(i - j)));
      }
    rep.kernel_c = c;
  }

  double worst = 0;
  for (double t : times)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        worst = std::max(worst, evolution_amplitude(e, t, i, j) - kernel[i][j]);
  rep.max_violation = worst;
  return rep;
}

double evolution_amplitude(const specops::EigenSystem& e, double t, int n, int m) {
  if (n < 0 || n >= e.size() || m < 0 || m >= e.size())
    throw std::invalid_argument("site index out of range");
  std::complex<double> acc = 0;
  for (int k = 0; k < e.size(); ++k) {
    std::complex<double> phase(0.0, -t * e.eigenvalues[k]);
    acc += std::exp(phase) * e.vectors[k][n] * e.vectors[k][m];
  }
  return std::abs(acc);
}

}  // namespace ulelab::locreport
