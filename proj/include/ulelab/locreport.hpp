#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "ulelab/specops.hpp"

// ULE detection: per-eigenvector decay fits with certified uniform constants,
// and the time-uniform dominating kernel for dynamical localization.
namespace ulelab::locreport {

// A vector supported on a single site above the floor decays faster than
// anything measurable there; the cap keeps the uniform minimum well-defined.
inline constexpr double kRateCap = 50.0;

// Index of the largest |u(n)|, leftmost on an exact tie.
int localization_center(const std::vector<double>& u);

struct DecayFit {
  double c = 0;
  double r = 0;
  bool capped = false;   // too few off-center entries above the floor
  int points_used = 0;
};

// Least-squares line through (|n - center|, log|u(n)|) over entries above the
// floor; r is minus the slope and c is the smallest constant making
// |u(n)| <= c e^{-r |n - center|} hold at every site above the floor (a
// certified envelope, not the regression intercept).
DecayFit fit_decay(const std::vector<double>& u, int center, double floor);

struct ULEReport {
  struct PerVector {
    int center = 0;
    double c = 0;
    double r = 0;
    bool capped = false;
  };
  std::vector<PerVector> per_vector;
  double uniform_c = 0;  // certified envelope constant for the uniform pair
  double uniform_r = 0;  // min over non-capped per-vector rates
  double floor = 0;
  int rate_capped_count = 0;
  std::int64_t window_offset = 0;
  int window_size = 0;

  nlohmann::json to_json() const;  // {"uniform_c","uniform_r","floor","per_vector":[...]}
};

// Fits every eigenvector and certifies the uniform pair: with (c, r) as
// reported, |u_k(n)| <= c e^{-r |n - m_k|} at every site above the floor.
ULEReport ule_report(const specops::EigenSystem& e, double floor);

// Independent re-scan of the certified envelope; returns the largest ratio
// |u_k(n)| / (c e^{-r |n-m_k|}) over sites above the floor (<= 1 + 1e-9 when
// the report is sound).
double verify_ule_envelope(const specops::EigenSystem& e, const ULEReport& rep);

// A(n, m) = sum_k |u_k(n)| |u_k(m)|; dominates |<delta_n, e^{-itH} delta_m>|
// for every t, so an exponential bound on A certifies the sup over t.
std::vector<std::vector<double>> dynloc_kernel(const specops::EigenSystem& e);

struct DynLocReport {
  double kernel_c = 0;  // certified envelope constant for the kernel
  double kernel_r = 0;  // fitted decay rate of the kernel
  double max_violation = 0;  // worst (amplitude - A) over the sampled times
  std::vector<double> times;
  double floor = 0;

  nlohmann::json to_json() const;
};

// Kernel fit plus time-sampled dominance spot-checks over all (n, m).
DynLocReport dynloc_report(const specops::EigenSystem& e, const std::vector<double>& times,
                           double floor);

// |sum_k e^{-i t lambda_k} u_k(n) u_k(m)| through the spectral decomposition.
double evolution_amplitude(const specops::EigenSystem& e, double t, int n, int m);

}  // namespace ulelab::locreport
