#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ulelab/hull.hpp"
#include "ulelab/rational.hpp"

// Limit-periodic sequences as layered periodic sums: the distal generator
// with exact rational evaluation, the dyadic example sequence, and sampling
// of V_omega(n) at any hull element.
namespace ulelab::sampling {

// i mod n normalized to [0, n), also for negative i.
std::int64_t a_v(std::int64_t i, std::int64_t n_v);
BigInt a_v_big(std::int64_t i, const BigInt& n_v);

// One periodic summand p_j; the value at i depends only on i mod period.
struct PeriodicLayer {
  std::int64_t period = 1;
  std::vector<Rational> values;  // indexed by residue 0..period-1

  PeriodicLayer() = default;
  PeriodicLayer(std::int64_t period_, std::vector<Rational> values_);
  const Rational& at(std::int64_t i) const { return values[a_v(i, period)]; }
  Rational sup_norm() const;
};

// d = sum of layers with successively dividing periods, plus a closed-form
// bound on everything omitted after k layers.
class LimitPeriodicSeries {
 public:
  LimitPeriodicSeries(std::vector<PeriodicLayer> layers, hull::FrequencyChain chain,
                      std::function<Rational(int)> tail_bound_fn);

  int depth() const { return static_cast<int>(layers_.size()); }
  const hull::FrequencyChain& chain() const { return chain_; }
  const PeriodicLayer& layer(int j) const;  // 1-based, matching n_j
  Rational tail_bound(int k) const;         // sup-norm bound on the tail past layer k
  // d^{(k)}_n, i.e. the value at the identity element.
  Rational value_at_identity(std::int64_t n, int k_layers) const;

 private:
  std::vector<PeriodicLayer> layers_;
  hull::FrequencyChain chain_;
  std::function<Rational(int)> tail_bound_;
};

// Sum of the first k_layers layers sampled at the hull element g:
// sum_j p_j((n + r_j) mod n_j). For g = T^t(e) this is d^{(k)}_{n+t} exactly.
Rational evaluate_at(const LimitPeriodicSeries& series, const hull::GroupElement& g,
                     std::int64_t n, int k_layers);

// Exact finite-level Haar projection: layers past level k are averaged over
// their residue classes mod n_k and folded into one n_k-periodic layer.
PeriodicLayer haar_average(const LimitPeriodicSeries& series, int k);

// Wraps a single layer as a one-layer series (tail identically zero).
LimitPeriodicSeries series_of_layer(PeriodicLayer layer);

struct SeparationRecord {
  std::int64_t k = 0;          // separation examined (both signs folded in)
  Rational min_gap;            // min over the window of |d^{(L)}_i - d^{(L)}_{i+k}|
  Rational certified;          // min_gap - 2 * tail_bound(L): lower bound for the full d
  Rational floor;              // required separation floor
  std::int64_t argmin_i = 0;   // where the minimum was attained
  int argmin_sign = +1;
  bool ok = false;             // certified >= floor
};

struct DistalityReport {
  std::vector<SeparationRecord> separations;
  int layers_used = 0;
  bool all_ok = false;
  // Smallest certified/floor ratio over all separations (the worst margin).
  Rational worst_margin_num, worst_margin_den;
};

// Generator of the layered sequence d_i = sum_v a_v(i) / (n_{v-1}^2 n_v) over
// a chain with n_0 = 1 prepended and n_k^3 <= n_{k+1} <= n_k^{3m}.
class DistalGenerator {
 public:
  DistalGenerator(hull::FrequencyChain chain, int m, bool exact = true);

  const hull::FrequencyChain& chain() const { return chain_; }
  int m() const { return m_; }
  bool exact() const { return exact_; }

  // n_v with n_0 = 1; extension steps past the stored prefix are re-checked
  // against the growth bracket.
  BigInt n(int v) const;

  // Partial sum d^{(k)}_i, exact.
  Rational value(std::int64_t i, int k_layers) const;
  // Floating partial sum; carries no distality guarantee.
  double value_f(std::int64_t i, int k_layers) const;

  // Closed-form bound on sup_i |d_i - d^{(k)}_i|: the tail sum_{v>k} n_{v-1}^{-2}
  // dominated geometrically, n_k^{-2} / (1 - n_k^{-4}).
  Rational tail_bound(int k) const;

  // Q(k)^{-1}: 2/(3 n_1^{3m+1}) below n_1, else 2/(3 k^{3m+1}).
  Rational distality_floor(std::int64_t k_dist) const;

  // Tabulates the first `depth` layers (throws if a period is too large to
  // tabulate); the series' tail bound is this generator's closed form.
  LimitPeriodicSeries to_series(int depth) const;

 private:
  hull::FrequencyChain chain_;
  int m_;
  bool exact_;
};

// Exact-rational scan certifying min_i |d_i - d_{i+k}| >= floor(k) for all
// 0 < |k| <= max_separation, with i over [window_begin, window_end). The
// truncation level L is taken large enough that 2 * tail_bound(L) is below a
// tenth of the smallest floor, and the certified gap subtracts that tail.
DistalityReport verify_distality(const DistalGenerator& gen, std::int64_t window_begin,
                                 std::int64_t window_end, std::int64_t max_separation);

// Greedy sub-chain extraction: starting from the first element > 1, always
// pick the smallest chain element in [cur^3, cur^{3m}]. The result carries a
// cube pattern when that is provably how the greedy choice continues.
hull::FrequencyChain extract_distal_subchain(const hull::FrequencyChain& chain, int m, int depth);

// Characteristic function alpha_v: for v even, 1 iff i mod 2^v in [0, 2^{v-1});
// for v odd, 1 iff i mod 2^v in [2^{v-1}, 2^v).
int poeschel_alpha(int v, std::int64_t i);

// Partial sum sum_{v=1..depth} alpha_v(i) 2^{-v}; exact dyadic.
Rational poeschel_value(std::int64_t i, int depth);

// The full series: past the level where 2^{v-1} > |i| the pattern is decided
// by the sign of i alone, so the remainder is an exact geometric sum.
Rational poeschel_value_limit(std::int64_t i);

struct PoeschelExample {
  int depth = 1;  // layers retained when tabulating

  explicit PoeschelExample(int depth_);
  LimitPeriodicSeries to_series() const;
  static Rational distality_floor(std::int64_t k);  // 1/(16 |k|)
};

// Scan of the full (limit) sequence: |d_i - d_{i+k}| >= 1/(16 |k|) for all
// 0 < |k| <= max_separation, i in the window. Values are exact limits, so no
// tail correction is needed.
DistalityReport verify_poeschel_distality(std::int64_t window_begin, std::int64_t window_end,
                                          std::int64_t max_separation);

}  // namespace ulelab::sampling
