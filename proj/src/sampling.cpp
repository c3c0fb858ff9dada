#include "ulelab/sampling.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace ulelab::sampling {

namespace {
constexpr std::int64_t kMaxTablePeriod = 1 << 21;  // tabulation cutoff
}

std::int64_t a_v(std::int64_t i, std::int64_t n_v) {
  if (n_v < 1) throw std::invalid_argument("a_v: period must be positive");
  std::int64_t r = i % n_v;
  return r < 0 ? r + n_v : r;
}

BigInt a_v_big(std::int64_t i, const BigInt& n_v) {
  if (n_v < 1) throw std::invalid_argument("a_v: period must be positive");
  BigInt r = BigInt(i) % n_v;
  return r < 0 ? r + n_v : r;
}

PeriodicLayer::PeriodicLayer(std::int64_t period_, std::vector<Rational> values_)
    : period(period_), values(std::move(values_)) {
  if (period < 1) throw std::invalid_argument("layer period must be positive");
  if (static_cast<std::int64_t>(values.size()) != period)
    throw std::invalid_argument("layer needs one value per residue");
}

Rational PeriodicLayer::sup_norm() const {
  Rational m = 0;
  for (const auto& v : values) m = std::max(m, ulelab::abs(v));
  return m;
}

LimitPeriodicSeries::LimitPeriodicSeries(std::vector<PeriodicLayer> layers,
                                         hull::FrequencyChain chain,
                                         std::function<Rational(int)> tail_bound_fn)
    : layers_(std::move(layers)), chain_(std::move(chain)), tail_bound_(std::move(tail_bound_fn)) {
  if (layers_.empty()) throw std::invalid_argument("series needs at least one layer");
  if (chain_.depth() < depth())
    throw std::invalid_argument("period chain shorter than layer list");
  for (int j = 0; j < depth(); ++j) {
    if (BigInt(layers_[j].period) != chain_.element_at(j + 1))
      throw std::invalid_argument("layer period disagrees with the chain");
  }
  if (!tail_bound_) tail_bound_ = [](int) { return Rational(0); };
  // Each layer must sit under the declared envelope for the preceding cut.
  for (int j = 2; j <= depth(); ++j) {
    Rational env = tail_bound_(j - 1);
    if (env > 0 && layers_[j - 1].sup_norm() > env)
      throw std::invalid_argument("layer " + std::to_string(j) +
                                  " exceeds the declared tail envelope");
  }
}

const PeriodicLayer& LimitPeriodicSeries::layer(int j) const {
  if (j < 1 || j > depth()) throw std::invalid_argument("layer index out of range");
  return layers_[j - 1];
}

Rational LimitPeriodicSeries::tail_bound(int k) const {
  if (k < 1) throw std::invalid_argument("tail_bound: k >= 1 required");
  return tail_bound_(k);
}

Rational LimitPeriodicSeries::value_at_identity(std::int64_t n, int k_layers) const {
  if (k_layers < 1 || k_layers > depth())
    throw std::invalid_argument("k_layers out of range");
  Rational s = 0;
  for (int j = 1; j <= k_layers; ++j) s += layers_[j - 1].at(n);
  return s;
}

Rational evaluate_at(const LimitPeriodicSeries& series, const hull::GroupElement& g,
                     std::int64_t n, int k_layers) {
  if (k_layers < 1 || k_layers > series.depth())
    throw std::invalid_argument("k_layers out of range");
  if (g.chain().depth() < k_layers)
    throw std::invalid_argument("group element shallower than requested layers");
  for (int j = 1; j <= k_layers; ++j)
    if (BigInt(g.chain().elements()[j - 1]) != series.chain().element_at(j))
      throw std::invalid_argument("group element chain does not match the series");
  Rational s = 0;
  for (int j = 1; j <= k_layers; ++j)
    s += series.layer(j).at(n + g.residues()[j - 1]);
  return s;
}

PeriodicLayer haar_average(const LimitPeriodicSeries& series, int k) {
  if (k < 1 || k > series.depth()) throw std::invalid_argument("level out of range");
  std::int64_t n_k = series.layer(k).period;
  std::vector<Rational> out(n_k, Rational(0));
  for (std::int64_t i = 0; i < n_k; ++i)
    for (int j = 1; j <= k; ++j) out[i] += series.layer(j).at(i);
  for (int j = k + 1; j <= series.depth(); ++j) {
    const PeriodicLayer& p = series.layer(j);
    std::int64_t classes = p.period / n_k;
    for (std::int64_t i = 0; i < n_k; ++i) {
      Rational acc = 0;
      for (std::int64_t c = 0; c < classes; ++c) acc += p.values[i + c * n_k];
      out[i] += acc / classes;
    }
  }
  return PeriodicLayer(n_k, std::move(out));
}

LimitPeriodicSeries series_of_layer(PeriodicLayer layer) {
  hull::FrequencyChain chain({layer.period});
  return LimitPeriodicSeries({std::move(layer)}, std::move(chain),
                             [](int) { return Rational(0); });
}

DistalGenerator::DistalGenerator(hull::FrequencyChain chain, int m, bool exact)
    : chain_(std::move(chain)), m_(m), exact_(exact) {
  if (m_ < 2) throw std::invalid_argument("distal generator needs m >= 2");
  const auto& e = chain_.elements();
  if (e.front() <= 1) throw std::invalid_argument("distal generator needs n_1 > 1");
  for (size_t k = 0; k + 1 < e.size(); ++k) {
    BigInt lo = pow_big(BigInt(e[k]), 3);
    BigInt hi = pow_big(BigInt(e[k]), 3u * static_cast<unsigned>(m_));
    if (BigInt(e[k + 1]) < lo || BigInt(e[k + 1]) > hi)
      throw std::invalid_argument("chain violates n_k^3 <= n_{k+1} <= n_k^{3m}");
  }
}

BigInt DistalGenerator::n(int v) const {
  if (v < 0) throw std::invalid_argument("layer index must be nonnegative");
  if (v == 0) return 1;
  BigInt nv = chain_.element_at(v);
  if (v > chain_.depth()) {
    BigInt prev = chain_.element_at(v - 1);
    if (nv < pow_big(prev, 3) || nv > pow_big(prev, 3u * static_cast<unsigned>(m_)))
      throw std::invalid_argument("pattern extension violates the growth bracket");
  }
  return nv;
}

Rational DistalGenerator::value(std::int64_t i, int k_layers) const {
  if (k_layers < 0) throw std::invalid_argument("k_layers must be nonnegative");
  Rational s = 0;
  BigInt prev = 1;
  for (int v = 1; v <= k_layers; ++v) {
    BigInt nv = n(v);
    s += Rational(a_v_big(i, nv), prev * prev * nv);
    prev = nv;
  }
  return s;
}

double DistalGenerator::value_f(std::int64_t i, int k_layers) const {
  double s = 0;
  double prev = 1;
  for (int v = 1; v <= k_layers; ++v) {
    double nv = n(v).convert_to<double>();
    s += a_v_big(i, n(v)).convert_to<double>() / (prev * prev * nv);
    prev = nv;
  }
  return s;
}

Rational DistalGenerator::tail_bound(int k) const {
  if (k < 1) throw std::invalid_argument("tail_bound: k >= 1 required");
  BigInt nk = n(k);
  BigInt nk2 = nk * nk;
  return Rational(nk2, nk2 * nk2 - 1);
}

Rational DistalGenerator::distality_floor(std::int64_t k_dist) const {
  if (k_dist < 1) throw std::invalid_argument("distality_floor: k >= 1 required");
  BigInt base = k_dist < chain_.elements().front() ? BigInt(chain_.elements().front())
                                                   : BigInt(k_dist);
  return Rational(2, 3 * pow_big(base, static_cast<unsigned>(3 * m_ + 1)));
}

LimitPeriodicSeries DistalGenerator::to_series(int depth) const {
  if (depth < 1) throw std::invalid_argument("series depth must be positive");
  std::vector<PeriodicLayer> layers;
  BigInt prev = 1;
  for (int v = 1; v <= depth; ++v) {
    BigInt nv = n(v);
    if (nv > kMaxTablePeriod)
      throw std::overflow_error("layer period too large to tabulate");
    std::int64_t period = nv.convert_to<std::int64_t>();
    BigInt den = prev * prev * nv;
    std::vector<Rational> vals(period);
    for (std::int64_t i = 0; i < period; ++i) vals[i] = Rational(i, den);
    layers.emplace_back(period, std::move(vals));
    prev = nv;
  }
  std::vector<std::int64_t> chain_elems;
  for (int v = 1; v <= depth; ++v) chain_elems.push_back(layers[v - 1].period);
  hull::FrequencyChain chain(chain_elems, chain_.pattern());
  DistalGenerator self = *this;
  return LimitPeriodicSeries(std::move(layers), std::move(chain),
                             [self](int k) { return self.tail_bound(k); });
}

DistalityReport verify_distality(const DistalGenerator& gen, std::int64_t window_begin,
                                 std::int64_t window_end, std::int64_t max_separation) {
  if (!gen.exact())
    throw std::invalid_argument("distality verification requires the exact-rational mode");
  if (window_end <= window_begin) throw std::invalid_argument("empty window");
  if (max_separation < 1) throw std::invalid_argument("max separation must be >= 1");

  // One truncation level good for every separation: the smallest floor is the
  // binding one.
  Rational floor_min = gen.distality_floor(max_separation);
  for (std::int64_t k = 1; k <= max_separation; ++k)
    floor_min = std::min(floor_min, gen.distality_floor(k));
  int L = 1;
  while (2 * gen.tail_bound(L) * 10 >= floor_min) ++L;

  std::int64_t lo = window_begin - max_separation;
  std::int64_t hi = window_end + max_separation;
  std::vector<Rational> d(static_cast<size_t>(hi - lo));
  for (std::int64_t i = lo; i < hi; ++i) d[static_cast<size_t>(i - lo)] = gen.value(i, L);

  Rational two_tail = 2 * gen.tail_bound(L);
  DistalityReport report;
  report.layers_used = L;
  report.all_ok = true;
  Rational worst_ratio(-1);
  for (std::int64_t k = 1; k <= max_separation; ++k) {
    SeparationRecord rec;
    rec.k = k;
    rec.floor = gen.distality_floor(k);
    bool first = true;
    for (std::int64_t i = window_begin; i < window_end; ++i) {
      for (int sign : {+1, -1}) {
        Rational gap = ulelab::abs(d[static_cast<size_t>(i - lo)] -
                                   d[static_cast<size_t>(i + sign * k - lo)]);
        if (first || gap < rec.min_gap) {
          rec.min_gap = gap;
          rec.argmin_i = i;
          rec.argmin_sign = sign;
          first = false;
        }
      }
    }
    rec.certified = rec.min_gap - two_tail;
    rec.ok = rec.certified >= rec.floor;
    report.all_ok = report.all_ok && rec.ok;
    Rational ratio = rec.certified / rec.floor;
    if (worst_ratio < 0 || ratio < worst_ratio) worst_ratio = ratio;
    report.separations.push_back(std::move(rec));
  }
  report.worst_margin_num = Rational(rational_num(worst_ratio));
  report.worst_margin_den = Rational(rational_den(worst_ratio));
  return report;
}

hull::FrequencyChain extract_distal_subchain(const hull::FrequencyChain& chain, int m,
                                             int depth) {
  if (m < 2) throw std::invalid_argument("extraction needs m >= 2");
  if (depth < 1) throw std::invalid_argument("extraction depth must be positive");

  // Position of the first stored element > 1.
  int pos = 1;
  while (pos <= chain.depth() && chain.elements()[pos - 1] <= 1) ++pos;
  if (pos > chain.depth()) throw std::invalid_argument("chain has no element > 1");

  std::vector<std::int64_t> out;
  BigInt cur = chain.element_at(pos);
  out.push_back(cur.convert_to<std::int64_t>());
  bool all_cubes = true;
  while (static_cast<int>(out.size()) < depth) {
    BigInt lo = pow_big(cur, 3);
    BigInt hi = pow_big(cur, 3u * static_cast<unsigned>(m));
    BigInt next(-1);
    for (int j = pos + 1;; ++j) {
      BigInt cand;
      try {
        cand = chain.element_at(j);
      } catch (const std::invalid_argument&) {
        break;  // stored prefix exhausted and no pattern
      }
      if (cand > hi) break;
      if (cand >= lo) {
        next = cand;
        pos = j;
        break;
      }
    }
    if (next < 0)
      throw std::invalid_argument("no chain element in [n^3, n^{3m}]; growth condition fails");
    if (next != lo) all_cubes = false;
    if (next > BigInt(INT64_MAX))
      throw std::overflow_error("extracted element exceeds 64 bits; rely on the cube pattern");
    out.push_back(next.convert_to<std::int64_t>());
    cur = next;
  }

  // The greedy choice keeps taking exact cubes whenever every needed cube is
  // known to appear: under a power pattern the chain literally contains all
  // cubes of its elements, and a single infinite prime fills in every prime
  // power eventually.
  bool cubes_continue = false;
  if (chain.pattern().kind == hull::GrowthKind::Power) {
    cubes_continue = true;
  } else if (chain.pattern().declared()) {
    auto f = supernatural_of(chain);
    int infinite = 0;
    for (const auto& [p, e] : f.exponents)
      if (e == hull::SupernaturalNumber::kInfinite) ++infinite;
    cubes_continue = infinite == 1;
  }
  if (all_cubes && cubes_continue)
    return hull::FrequencyChain(std::move(out), hull::GrowthPattern::power(3));
  return hull::FrequencyChain(std::move(out));
}

int poeschel_alpha(int v, std::int64_t i) {
  if (v < 1) throw std::invalid_argument("alpha_v: v >= 1 required");
  if (v > 62) throw std::invalid_argument("alpha_v: 2^v exceeds 64 bits");
  std::int64_t period = std::int64_t(1) << v;
  std::int64_t half = period >> 1;
  std::int64_t r = a_v(i, period);
  return (v % 2 == 0) ? (r < half ? 1 : 0) : (r >= half ? 1 : 0);
}

Rational poeschel_value(std::int64_t i, int depth) {
  if (depth < 1) throw std::invalid_argument("depth >= 1 required");
  Rational s = 0;
  for (int v = 1; v <= depth; ++v)
    if (poeschel_alpha(v, i)) s += Rational(1, BigInt(1) << v);
  return s;
}

Rational poeschel_value_limit(std::int64_t i) {
  // Stabilization level: for 2^{v-1} > |i| the residue i mod 2^v no longer
  // moves across the half-period boundary, so alpha_v(i) = [v even] for
  // i >= 0 and [v odd] for i < 0.
  std::int64_t mag = i < 0 ? -i : i;
  int L = 1;
  while ((std::int64_t(1) << (L - 1)) <= mag) ++L;
  Rational s = 0;
  for (int v = 1; v < L; ++v)
    if (poeschel_alpha(v, i)) s += Rational(1, BigInt(1) << v);
  int parity = i >= 0 ? 0 : 1;
  int vstar = (L % 2 == parity) ? L : L + 1;
  // sum over v >= vstar, v = vstar, vstar+2, ...: 2^{-vstar} * 4/3
  s += Rational(4, 3 * (BigInt(1) << vstar));
  return s;
}

PoeschelExample::PoeschelExample(int depth_) : depth(depth_) {
  if (depth < 1) throw std::invalid_argument("depth >= 1 required");
}

LimitPeriodicSeries PoeschelExample::to_series() const {
  if (depth > 20) throw std::overflow_error("layer period too large to tabulate");
  std::vector<PeriodicLayer> layers;
  std::vector<std::int64_t> chain_elems;
  for (int v = 1; v <= depth; ++v) {
    std::int64_t period = std::int64_t(1) << v;
    std::vector<Rational> vals(period);
    for (std::int64_t r = 0; r < period; ++r)
      vals[r] = poeschel_alpha(v, r) ? Rational(1, BigInt(1) << v) : Rational(0);
    layers.emplace_back(period, std::move(vals));
    chain_elems.push_back(period);
  }
  hull::FrequencyChain chain(chain_elems, hull::GrowthPattern::ratio(2));
  return LimitPeriodicSeries(std::move(layers), std::move(chain), [](int k) {
    return Rational(1, BigInt(1) << k);  // sum_{v>k} 2^{-v}
  });
}

Rational PoeschelExample::distality_floor(std::int64_t k) {
  if (k == 0) throw std::invalid_argument("separation must be nonzero");
  return Rational(1, 16 * (k < 0 ? -k : k));
}

DistalityReport verify_poeschel_distality(std::int64_t window_begin, std::int64_t window_end,
                                          std::int64_t max_separation) {
  if (window_end <= window_begin) throw std::invalid_argument("empty window");
  if (max_separation < 1) throw std::invalid_argument("max separation must be >= 1");

  std::int64_t lo = window_begin - max_separation;
  std::int64_t hi = window_end + max_separation;
  std::vector<Rational> d(static_cast<size_t>(hi - lo));
  for (std::int64_t i = lo; i < hi; ++i)
    d[static_cast<size_t>(i - lo)] = poeschel_value_limit(i);

  DistalityReport report;
  report.all_ok = true;
  std::int64_t span = std::max(std::llabs(window_begin), std::llabs(window_end)) +
                      max_separation;
  int L = 1;
  while ((std::int64_t(1) << (L - 1)) <= span) ++L;
  report.layers_used = L;
  Rational worst_ratio(-1);
  for (std::int64_t k = 1; k <= max_separation; ++k) {
    SeparationRecord rec;
    rec.k = k;
    rec.floor = PoeschelExample::distality_floor(k);
    bool first = true;
    for (std::int64_t i = window_begin; i < window_end; ++i) {
      for (int sign : {+1, -1}) {
        Rational gap = ulelab::abs(d[static_cast<size_t>(i - lo)] -
                                   d[static_cast<size_t>(i + sign * k - lo)]);
        if (first || gap < rec.min_gap) {
          rec.min_gap = gap;
          rec.argmin_i = i;
          rec.argmin_sign = sign;
          first = false;
        }
      }
    }
    rec.certified = rec.min_gap;  // exact limit values, no truncation error
    rec.ok = rec.certified >= rec.floor;
    report.all_ok = report.all_ok && rec.ok;
    Rational ratio = rec.certified / rec.floor;
    if (worst_ratio < 0 || ratio < worst_ratio) worst_ratio = ratio;
    report.separations.push_back(std::move(rec));
  }
  report.worst_margin_num = Rational(rational_num(worst_ratio));
  report.worst_margin_den = Rational(rational_den(worst_ratio));
  return report;
}

}  // namespace ulelab::sampling
