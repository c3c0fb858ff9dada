#include "ulelab/hull.hpp"

#include <algorithm>
#include <stdexcept>

namespace ulelab::hull {

namespace {

// Trial-division factorization; chain elements are desk-scale.
std::map<std::int64_t, int> factorize(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("factorize: positive integer required");
  std::map<std::int64_t, int> out;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n > 1) ++out[n];
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  __int128 r = static_cast<__int128>(a) * b;
  if (r > INT64_MAX) throw std::overflow_error("chain element exceeds 64 bits");
  return static_cast<std::int64_t>(r);
}

// Smallest m >= 1 with target <= base^m. Exact; never overflows because the
// running power stays below target until the final step.
int min_power(std::int64_t base, std::int64_t target) {
  int m = 1;
  std::int64_t p = base;
  while (p < target) {
    __int128 next = static_cast<__int128>(p) * base;
    ++m;
    if (next >= target) return m;
    p = static_cast<std::int64_t>(next);
  }
  return m;
}

}  // namespace

GrowthPattern GrowthPattern::ratio(std::int64_t q) {
  if (q < 2) throw std::invalid_argument("ratio pattern needs q >= 2");
  return {GrowthKind::Ratio, q};
}

GrowthPattern GrowthPattern::power(std::int64_t e) {
  if (e < 2) throw std::invalid_argument("power pattern needs exponent >= 2");
  return {GrowthKind::Power, e};
}

GrowthPattern GrowthPattern::prime_cycle(std::vector<std::int64_t> primes) {
  if (primes.empty()) throw std::invalid_argument("prime cycle must be nonempty");
  for (std::int64_t p : primes) {
    if (p < 2) throw std::invalid_argument("cycle entries must be primes");
    for (std::int64_t q = 2; q * q <= p; ++q)
      if (p % q == 0) throw std::invalid_argument("cycle entries must be primes");
  }
  GrowthPattern g;
  g.kind = GrowthKind::Cycle;
  g.cycle = std::move(primes);
  return g;
}

std::string GrowthPattern::name() const {
  switch (kind) {
    case GrowthKind::None:
      return "none";
    case GrowthKind::Ratio:
      return "powers";
    case GrowthKind::Power:
      return param == 2 ? "square" : (param == 3 ? "cube" : "pow" + std::to_string(param));
    case GrowthKind::Cycle: {
      std::string s = "cycle:";
      for (size_t i = 0; i < cycle.size(); ++i)
        s += (i ? "," : "") + std::to_string(cycle[i]);
      return s;
    }
  }
  return "none";
}

GrowthPattern GrowthPattern::parse(const std::string& name) {
  if (name.empty() || name == "none") return GrowthPattern::none();
  if (name == "powers") return {GrowthKind::Ratio, 0};  // ratio read off the chain
  if (name == "square") return power(2);
  if (name == "cube") return power(3);
  if (name.rfind("cycle:", 0) == 0) {
    std::vector<std::int64_t> primes;
    std::string rest = name.substr(6);
    size_t pos = 0;
    while (pos < rest.size()) {
      size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      primes.push_back(std::stoll(rest.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    return prime_cycle(std::move(primes));
  }
  throw std::invalid_argument("unknown growth pattern: " + name);
}

bool SupernaturalNumber::admits(std::int64_t n) const {
  for (const auto& [p, e] : factorize(n)) {
    auto it = exponents.find(p);
    if (it == exponents.end()) return false;
    if (it->second != kInfinite && it->second < e) return false;
  }
  return true;
}

std::string SupernaturalNumber::str() const {
  std::string s;
  for (const auto& [p, e] : exponents) {
    if (!s.empty()) s += "*";
    s += std::to_string(p) + "^" + (e == kInfinite ? std::string("inf") : std::to_string(e));
  }
  return s.empty() ? "1" : s;
}

FrequencyChain::FrequencyChain(std::vector<std::int64_t> elements, GrowthPattern pattern)
    : elements_(std::move(elements)), pattern_(pattern) {
  if (elements_.empty()) throw std::invalid_argument("frequency chain must be nonempty");
  for (size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] < 1) throw std::invalid_argument("chain elements must be positive");
    if (i > 0) {
      if (elements_[i] <= elements_[i - 1])
        throw std::invalid_argument("chain elements must be strictly increasing");
      if (elements_[i] % elements_[i - 1] != 0)
        throw std::invalid_argument("chain elements must divide successively");
    }
  }
  // A "powers" pattern with unspecified ratio is read off the stored prefix.
  if (pattern_.kind == GrowthKind::Ratio && pattern_.param == 0) {
    if (elements_.size() < 2)
      throw std::invalid_argument("powers pattern needs two stored elements to fix the ratio");
    pattern_.param = elements_[1] / elements_[0];
  }
  if (pattern_.kind == GrowthKind::Ratio) {
    for (size_t i = 1; i < elements_.size(); ++i)
      if (elements_[i] / elements_[i - 1] != pattern_.param ||
          elements_[i] % elements_[i - 1] != 0)
        throw std::invalid_argument("stored prefix violates the declared constant ratio");
  }
  if (pattern_.kind == GrowthKind::Power) {
    for (size_t i = 1; i < elements_.size(); ++i) {
      BigInt want = pow_big(BigInt(elements_[i - 1]), static_cast<unsigned>(pattern_.param));
      if (BigInt(elements_[i]) != want)
        throw std::invalid_argument("stored prefix violates the declared power pattern");
    }
  }
}

BigInt FrequencyChain::element_at(int j) const {
  if (j < 1) throw std::invalid_argument("chain positions are 1-based");
  if (j <= depth()) return BigInt(elements_[j - 1]);
  if (!pattern_.declared())
    throw std::invalid_argument("position past stored depth and no growth pattern declared");
  BigInt v(elements_.back());
  for (int k = depth(); k < j; ++k) {
    switch (pattern_.kind) {
      case GrowthKind::Ratio:
        v *= pattern_.param;
        break;
      case GrowthKind::Power:
        v = pow_big(v, static_cast<unsigned>(pattern_.param));
        break;
      case GrowthKind::Cycle:
        v *= pattern_.cycle[static_cast<size_t>(k - depth()) % pattern_.cycle.size()];
        break;
      case GrowthKind::None:
        break;
    }
    // power extensions grow doubly exponentially; refuse runaway positions
    if (boost::multiprecision::msb(v) > 1u << 20)
      throw std::overflow_error("pattern extension grows past any workable size");
  }
  return v;
}

nlohmann::json FrequencyChain::to_json() const {
  return {{"chain", elements_}, {"pattern", pattern_.name()}};
}

FrequencyChain FrequencyChain::from_json(const nlohmann::json& j) {
  std::vector<std::int64_t> elems = j.at("chain").get<std::vector<std::int64_t>>();
  GrowthPattern pat = GrowthPattern::none();
  if (j.contains("pattern")) pat = GrowthPattern::parse(j.at("pattern").get<std::string>());
  return FrequencyChain(std::move(elems), pat);
}

GroupElement::GroupElement(FrequencyChain chain, std::vector<std::int64_t> residues)
    : chain_(std::move(chain)), residues_(std::move(residues)) {
  if (residues_.size() != chain_.elements().size())
    throw std::invalid_argument("one residue per chain level required");
  for (size_t k = 0; k < residues_.size(); ++k) {
    if (residues_[k] < 0 || residues_[k] >= chain_.elements()[k])
      throw std::invalid_argument("residue out of range at level " + std::to_string(k + 1));
    if (k > 0 && residues_[k] % chain_.elements()[k - 1] != residues_[k - 1])
      throw std::invalid_argument("incompatible residues at level " + std::to_string(k + 1));
  }
}

GroupElement GroupElement::identity(FrequencyChain chain) {
  std::vector<std::int64_t> zeros(chain.elements().size(), 0);
  return GroupElement(std::move(chain), std::move(zeros));
}

nlohmann::json GroupElement::to_json() const {
  nlohmann::json j = chain_.to_json();
  j["residues"] = residues_;
  return j;
}

GroupElement GroupElement::from_json(const nlohmann::json& j) {
  return GroupElement(FrequencyChain::from_json(j),
                      j.at("residues").get<std::vector<std::int64_t>>());
}

GroupElement odometer_add(const GroupElement& g, std::int64_t k) {
  std::vector<std::int64_t> out(g.residues().size());
  for (size_t j = 0; j < out.size(); ++j) {
    std::int64_t n = g.chain().elements()[j];
    std::int64_t r = (g.residues()[j] + k) % n;
    out[j] = r < 0 ? r + n : r;
  }
  return GroupElement(g.chain(), std::move(out));
}

FrequencyChain maximalize(const FrequencyChain& chain, int depth) {
  if (depth < 1) throw std::invalid_argument("maximalize: depth must be positive");

  // Split each ratio (starting from 1) into primes sorted ascending.
  std::vector<std::int64_t> out;
  std::int64_t current = 1;
  for (std::int64_t target : chain.elements()) {
    std::int64_t ratio = target / current;
    for (const auto& [p, e] : factorize(ratio)) {
      for (int i = 0; i < e; ++i) {
        current = checked_mul(current, p);
        out.push_back(current);
      }
    }
  }

  // Infinite primes of the declared pattern, ascending: the tail cycle.
  SupernaturalNumber sn = supernatural_of(chain);
  std::vector<std::int64_t> cycle;
  for (const auto& [p, e] : sn.exponents)
    if (e == SupernaturalNumber::kInfinite) cycle.push_back(p);

  size_t turn = 0;
  if (static_cast<int>(out.size()) < depth) {
    if (cycle.empty())
      throw std::invalid_argument(
          "maximalize: cannot extend past the stored factorization without a growth pattern");
    while (static_cast<int>(out.size()) < depth) {
      current = checked_mul(current, cycle[turn % cycle.size()]);
      out.push_back(current);
      ++turn;
    }
  }
  if (cycle.empty()) return FrequencyChain(std::move(out));
  // The result keeps growing by the same rotation, phase included.
  std::vector<std::int64_t> rotated;
  for (size_t i = 0; i < cycle.size(); ++i)
    rotated.push_back(cycle[(turn + i) % cycle.size()]);
  return FrequencyChain(std::move(out), GrowthPattern::prime_cycle(std::move(rotated)));
}

SupernaturalNumber supernatural_of(const FrequencyChain& chain) {
  SupernaturalNumber sn;
  for (const auto& [p, e] : factorize(chain.elements().back()))
    sn.exponents[p] = e;  // valuations are maximal at the last element
  switch (chain.pattern().kind) {
    case GrowthKind::None:
      break;
    case GrowthKind::Ratio:
      for (const auto& [p, e] : factorize(chain.pattern().param))
        sn.exponents[p] = SupernaturalNumber::kInfinite;
      break;
    case GrowthKind::Power:
      // Every prime of the last element has its valuation multiplied forever.
      for (auto& [p, e] : sn.exponents) e = SupernaturalNumber::kInfinite;
      break;
    case GrowthKind::Cycle:
      for (std::int64_t p : chain.pattern().cycle)
        sn.exponents[p] = SupernaturalNumber::kInfinite;
      break;
  }
  return sn;
}

namespace {

// One direction of the classification test: does every stored element of
// `from` divide into `to` (stored now, or eventually under to's pattern)?
struct DirectionResult {
  bool all_witnessed = true;    // every element has a concrete witness
  bool refuted = false;         // some element provably never divides in
  std::int64_t failing = 0;
  std::vector<IsoWitness> witnesses;
};

DirectionResult check_direction(const FrequencyChain& from, const FrequencyChain& to, int depth) {
  DirectionResult res;
  SupernaturalNumber to_sn = supernatural_of(to);
  int limit = std::min<int>(depth, from.depth());
  for (int idx = 0; idx < limit; ++idx) {
    std::int64_t x = from.elements()[idx];
    IsoWitness w;
    w.element = x;
    bool found = false;
    for (std::int64_t y : to.elements()) {
      if (y % x == 0) {
        w.divides_into = BigInt(y);
        found = true;
        break;
      }
    }
    if (!found && to.pattern().declared()) {
      if (to_sn.admits(x)) {
        // Extend until the pattern has accumulated enough of each prime.
        // Ratio gains at least one factor per step; Power multiplies every
        // valuation, so a handful of steps covers any 64-bit x.
        int cap = to.pattern().kind == GrowthKind::Power
                      ? 8
                      : 128 * (1 + static_cast<int>(to.pattern().cycle.size()));
        BigInt y(to.elements().back());
        for (int step = 0; step < cap && !found; ++step) {
          switch (to.pattern().kind) {
            case GrowthKind::Ratio:
              y *= to.pattern().param;
              break;
            case GrowthKind::Power:
              y = pow_big(y, static_cast<unsigned>(to.pattern().param));
              break;
            case GrowthKind::Cycle:
              y *= to.pattern().cycle[static_cast<size_t>(step) % to.pattern().cycle.size()];
              break;
            case GrowthKind::None:
              break;
          }
          if (y % x == 0) {
            w.divides_into = y;
            found = true;
          }
        }
      } else {
        res.refuted = true;
        res.failing = x;
        res.witnesses.push_back(w);
        return res;
      }
    }
    if (!found) res.all_witnessed = false;
    res.witnesses.push_back(w);
  }
  return res;
}

}  // namespace

IsoCertificate hulls_isomorphic(const FrequencyChain& a, const FrequencyChain& b, int depth) {
  if (depth < 1) throw std::invalid_argument("hulls_isomorphic: depth must be positive");
  IsoCertificate cert;
  cert.depth = std::min<int>(depth, std::max(a.depth(), b.depth()));

  DirectionResult fwd = check_direction(a, b, depth);
  cert.forward = fwd.witnesses;
  if (fwd.refuted) {
    cert.verdict = IsoVerdict::NotIsomorphic;
    cert.first_failing = fwd.failing;
    cert.failing_forward = true;
    return cert;
  }
  DirectionResult rev = check_direction(b, a, depth);
  cert.reverse = rev.witnesses;
  if (rev.refuted) {
    cert.verdict = IsoVerdict::NotIsomorphic;
    cert.first_failing = rev.failing;
    cert.failing_forward = false;
    return cert;
  }

  if (a.pattern().declared() && b.pattern().declared()) {
    // Both tails are pinned down: supernatural numbers decide outright.
    cert.verdict = supernatural_of(a) == supernatural_of(b) ? IsoVerdict::Isomorphic
                                                            : IsoVerdict::NotIsomorphic;
    if (cert.verdict == IsoVerdict::NotIsomorphic) {
      // Name the first element without a confirmed witness, if any.
      for (const auto& w : cert.forward)
        if (!w.divides_into) {
          cert.first_failing = w.element;
          cert.failing_forward = true;
          break;
        }
      if (!cert.first_failing)
        for (const auto& w : cert.reverse)
          if (!w.divides_into) {
            cert.first_failing = w.element;
            cert.failing_forward = false;
            break;
          }
    }
    return cert;
  }

  if (fwd.all_witnessed && rev.all_witnessed && !a.pattern().declared() &&
      !b.pattern().declared()) {
    cert.verdict = IsoVerdict::Isomorphic;  // verdict about the stored prefixes
    return cert;
  }

  cert.verdict = IsoVerdict::InconclusiveAtDepth;
  return cert;
}

ConditionA condition_A(const FrequencyChain& chain) {
  const auto& n = chain.elements();
  if (n.size() < 2) throw std::invalid_argument("condition A needs at least two elements");
  if (n.front() < 2) throw std::invalid_argument("condition A requires n_1 >= 2");
  int m = 2;
  for (size_t k = 0; k + 1 < n.size(); ++k) m = std::max(m, min_power(n[k], n[k + 1]));
  return ConditionA{true, m, static_cast<int>(n.size())};
}

}  // namespace ulelab::hull
