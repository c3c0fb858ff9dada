#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ulelab/rational.hpp"

// Arithmetic of frequency integer sets, the procyclic hull as an odometer,
// hull classification and the growth condition on consecutive periods.
namespace ulelab::hull {

// A stored chain is always a finite prefix. A declared growth pattern extends
// it: "powers" repeats the common consecutive ratio, "square"/"cube" raise the
// last element to the named power at every further step, and "cycle:p,q,..."
// multiplies the listed primes in round-robin order (list order = application
// order), which is how maximalized chains of multi-prime hulls grow.
enum class GrowthKind { None, Ratio, Power, Cycle };

struct GrowthPattern {
  GrowthKind kind = GrowthKind::None;
  std::int64_t param = 0;            // common ratio (Ratio) or exponent (Power)
  std::vector<std::int64_t> cycle;   // primes in application order (Cycle)

  static GrowthPattern none() { return {}; }
  static GrowthPattern ratio(std::int64_t q);
  static GrowthPattern power(std::int64_t e);
  static GrowthPattern prime_cycle(std::vector<std::int64_t> primes);

  bool declared() const { return kind != GrowthKind::None; }
  std::string name() const;
  // Accepts "none", "", "powers", "square", "cube", "cycle:p,q,...".
  static GrowthPattern parse(const std::string& name);
  bool operator==(const GrowthPattern&) const = default;
};

// Formal product of primes with exponents in N plus an INFINITE marker; the
// classification invariant of procyclic hulls.
struct SupernaturalNumber {
  static constexpr int kInfinite = -1;
  std::map<std::int64_t, int> exponents;  // prime -> exponent (> 0 or kInfinite)

  bool operator==(const SupernaturalNumber&) const = default;
  // True when v_p(n) <= exponent(p) for every prime p of n, i.e. n divides
  // some sufficiently deep element of any chain carrying this invariant.
  bool admits(std::int64_t n) const;
  std::string str() const;
};

// Divisibility chain n_1 | n_2 | ... of periods, strictly increasing.
class FrequencyChain {
 public:
  explicit FrequencyChain(std::vector<std::int64_t> elements,
                          GrowthPattern pattern = GrowthPattern::none());

  const std::vector<std::int64_t>& elements() const { return elements_; }
  int depth() const { return static_cast<int>(elements_.size()); }
  const GrowthPattern& pattern() const { return pattern_; }

  // Element at 1-based position j; positions past the stored prefix are
  // produced by the declared pattern (throws without one). BigInt because
  // pattern extension overflows int64 after very few steps.
  BigInt element_at(int j) const;

  nlohmann::json to_json() const;  // {"chain": [...], "pattern": "..."}
  static FrequencyChain from_json(const nlohmann::json& j);

  bool operator==(const FrequencyChain&) const = default;

 private:
  std::vector<std::int64_t> elements_;
  GrowthPattern pattern_;
};

// Compatible-residue (odometer) representation of a hull element; the
// identity e is all-zero residues and the translation T is +1.
class GroupElement {
 public:
  GroupElement(FrequencyChain chain, std::vector<std::int64_t> residues);
  static GroupElement identity(FrequencyChain chain);

  const FrequencyChain& chain() const { return chain_; }
  const std::vector<std::int64_t>& residues() const { return residues_; }

  nlohmann::json to_json() const;  // adds "residues" to the chain fields
  static GroupElement from_json(const nlohmann::json& j);

  bool operator==(const GroupElement&) const = default;

 private:
  FrequencyChain chain_;
  std::vector<std::int64_t> residues_;
};

// T^k in the residue model: r_j -> (r_j + k) mod n_j at every level.
GroupElement odometer_add(const GroupElement& g, std::int64_t k);

// Refines the chain so every consecutive ratio is prime (each ratio factored
// with primes ascending) and, when a pattern declares infinite primes,
// extends the tail round-robin over those primes sorted ascending until
// `depth` elements are stored.
FrequencyChain maximalize(const FrequencyChain& chain, int depth);

// Supremum of p-adic valuations over the stored prefix; primes that a
// declared pattern multiplies in forever get the INFINITE marker.
SupernaturalNumber supernatural_of(const FrequencyChain& chain);

enum class IsoVerdict { Isomorphic, NotIsomorphic, InconclusiveAtDepth };

struct IsoWitness {
  std::int64_t element = 0;               // element of the source chain
  std::optional<BigInt> divides_into;     // witness divisor in the other chain
};

struct IsoCertificate {
  IsoVerdict verdict = IsoVerdict::InconclusiveAtDepth;
  std::vector<IsoWitness> forward;   // elements of a against b
  std::vector<IsoWitness> reverse;   // elements of b against a
  std::optional<std::int64_t> first_failing;
  bool failing_forward = true;       // direction of first_failing
  int depth = 0;                     // how many stored elements were examined

  bool isomorphic() const { return verdict == IsoVerdict::Isomorphic; }
};

// Classification test: hulls agree iff each chain's elements divide into the
// other, cofinally. With declared patterns the verdict is decided through
// supernatural numbers; bare finite prefixes confirm at stored depth or
// report inconclusive.
IsoCertificate hulls_isomorphic(const FrequencyChain& a, const FrequencyChain& b, int depth);

struct ConditionA {
  bool holds = false;
  int m_min = 0;  // smallest m >= 2 with n_{k+1} <= n_k^m over the stored prefix
  int depth = 0;  // the verdict concerns this many stored elements only
};

ConditionA condition_A(const FrequencyChain& chain);

}  // namespace ulelab::hull
