#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

// Configuration, orchestration of sweeps and report emission. All outputs are
// deterministic: repeated runs with the same config produce identical bytes.
namespace ulelab::cli {

enum class GeneratorKind { Lemma44, Poeschel };

struct RunConfig {
  std::vector<std::int64_t> chain = {2, 8, 512};
  std::string pattern = "cube";
  int m = 2;
  GeneratorKind generator = GeneratorKind::Lemma44;
  std::vector<double> eps = {0.2, 0.1, 0.05};
  std::vector<int> sizes = {128};
  std::vector<std::int64_t> shifts = {0};
  int k_layers = 3;
  double tol = 1e-8;
  double floor = 1e-12;
  int interior_margin = 16;
  int max_iter = 100;
  std::string output_dir = ".";
  bool exact = true;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  void validate() const;
  std::string hash() const;  // 16 hex digits over the canonical serialization
};

// Exit codes: 0 success, 1 internal error, 2 invalid input,
// 3 inconclusive / non-converged.
int run_cli(const std::vector<std::string>& args);

}  // namespace ulelab::cli
