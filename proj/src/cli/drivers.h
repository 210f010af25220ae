#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qmoney::cli {

using Json = nlohmann::ordered_json;

/// Report under construction. Invariants are the asserted checks that decide
/// the exit code; everything else is informational.
class Report {
 public:
  Report(std::string command, Json config);

  Json& results() { return doc_["results"]; }
  void set_trials(Json records, Json aggregate);
  /// `oracle` names the independent computation the check compares against.
  void invariant(const std::string& name, bool passed, const std::string& oracle);
  void formula(const std::string& field, const std::string& description);

  bool passed() const;
  /// Document with the overall "passed" flag appended.
  Json json() const;

 private:
  Json doc_;
};

struct HsDemoConfig {
  std::string fixture = "paper84";
  std::string fixture_dir;
};
Report hs_demo(const HsDemoConfig& c);

struct HsBenchConfig {
  size_t n = 8;
  std::string beta = "2";
  unsigned d = 3;
  size_t trials = 100;
  uint64_t seed = 1;
};
Report hs_bench(const HsBenchConfig& c);

struct CloneCensusConfig {
  size_t m = 8;
  size_t n = 3;
  uint64_t seed = 1;
};
Report clone_census(const CloneCensusConfig& c);

struct CloneAttackConfig {
  size_t m = 8;
  size_t n = 3;
  std::string y = "1";
  size_t trials = 10;
  uint64_t seed = 1;
};
Report clone_attack(const CloneAttackConfig& c);

struct BrandtConfig {
  int64_t p = 11;
  int64_t n_max = 6;
  std::string fixture_dir;
};
Report brandt(const BrandtConfig& c);

struct HeckeEigenConfig {
  int64_t p = 11;
  std::vector<int64_t> primes = {2, 3, 5, 7};
  int64_t n_max = 30;
  uint64_t seed = 1;
};
Report hecke_eigen(const HeckeEigenConfig& c);

struct HeckeAttackConfig {
  int64_t p = 23;
  std::vector<int64_t> primes = {2, 3, 5};
  double eps = 1e-3;
  std::string pivot = "auto";
  uint64_t seed = 1;
};
Report hecke_attack(const HeckeAttackConfig& c);

}  // namespace qmoney::cli
