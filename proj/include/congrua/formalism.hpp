#pragma once

// Seeded property suites over the random algebra families: each check is a
// theorem about congruence modules, so any failure is a bug and is reported
// with a serialized counterexample.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "congrua/randalg.hpp"
#include "json.hpp"

namespace congrua {

struct SuiteCounts {
  std::size_t passed = 0;
  std::size_t failed = 0;
};

struct FormalismOptions {
  std::uint64_t seed = 1;
  std::size_t count = 200;  // instances per family
  unsigned long p = 3;
  // Test harness hook, applied to each instance before the checks.
  std::function<void(RandomInstance&)> tamper;
};

struct FormalismReport {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  unsigned long p = 0;
  // suite → family → counts; ordered for byte-stable output
  std::map<std::string, std::map<std::string, SuiteCounts>> suites;
  std::vector<nlohmann::json> counterexamples;

  std::size_t failures() const;
  bool ok() const { return failures() == 0; }
};

// Suite names, in report order.
const std::vector<std::string>& formalism_suites();

// Seed of the i-th instance of a family.
std::uint64_t instance_seed(std::uint64_t seed, AlgebraFamily family, std::size_t i);

FormalismReport run_formalism_suites(const FormalismOptions& options);
nlohmann::json to_json(const FormalismReport& r);

}  // namespace congrua
