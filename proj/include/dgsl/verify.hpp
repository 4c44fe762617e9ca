#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dgsl {

struct VerifyOptions {
  std::optional<double> penalty;  // overrides each suite's default lambda
  std::uint64_t seed = 2024;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// quadrature, symmetry, lemma2, continuity, coercivity, jacobian, newton,
/// rates, trace, l2dg, consistency.
std::vector<std::string> suite_names();

/// Runs one named suite, or every suite for "all". Throws ConfigError for an
/// unknown name.
std::vector<SuiteResult> run_property_suite(const std::string& selector,
                                            const VerifyOptions& options = {});

}  // namespace dgsl
