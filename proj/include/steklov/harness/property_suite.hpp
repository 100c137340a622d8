#pragma once

#include "steklov/corpus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace steklov {

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  bool gating = true;  // diagnostics are reported but never fail the suite
  std::string detail;
};

struct SuiteReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

struct SuiteOptions {
  std::optional<std::string> filter;          // module name
  std::optional<std::vector<ObjectiveSpec>> corpus;  // replaces the shipped corpus (fault injection)
};

/// Module names accepted by the filter.
const std::vector<std::string>& suite_modules();

/// Runs the invariant checks of every module (or the filtered one).
/// An unknown filter raises ConfigError.
SuiteReport run_property_suite(const SuiteOptions& options = {});

}  // namespace steklov
