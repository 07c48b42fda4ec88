#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sievebench/common.hpp"

namespace sievebench {

struct AcceptanceOptions {
  u64 seed = 20240601;
  int threads = 1;
  /// Empty runs every criterion.
  std::set<int> only;
  /// Where CSV/JSON artifacts of the runs are written, when set.
  std::optional<std::filesystem::path> out_dir;
  /// Progress and one line per criterion.
  std::ostream* log = nullptr;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0;
  double limit_seconds = 0;
  std::string detail;
};

/// Runs the numbered acceptance criteria. A criterion fails when any of its
/// checks fails or when it exceeds its runtime limit.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

std::string format_result(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& results);

}  // namespace sievebench
