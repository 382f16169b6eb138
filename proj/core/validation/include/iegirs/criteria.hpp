// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace iegirs::validation {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct CriteriaOptions {
  std::size_t threads = 1;
  /// Path of the command-line tool; criterion 12 then also runs `simulate`
  /// twice through it and compares the files byte for byte.
  std::string cli_path;
  /// Scratch directory for criterion 12 output files.
  std::string work_dir = ".";
};

inline constexpr int kCriterionCount = 12;

/// Runs acceptance criterion `id` (1..12). Exceptions are reported as FAIL.
CriterionResult run_criterion(int id, const CriteriaOptions& options);

/// Runs the listed criteria (all when empty), in order.
std::vector<CriterionResult> run_criteria(const CriteriaOptions& options, const std::vector<int>& ids = {});

/// "PASS  3  title: detail (1.2 s)"
std::string format_line(const CriterionResult& result);

}  // namespace iegirs::validation
