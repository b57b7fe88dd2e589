// Copyright 2026 The qae-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end acceptance checks, shared by the test binary and `qae-lab verify`.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qaelab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// One line of measured values.
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 8;

std::string criterion_name(int id);

/// Runs one criterion; progress notes go to `log`. Never throws: an exception
/// becomes a failed result.
CriterionResult run_criterion(int id, std::ostream& log, int workers = 1);

/// Runs the given criteria (all when empty), printing one PASS/FAIL line each
/// to `out`. Returns the number of failures.
int run_suite(const std::vector<int>& ids, std::ostream& out, int workers = 1);

}  // namespace qaelab::acceptance
