// Copyright 2026 The bevaug Authors. All Rights Reserved.
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

#ifndef BEVAUG_CHECKS_SELFTEST_HPP_
#define BEVAUG_CHECKS_SELFTEST_HPP_

#include <string>
#include <vector>

namespace bevaug {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<CheckResult> checks;

  bool AllPassed() const;
};

// Runs every oracle comparison with fixed seeds. Failures are recorded in
// the report, never thrown.
SelftestReport RunSelftest();

// One "PASS name: detail" / "FAIL name: detail" line per check plus a summary.
std::string FormatSelftest(const SelftestReport& report);

}  // namespace bevaug

#endif  // BEVAUG_CHECKS_SELFTEST_HPP_
