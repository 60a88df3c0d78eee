#pragma once

#include <string>
#include <vector>

namespace bore {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Oracle-equivalence and identity battery behind `bore validate`. `fast` keeps
/// every instance at n <= 15 points.
[[nodiscard]] std::vector<CheckResult> run_validation(bool fast);

}  // namespace bore
