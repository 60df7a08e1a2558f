#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cdkit/solve_types.hpp"

namespace cdkit {

struct StepCheck {
  std::size_t k = 0;
  double value = kNaN;      ///< quantity measured at this step
  double reference = kNaN;  ///< what it was compared against
  double violation = 0.0;
  bool skipped = false;
  std::string note;
};

/// Outcome of one certification. Report-only checks keep pass = true and
/// set asserted = false.
struct CheckReport {
  std::string check_name;
  double max_violation = 0.0;
  double threshold = 0.0;
  bool pass = true;
  bool asserted = true;
  std::string note;
  std::vector<StepCheck> per_step;

  /// Appends a step and folds it into max_violation / pass.
  void add(StepCheck step);
  /// Recomputes pass from max_violation and threshold.
  void finalize();
};

/// {check_name, max_violation, threshold, pass, per_step: [...]}; NaN as null.
std::string to_json(const CheckReport& report);

/// {"pass": all asserted checks passed, "checks": [...]}
std::string to_json(const std::vector<CheckReport>& reports);

bool all_pass(const std::vector<CheckReport>& reports);

}  // namespace cdkit
