#pragma once

#include <string>
#include <vector>

namespace splab {

// A reportable observation from an oracle or budget check. Budget findings
// record that a measured ratio exceeded a configured slack constant; theorem
// findings record a failed exhaustively-checkable statement and are expected
// never to occur.
struct Finding {
  enum class Severity { info, budget_violation, theorem_violation };
  Severity severity = Severity::info;
  std::string module;
  std::string message;
};

inline const char* severity_name(Finding::Severity s) {
  switch (s) {
    case Finding::Severity::info: return "info";
    case Finding::Severity::budget_violation: return "budget_violation";
    case Finding::Severity::theorem_violation: return "theorem_violation";
  }
  return "unknown";
}

inline bool has_theorem_violation(const std::vector<Finding>& fs) {
  for (const auto& f : fs)
    if (f.severity == Finding::Severity::theorem_violation) return true;
  return false;
}

}  // namespace splab
