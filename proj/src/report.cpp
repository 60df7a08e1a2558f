#include "cdkit/report.hpp"

#include <cmath>

#include <json.hpp>

namespace cdkit {

namespace {

using nlohmann::json;

json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json report_object(const CheckReport& r) {
  json steps = json::array();
  for (const StepCheck& s : r.per_step) {
    json o = {{"k", s.k},
              {"value", number_or_null(s.value)},
              {"reference", number_or_null(s.reference)},
              {"violation", number_or_null(s.violation)},
              {"skipped", s.skipped}};
    if (!s.note.empty()) o["note"] = s.note;
    steps.push_back(std::move(o));
  }
  json o = {{"check_name", r.check_name},
            {"max_violation", number_or_null(r.max_violation)},
            {"threshold", r.threshold},
            {"pass", r.pass},
            {"asserted", r.asserted},
            {"per_step", std::move(steps)}};
  if (!r.note.empty()) o["note"] = r.note;
  return o;
}

}  // namespace

void CheckReport::add(StepCheck step) {
  if (!step.skipped) {
    if (std::isnan(step.violation) || step.violation > max_violation) {
      if (!std::isnan(max_violation)) max_violation = step.violation;
    }
  }
  per_step.push_back(std::move(step));
}

void CheckReport::finalize() {
  pass = !asserted || max_violation <= threshold;
}

std::string to_json(const CheckReport& report) { return report_object(report).dump(2); }

std::string to_json(const std::vector<CheckReport>& reports) {
  json checks = json::array();
  for (const CheckReport& r : reports) checks.push_back(report_object(r));
  json o = {{"pass", all_pass(reports)}, {"checks", std::move(checks)}};
  return o.dump(2);
}

bool all_pass(const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports) {
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace cdkit
