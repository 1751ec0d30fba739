#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lclt/verifier.hpp"

namespace lclt {

/// One report as a JSON record. runtime_ms is left out so that report files
/// are reproducible; it is written to the run metadata instead.
nlohmann::ordered_json report_json(const VerificationReport& r);

/// Orders reports by check name, then by serialized parameters.
void sort_reports(std::vector<VerificationReport>& reports);

/// Replaces the tolerance of every report whose check name is listed and
/// re-evaluates pass.
void apply_tolerance_overrides(std::vector<VerificationReport>& reports,
                               const std::map<std::string, double>& overrides);

/// True when every enforced report passes.
bool all_pass(const std::vector<VerificationReport>& reports);

void write_jsonl(std::ostream& out, const std::vector<VerificationReport>& reports);

/// Columns check, params, lhs, rhs, margin, pass; params is the JSON object.
void write_summary_csv(std::ostream& out, const std::vector<VerificationReport>& reports);

/// Shortest round-trip decimal form, as used in the JSON records.
std::string format_real(double x);

}  // namespace lclt
