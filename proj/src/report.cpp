#include "lclt/report.hpp"

#include <algorithm>
#include <cmath>

namespace lclt {

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string format_real(double x) { return nlohmann::json(x).dump(); }

nlohmann::ordered_json report_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["check_name"] = r.check_name;
  j["parameters"] = r.parameters;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["enforced"] = r.enforced;
  return j;
}

void sort_reports(std::vector<VerificationReport>& reports) {
  std::vector<std::pair<std::string, std::size_t>> keys;
  keys.reserve(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) keys.emplace_back(reports[i].parameters.dump(), i);
  std::vector<std::size_t> order(reports.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (reports[a].check_name != reports[b].check_name) return reports[a].check_name < reports[b].check_name;
    return keys[a].first < keys[b].first;
  });
  std::vector<VerificationReport> sorted;
  sorted.reserve(reports.size());
  for (std::size_t i : order) sorted.push_back(std::move(reports[i]));
  reports = std::move(sorted);
}

void apply_tolerance_overrides(std::vector<VerificationReport>& reports,
                               const std::map<std::string, double>& overrides) {
  for (auto& r : reports) {
    auto it = overrides.find(r.check_name);
    if (it == overrides.end()) continue;
    r.tolerance = it->second;
    r.parameters["tolerance"] = it->second;
    r.settle();
  }
}

bool all_pass(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass || !r.enforced; });
}

void write_jsonl(std::ostream& out, const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) out << report_json(r).dump() << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<VerificationReport>& reports) {
  out << "check,params,lhs,rhs,margin,pass\n";
  for (const auto& r : reports) {
    out << r.check_name << ',' << csv_quote(r.parameters.dump()) << ',' << format_real(r.lhs) << ','
        << format_real(r.rhs) << ',' << format_real(r.margin) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

}  // namespace lclt
