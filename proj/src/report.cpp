#include "gyni/report.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace gyni {
namespace {

using OrderedJson = nlohmann::ordered_json;

ReportItem make_checked(std::string name, std::string value, std::string expected,
                        bool matches, bool decimal_hint) {
  ReportItem item;
  item.name = std::move(name);
  item.value = std::move(value);
  item.expected = std::move(expected);
  item.verdict = matches ? Verdict::kPass : Verdict::kFail;
  item.decimal_hint = decimal_hint;
  return item;
}

const char* verdict_word(Verdict v) { return v == Verdict::kPass ? "pass" : "fail"; }

OrderedJson item_json(const ReportItem& item) {
  OrderedJson j;
  j["name"] = item.name;
  j["value"] = item.value;
  if (item.verdict != Verdict::kInfo) {
    j["expected"] = item.expected;
    j["verdict"] = verdict_word(item.verdict);
  }
  return j;
}

OrderedJson report_json(const RunReport& report) {
  OrderedJson j;
  j["command"] = report.command;
  OrderedJson params = OrderedJson::object();
  for (const auto& [key, value] : report.parameters) params[key] = value;
  j["parameters"] = std::move(params);
  if (report.has_seed) j["seed"] = report.seed;
  OrderedJson results = OrderedJson::array();
  for (const ReportItem& item : report.results) results.push_back(item_json(item));
  j["results"] = std::move(results);
  if (!report.children.empty()) {
    OrderedJson checks = OrderedJson::array();
    for (const RunReport& child : report.children) checks.push_back(report_json(child));
    j["checks"] = std::move(checks);
  }
  OrderedJson summary;
  summary["checks"] = report.check_count();
  summary["failed"] = report.fail_count();
  OrderedJson failures = OrderedJson::array();
  for (const std::string& f : report.failures()) failures.push_back(f);
  summary["failures"] = std::move(failures);
  j["summary"] = std::move(summary);
  return j;
}

// Decorates an exact rational with its decimal rendering when requested.
std::string shown_value(const ReportItem& item, bool with_decimal) {
  if (!with_decimal || !item.decimal_hint) return item.value;
  return item.value + " (" + Rational::parse(item.value).decimal(12) + ")";
}

void render_items(std::ostringstream& out, const RunReport& report, bool with_decimal) {
  out << "results:\n";
  for (const ReportItem& item : report.results) {
    out << "  " << item.name << " = " << shown_value(item, with_decimal);
    if (item.verdict != Verdict::kInfo) {
      out << "  [expected " << item.expected << "] "
          << (item.verdict == Verdict::kPass ? "PASS" : "FAIL");
    }
    out << "\n";
  }
}

}  // namespace

ReportItem info_item(std::string name, std::string value) {
  ReportItem item;
  item.name = std::move(name);
  item.value = std::move(value);
  return item;
}

ReportItem info_rational(std::string name, const Rational& value) {
  ReportItem item = info_item(std::move(name), value.str());
  item.decimal_hint = true;
  return item;
}

ReportItem info_count(std::string name, long value) {
  return info_item(std::move(name), std::to_string(value));
}

ReportItem checked_rational(std::string name, const Rational& value,
                            const Rational& expected) {
  return make_checked(std::move(name), value.str(), expected.str(), value == expected,
                      true);
}

ReportItem checked_count(std::string name, long value, long expected) {
  return make_checked(std::move(name), std::to_string(value), std::to_string(expected),
                      value == expected, false);
}

ReportItem checked_flag(std::string name, bool value, bool expected) {
  return make_checked(std::move(name), value ? "true" : "false",
                      expected ? "true" : "false", value == expected, false);
}

ReportItem checked_text(std::string name, std::string value, std::string expected) {
  bool matches = value == expected;
  return make_checked(std::move(name), std::move(value), std::move(expected), matches,
                      false);
}

void RunReport::param(std::string key, std::string value) {
  parameters.emplace_back(std::move(key), std::move(value));
}

void RunReport::add(ReportItem item) { results.push_back(std::move(item)); }

std::string RunReport::label() const {
  std::string text = command;
  if (parameters.empty() && !has_seed) return text;
  text += "(";
  bool first = true;
  for (const auto& [key, value] : parameters) {
    if (!first) text += ", ";
    text += key + "=" + value;
    first = false;
  }
  if (has_seed) {
    if (!first) text += ", ";
    text += "seed=" + std::to_string(seed);
  }
  text += ")";
  return text;
}

long RunReport::check_count() const {
  long count = 0;
  for (const ReportItem& item : results)
    if (item.verdict != Verdict::kInfo) ++count;
  for (const RunReport& child : children) count += child.check_count();
  return count;
}

long RunReport::fail_count() const {
  long count = 0;
  for (const ReportItem& item : results)
    if (item.verdict == Verdict::kFail) ++count;
  for (const RunReport& child : children) count += child.fail_count();
  return count;
}

std::vector<std::string> RunReport::failures() const {
  std::vector<std::string> paths;
  for (const ReportItem& item : results)
    if (item.verdict == Verdict::kFail) paths.push_back(item.name);
  for (const RunReport& child : children) {
    std::string prefix = child.label() + "/";
    for (const std::string& inner : child.failures()) paths.push_back(prefix + inner);
  }
  return paths;
}

std::string serialize_report(const RunReport& report) {
  return report_json(report).dump(2) + "\n";
}

std::string render_report(const RunReport& report, bool with_decimal) {
  std::ostringstream out;
  out << "command: " << report.command << "\n";
  if (!report.parameters.empty() || report.has_seed) {
    out << "parameters:\n";
    for (const auto& [key, value] : report.parameters)
      out << "  " << key << " = " << value << "\n";
    if (report.has_seed) out << "  seed = " << report.seed << "\n";
  }
  if (!report.results.empty()) render_items(out, report, with_decimal);
  if (!report.children.empty()) {
    out << "checks:\n";
    int index = 1;
    for (const RunReport& child : report.children) {
      long checks = child.check_count();
      long failed = child.fail_count();
      out << "  [" << index << "/" << report.children.size() << "] " << child.label()
          << ": " << checks << (checks == 1 ? " check" : " checks") << ", " << failed
          << " failed -> " << (failed == 0 ? "PASS" : "FAIL") << "\n";
      ++index;
    }
  }
  std::vector<std::string> failed = report.failures();
  if (!failed.empty()) {
    out << "failures:\n";
    for (const std::string& f : failed) out << "  " << f << "\n";
  }
  out << "summary: " << report.check_count() << " checks, " << report.fail_count()
      << " failed -> " << (report.all_passed() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

int exit_code_for(const RunReport& report) { return report.all_passed() ? 0 : 1; }

}  // namespace gyni
