#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gyni/rational.hpp"

namespace gyni {

/// Outcome attached to one reported quantity.  Items carrying an expected
/// value are checks and land on pass or fail; everything else is
/// informational and never affects an exit code.
enum class Verdict { kInfo, kPass, kFail };

struct ReportItem {
  std::string name;
  std::string value;
  std::string expected;  // empty for informational items
  Verdict verdict = Verdict::kInfo;
  /// True when `value` is an exact rational that a decimal rendering may
  /// decorate (never set for digit strings or free text).
  bool decimal_hint = false;
};

ReportItem info_item(std::string name, std::string value);
ReportItem info_rational(std::string name, const Rational& value);
ReportItem info_count(std::string name, long value);
ReportItem checked_rational(std::string name, const Rational& value,
                            const Rational& expected);
ReportItem checked_count(std::string name, long value, long expected);
ReportItem checked_flag(std::string name, bool value, bool expected);
ReportItem checked_text(std::string name, std::string value, std::string expected);

/// Result of one command run: the command name, its parameters in display
/// order, the seed when the run is randomized, the reported items, and — for
/// aggregate runs — one child report per sub-check.
///
/// The wall-clock duration is carried for console display only.  The
/// serialized form excludes it (and any other run-varying data), so the
/// serialized report of a deterministic command is byte-identical across
/// runs, and byte-identical for a fixed seed when randomized.
struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::vector<ReportItem> results;
  std::vector<RunReport> children;
  double duration_seconds = 0.0;

  void param(std::string key, std::string value);
  void add(ReportItem item);

  /// Command plus parameters (and seed), e.g. "bounds(parties=3, dist=promise)".
  std::string label() const;

  long check_count() const;  // checked items here and in children
  long fail_count() const;
  bool all_passed() const { return fail_count() == 0; }
  /// Qualified names of every failed check, e.g. "label/item" for children.
  std::vector<std::string> failures() const;
};

/// Canonical JSON form (two-space indent, trailing newline, no durations).
std::string serialize_report(const RunReport& report);

/// Human-oriented text form for stdout.  `with_decimal` adds a 12-digit
/// decimal rendering in parentheses after each exact rational, never
/// replacing it.  Deterministic: contains no durations or timestamps.
std::string render_report(const RunReport& report, bool with_decimal);

/// 0 when every check passed, 1 otherwise.
int exit_code_for(const RunReport& report);

}  // namespace gyni
