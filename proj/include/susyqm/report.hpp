#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "susyqm/io.hpp"

namespace susyqm {

/// Provenance of an expected value.
namespace provenance {
inline constexpr const char* reference_table = "reference-table";  // published numerical value
inline constexpr const char* closed_form = "closed-form";          // analytic formula
inline constexpr const char* oracle = "oracle";                    // independent numerical computation
inline constexpr const char* property = "property";                // structural bound (residual, monotonicity)
inline constexpr const char* runtime = "runtime";                  // wall-clock limit
}  // namespace provenance

/// One comparison. `kind` is "abs" (|observed − expected| ≤ tolerance),
/// "below" (observed < tolerance, expected is the ideal value) or
/// "interval" (lower < observed < upper; expected is the reference).
struct Check {
  std::string group;
  std::string id;
  std::string description;
  std::string kind;
  std::string provenance;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
  bool wall_clock = false;
};

class VerificationReport {
 public:
  const Check& abs(std::string group, std::string id, std::string description, double expected, double observed,
                   double tolerance, std::string prov) {
    Check c{std::move(group), std::move(id), std::move(description), "abs", std::move(prov)};
    c.expected = expected;
    c.observed = observed;
    c.tolerance = tolerance;
    c.pass = std::isfinite(observed) && std::abs(observed - expected) <= tolerance;
    return push(std::move(c));
  }

  const Check& below(std::string group, std::string id, std::string description, double observed, double limit,
                     std::string prov, double ideal = 0.0) {
    Check c{std::move(group), std::move(id), std::move(description), "below", std::move(prov)};
    c.expected = ideal;
    c.observed = observed;
    c.tolerance = limit;
    c.pass = std::isfinite(observed) && observed < limit;
    return push(std::move(c));
  }

  const Check& interval(std::string group, std::string id, std::string description, double reference,
                        double observed, double lower, double upper, std::string prov) {
    Check c{std::move(group), std::move(id), std::move(description), "interval", std::move(prov)};
    c.expected = reference;
    c.observed = observed;
    c.lower = lower;
    c.upper = upper;
    c.tolerance = upper - lower;
    c.pass = observed > lower && observed < upper;
    return push(std::move(c));
  }

  /// Wall-clock check; observed seconds are left out of deterministic JSON.
  const Check& timing(std::string group, std::string id, std::string description, double seconds, double limit) {
    below(std::move(group), std::move(id), std::move(description), seconds, limit, provenance::runtime);
    checks_.back().wall_clock = true;
    return checks_.back();
  }

  /// Boolean structural fact recorded as observed 1/0 against expected 1.
  const Check& flag(std::string group, std::string id, std::string description, bool holds,
                    std::string prov = provenance::property) {
    return abs(std::move(group), std::move(id), std::move(description), 1.0, holds ? 1.0 : 0.0, 0.0, std::move(prov));
  }

  void note(std::string key, std::string text) { notes_.emplace_back(std::move(key), std::move(text)); }
  void merge(const VerificationReport& other) {
    for (const auto& c : other.checks_) checks_.push_back(c);
    for (const auto& n : other.notes_) notes_.push_back(n);
  }

  const std::vector<Check>& checks() const noexcept { return checks_; }
  bool overall() const noexcept {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }

  /// Groups in first-appearance order with their pass state.
  std::vector<std::pair<std::string, bool>> groups() const {
    std::vector<std::pair<std::string, bool>> out;
    for (const auto& c : checks_) {
      auto it = std::find_if(out.begin(), out.end(), [&](auto& g) { return g.first == c.group; });
      if (it == out.end())
        out.emplace_back(c.group, c.pass);
      else
        it->second = it->second && c.pass;
    }
    return out;
  }

  io::json to_json(bool with_timings = false) const {
    io::json arr = io::json::array();
    for (const auto& c : checks_) {
      io::json j = {{"group", c.group},         {"check_id", c.id},   {"description", c.description},
                    {"comparison", c.kind},     {"provenance", c.provenance}, {"expected", c.expected},
                    {"tolerance", c.tolerance}, {"pass", c.pass}};
      if (c.wall_clock && !with_timings)
        j["observed"] = nullptr;
      else
        j["observed"] = c.observed;
      if (c.kind == "interval") {
        j["lower"] = c.lower;
        j["upper"] = c.upper;
      }
      arr.push_back(std::move(j));
    }
    io::json notes = io::json::object();
    for (const auto& [k, v] : notes_) notes[k] = v;
    return {{"checks", arr}, {"overall", overall()}, {"notes", notes}};
  }

 private:
  const Check& push(Check c) {
    checks_.push_back(std::move(c));
    return checks_.back();
  }

  std::vector<Check> checks_;
  std::vector<std::pair<std::string, std::string>> notes_;
};

/// Writes the report as deterministic JSON. Wall-clock values are
/// included only on request.
inline void emit_report(const VerificationReport& report, const std::filesystem::path& path,
                        bool with_timings = false) {
  io::write_json(path, report.to_json(with_timings));
}

}  // namespace susyqm
