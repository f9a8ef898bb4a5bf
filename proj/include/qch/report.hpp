#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qch/core.hpp"

namespace qch {

/// What a reported value is expected to satisfy. Pass/fail is always derived
/// from (value, bound) on demand, never cached.
class Bound {
 public:
  enum class Kind { none, equals, at_most, at_least };

  static Bound none() { return Bound(Kind::none, 0.0, 0.0); }
  static Bound equals(double target, double tol) { return Bound(Kind::equals, target, tol); }
  static Bound at_most(double limit) { return Bound(Kind::at_most, limit, 0.0); }
  static Bound at_least(double limit) { return Bound(Kind::at_least, limit, 0.0); }

  bool pass(double value) const {
    switch (kind_) {
      case Kind::none: return true;
      case Kind::equals: return std::abs(value - target_) <= tol_;
      case Kind::at_most: return value <= target_;
      case Kind::at_least: return value >= target_;
    }
    return false;
  }

  std::string describe() const {
    char buf[64];
    switch (kind_) {
      case Kind::none: return "-";
      case Kind::equals:
        std::snprintf(buf, sizeof buf, "%.12g (tol %.3g)", target_, tol_);
        return buf;
      case Kind::at_most:
        std::snprintf(buf, sizeof buf, "<= %.6g", target_);
        return buf;
      case Kind::at_least:
        std::snprintf(buf, sizeof buf, ">= %.6g", target_);
        return buf;
    }
    return "-";
  }

 private:
  Bound(Kind k, double target, double tol) : kind_(k), target_(target), tol_(tol) {}
  Kind kind_;
  double target_;
  double tol_;
};

struct CheckLine {
  std::string label;
  double value;
  Bound bound;

  bool pass() const { return bound.pass(value); }
};

/// A structured error demonstration: a combination the engine must refuse,
/// together with the error kind it actually raised.
struct ErrorDemo {
  std::string context;
  std::string expected_kind;
  std::string raised_kind;  // empty if nothing was raised

  bool pass() const { return raised_kind == expected_kind; }
};

struct ScenarioReport {
  std::string name;
  std::vector<CheckLine> lines;
  std::vector<ErrorDemo> errors;
  std::vector<std::pair<std::string, Matrix>> matrices;  // labelled extra detail

  bool all_pass() const {
    for (const CheckLine& l : lines)
      if (!l.pass()) return false;
    for (const ErrorDemo& e : errors)
      if (!e.pass()) return false;
    return true;
  }
};

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_text(const ScenarioReport& r) {
  std::string out = "scenario: " + r.name + "\n";
  std::size_t width = 0;
  for (const CheckLine& l : r.lines) width = std::max(width, l.label.size());
  for (const CheckLine& l : r.lines) {
    out += l.pass() ? "  pass  " : "  FAIL  ";
    out += l.label;
    out.append(width - l.label.size() + 2, ' ');
    out += format_value(l.value);
    std::string expect = l.bound.describe();
    if (expect != "-") out += "  (expected " + expect + ")";
    out += "\n";
  }
  for (const ErrorDemo& e : r.errors) {
    out += e.pass() ? "  pass  " : "  FAIL  ";
    out += e.context + "  raised " + (e.raised_kind.empty() ? "<nothing>" : e.raised_kind) +
           ", expected " + e.expected_kind + "\n";
  }
  for (const auto& [label, m] : r.matrices) {
    out += "  " + label + ":\n";
    for (Index i = 0; i < m.rows(); ++i) {
      out += "    ";
      for (Index j = 0; j < m.cols(); ++j) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "(%+.6f%+.6fi) ", m(i, j).real(), m(i, j).imag());
        out += buf;
      }
      out += "\n";
    }
  }
  out += std::string(r.all_pass() ? "result: pass" : "result: FAIL") + "\n";
  return out;
}

inline nlohmann::json complex_to_json(const Complex& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json to_json(const ScenarioReport& r) {
  nlohmann::json j;
  j["scenario"] = r.name;
  j["pass"] = r.all_pass();
  j["lines"] = nlohmann::json::array();
  for (const CheckLine& l : r.lines) {
    j["lines"].push_back({{"label", l.label},
                          {"value", l.value},
                          {"expected", l.bound.describe()},
                          {"pass", l.pass()}});
  }
  j["errors"] = nlohmann::json::array();
  for (const ErrorDemo& e : r.errors) {
    j["errors"].push_back({{"context", e.context},
                           {"expected", e.expected_kind},
                           {"raised", e.raised_kind},
                           {"pass", e.pass()}});
  }
  j["matrices"] = nlohmann::json::object();
  for (const auto& [label, m] : r.matrices) j["matrices"][label] = matrix_to_json(m);
  return j;
}

}  // namespace qch
