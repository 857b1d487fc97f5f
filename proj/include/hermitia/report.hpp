#pragma once

// Machine-readable run reports. Complex matrices serialize row-major as
// nested arrays of [re, im] pairs; vectors as arrays of [re, im].

#include <json.hpp>
#include <string>
#include <vector>

#include "hermitia/sampling.hpp"

namespace hermitia {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "hermitia-report/1";

using Json = nlohmann::json;

struct Check {
  std::string name;
  double value = 0;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::string note;
};

/// pass iff residual <= tolerance (NaN fails).
inline Check make_check(std::string name, double value, double residual, double tolerance, std::string note = {}) {
  return Check{std::move(name), value, residual, tolerance, residual <= tolerance, std::move(note)};
}

/// Boolean check: residual 0 when the condition holds, 1 otherwise.
inline Check make_flag(std::string name, bool condition, double value = 0, std::string note = {}) {
  return Check{std::move(name), value, condition ? 0.0 : 1.0, 0.0, condition, std::move(note)};
}

inline Json to_json(const Check& c) {
  Json j{{"name", c.name}, {"value", c.value}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline Json to_json(const cd& z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

/// Accepts [[re, im], ...]; bare numbers are read as real entries.
inline Vector vector_from_json(const Json& j) {
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    v(static_cast<Index>(i)) = e.is_array() ? cd(e.at(0).get<double>(), e.at(1).get<double>()) : cd(e.get<double>(), 0);
  }
  return v;
}

struct Report {
  std::string command;
  Json config = Json::object();
  std::vector<Check> checks;
  Json data = Json::object();
  double wall_time = 0;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  Json to_json() const {
    Json checks_json = Json::array();
    for (const auto& c : checks) checks_json.push_back(hermitia::to_json(c));
    return Json{{"schema", kReportSchema}, {"version", kVersion}, {"command", command}, {"config", config},
                {"checks", checks_json}, {"data", data}, {"pass", pass()}, {"wall_time_s", wall_time}};
  }
};

}  // namespace hermitia
