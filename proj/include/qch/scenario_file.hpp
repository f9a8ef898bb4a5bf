#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qch/core.hpp"
#include "qch/errors.hpp"
#include "qch/framework.hpp"
#include "qch/hilbert.hpp"
#include "qch/histories.hpp"
#include "qch/logic.hpp"
#include "qch/probability.hpp"
#include "qch/report.hpp"

namespace qch {

/// Declarative scenario file: a dimension, named kets/projectors/frameworks,
/// and a list of queries against them. Complex numbers are [re, im] pairs and
/// matrices are row-major, matching the library's tensor layout.
struct ScenarioFile {
  struct ProjectorDef {
    std::optional<Matrix> matrix;    // exactly one of matrix / span is set
    std::vector<std::string> span;
  };

  struct Query {
    std::string type;  // born|joint|conditional|meet|join|compatible|framework-check|refinement|two-time
    std::map<std::string, std::string> refs;  // role -> defined name
    std::string mode;                         // two-time only: joint|conditional
    std::optional<double> expect_number;
    std::optional<bool> expect_bool;
    std::optional<double> tol;
  };

  Index dimension = 0;
  std::vector<std::pair<std::string, Vector>> kets;
  std::vector<std::pair<std::string, ProjectorDef>> projectors;
  std::vector<std::pair<std::string, std::vector<std::string>>> frameworks;
  std::vector<Query> queries;
};

namespace detail {

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] inline void schema_error(const std::string& what, const std::string& path) {
  throw ParseError(what, 0, 0, path);
}

inline Complex parse_complex(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    schema_error("complex numbers are [re, im] pairs", path);
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Vector parse_vector(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error("a ket is a nonempty array of [re, im] pairs", path);
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = parse_complex(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

inline Matrix parse_matrix(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error("a matrix is a nonempty array of rows", path);
  const std::size_t rows = j.size();
  Matrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    const nlohmann::json& row = j[i];
    std::string rpath = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != rows)
      schema_error("matrix rows must all have length " + std::to_string(rows), rpath);
    if (i == 0) m.resize(static_cast<Index>(rows), static_cast<Index>(rows));
    for (std::size_t k = 0; k < row.size(); ++k)
      m(static_cast<Index>(i), static_cast<Index>(k)) =
          parse_complex(row[k], rpath + "[" + std::to_string(k) + "]");
  }
  return m;
}

inline std::string require_string(const nlohmann::json& obj, const std::string& key,
                                  const std::string& path) {
  if (!obj.contains(key) || !obj[key].is_string())
    schema_error("missing or non-string field '" + key + "'", path);
  return obj[key].get<std::string>();
}

}  // namespace detail

/// Total: any input text yields either a ScenarioFile or a ParseError. Syntax
/// errors carry line/column; schema errors carry a JSON-path context. Name
/// resolution and dimension consistency are enforced when the file is run.
inline ScenarioFile parse_scenario_file(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(e.what(), line, col);
  }
  if (!doc.is_object()) detail::schema_error("top level must be an object", "$");

  ScenarioFile f;
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer() ||
      doc["dimension"].get<long long>() < 1)
    detail::schema_error("'dimension' must be a positive integer", "$.dimension");
  f.dimension = doc["dimension"].get<Index>();

  if (doc.contains("kets")) {
    if (!doc["kets"].is_object()) detail::schema_error("'kets' must be an object", "$.kets");
    for (auto it = doc["kets"].begin(); it != doc["kets"].end(); ++it)
      f.kets.emplace_back(it.key(), detail::parse_vector(it.value(), "$.kets." + it.key()));
  }

  if (doc.contains("projectors")) {
    if (!doc["projectors"].is_object())
      detail::schema_error("'projectors' must be an object", "$.projectors");
    for (auto it = doc["projectors"].begin(); it != doc["projectors"].end(); ++it) {
      std::string path = "$.projectors." + it.key();
      const nlohmann::json& def = it.value();
      if (!def.is_object()) detail::schema_error("projector definition must be an object", path);
      ScenarioFile::ProjectorDef pd;
      if (def.contains("matrix") == def.contains("span"))
        detail::schema_error("projector needs exactly one of 'matrix' or 'span'", path);
      if (def.contains("matrix")) {
        pd.matrix = detail::parse_matrix(def["matrix"], path + ".matrix");
      } else {
        if (!def["span"].is_array() || def["span"].empty())
          detail::schema_error("'span' must be a nonempty array of ket names", path + ".span");
        for (std::size_t i = 0; i < def["span"].size(); ++i) {
          if (!def["span"][i].is_string())
            detail::schema_error("span entries are ket names", path + ".span[" + std::to_string(i) + "]");
          pd.span.push_back(def["span"][i].get<std::string>());
        }
      }
      f.projectors.emplace_back(it.key(), std::move(pd));
    }
  }

  if (doc.contains("frameworks")) {
    if (!doc["frameworks"].is_object())
      detail::schema_error("'frameworks' must be an object", "$.frameworks");
    for (auto it = doc["frameworks"].begin(); it != doc["frameworks"].end(); ++it) {
      std::string path = "$.frameworks." + it.key();
      if (!it.value().is_array() || it.value().empty())
        detail::schema_error("a framework is a nonempty array of projector names", path);
      std::vector<std::string> members;
      for (std::size_t i = 0; i < it.value().size(); ++i) {
        if (!it.value()[i].is_string())
          detail::schema_error("framework entries are projector names",
                               path + "[" + std::to_string(i) + "]");
        members.push_back(it.value()[i].get<std::string>());
      }
      f.frameworks.emplace_back(it.key(), std::move(members));
    }
  }

  if (doc.contains("queries")) {
    if (!doc["queries"].is_array()) detail::schema_error("'queries' must be an array", "$.queries");
    for (std::size_t qi = 0; qi < doc["queries"].size(); ++qi) {
      std::string path = "$.queries[" + std::to_string(qi) + "]";
      const nlohmann::json& q = doc["queries"][qi];
      if (!q.is_object()) detail::schema_error("query must be an object", path);
      ScenarioFile::Query query;
      query.type = detail::require_string(q, "type", path);

      auto ref = [&](const char* role) { query.refs[role] = detail::require_string(q, role, path); };
      auto opt_ref = [&](const char* role) {
        if (q.contains(role)) query.refs[role] = detail::require_string(q, role, path);
      };
      if (query.type == "born") {
        ref("projector");
        ref("state");
      } else if (query.type == "joint") {
        ref("a");
        ref("b");
        ref("state");
      } else if (query.type == "conditional") {
        ref("target");
        ref("given");
        ref("state");
      } else if (query.type == "meet" || query.type == "join" || query.type == "compatible") {
        ref("a");
        ref("b");
      } else if (query.type == "framework-check" || query.type == "refinement") {
        ref("a");
        ref("b");
      } else if (query.type == "two-time") {
        ref("state");
        ref("p1");
        ref("p3");
        opt_ref("measurement");
        if (q.contains("mode")) {
          query.mode = detail::require_string(q, "mode", path);
          if (query.mode != "joint" && query.mode != "conditional")
            detail::schema_error("two-time 'mode' is 'joint' or 'conditional'", path + ".mode");
        } else {
          query.mode = "joint";
        }
      } else {
        detail::schema_error("unknown query type '" + query.type + "'", path + ".type");
      }

      if (q.contains("expect")) {
        if (q["expect"].is_boolean())
          query.expect_bool = q["expect"].get<bool>();
        else if (q["expect"].is_number())
          query.expect_number = q["expect"].get<double>();
        else
          detail::schema_error("'expect' must be a number or boolean", path + ".expect");
      }
      if (q.contains("tol")) {
        if (!q["tol"].is_number() || q["tol"].get<double>() < 0)
          detail::schema_error("'tol' must be a nonnegative number", path + ".tol");
        query.tol = q["tol"].get<double>();
      }
      f.queries.push_back(std::move(query));
    }
  }
  return f;
}

inline nlohmann::json to_json(const ScenarioFile& f) {
  nlohmann::json doc;
  doc["dimension"] = f.dimension;
  if (!f.kets.empty()) {
    doc["kets"] = nlohmann::json::object();
    for (const auto& [name, v] : f.kets) {
      nlohmann::json arr = nlohmann::json::array();
      for (Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v(i)));
      doc["kets"][name] = std::move(arr);
    }
  }
  if (!f.projectors.empty()) {
    doc["projectors"] = nlohmann::json::object();
    for (const auto& [name, def] : f.projectors) {
      nlohmann::json d = nlohmann::json::object();
      if (def.matrix)
        d["matrix"] = matrix_to_json(*def.matrix);
      else
        d["span"] = def.span;
      doc["projectors"][name] = std::move(d);
    }
  }
  if (!f.frameworks.empty()) {
    doc["frameworks"] = nlohmann::json::object();
    for (const auto& [name, members] : f.frameworks) doc["frameworks"][name] = members;
  }
  doc["queries"] = nlohmann::json::array();
  for (const auto& q : f.queries) {
    nlohmann::json jq;
    jq["type"] = q.type;
    for (const auto& [role, name] : q.refs) jq[role] = name;
    if (q.type == "two-time") jq["mode"] = q.mode;
    if (q.expect_bool) jq["expect"] = *q.expect_bool;
    if (q.expect_number) jq["expect"] = *q.expect_number;
    if (q.tol) jq["tol"] = *q.tol;
    doc["queries"].push_back(std::move(jq));
  }
  return doc;
}

inline std::string serialize_scenario_file(const ScenarioFile& f) { return to_json(f).dump(2); }

/// Resolves names, builds the declared objects, executes every query, and
/// returns the results as a report. Raises UnknownName / DimensionMismatch /
/// module errors with the offending query or definition in the message.
inline ScenarioReport run_scenario_file(const ScenarioFile& f, double tol = global_tolerance()) {
  std::map<std::string, Ket> kets;
  for (const auto& [name, v] : f.kets) {
    if (v.size() != f.dimension)
      throw DimensionMismatch("ket '" + name + "' has dim " + std::to_string(v.size()) +
                              ", file dimension is " + std::to_string(f.dimension));
    kets.emplace(name, Ket(v));
  }
  std::map<std::string, Projector> projectors;
  for (const auto& [name, def] : f.projectors) {
    if (def.matrix) {
      if (def.matrix->rows() != f.dimension)
        throw DimensionMismatch("projector '" + name + "' has dim " +
                                std::to_string(def.matrix->rows()));
      projectors.emplace(name, Projector(*def.matrix, tol));
    } else {
      std::vector<Ket> span;
      for (const std::string& kname : def.span) {
        auto it = kets.find(kname);
        if (it == kets.end()) throw UnknownName(kname, "span of projector '" + name + "'");
        span.push_back(it->second);
      }
      projectors.emplace(name, projector_from_span(span, tol));
    }
  }
  std::map<std::string, Framework> frameworks;
  for (const auto& [name, members] : f.frameworks) {
    std::vector<Projector> elements;
    std::vector<std::string> names;
    for (const std::string& pname : members) {
      auto it = projectors.find(pname);
      if (it == projectors.end()) throw UnknownName(pname, "framework '" + name + "'");
      elements.push_back(it->second);
      names.push_back(pname);
    }
    frameworks.emplace(name, make_framework(std::move(elements), std::move(names), tol));
  }

  auto ket_ref = [&](const ScenarioFile::Query& q, const char* role, int qi) -> const Ket& {
    auto it = kets.find(q.refs.at(role));
    if (it == kets.end()) throw UnknownName(q.refs.at(role), "query " + std::to_string(qi));
    return it->second;
  };
  auto proj_ref = [&](const ScenarioFile::Query& q, const char* role, int qi) -> const Projector& {
    auto it = projectors.find(q.refs.at(role));
    if (it == projectors.end()) throw UnknownName(q.refs.at(role), "query " + std::to_string(qi));
    return it->second;
  };
  auto fw_ref = [&](const ScenarioFile::Query& q, const char* role, int qi) -> const Framework& {
    auto it = frameworks.find(q.refs.at(role));
    if (it == frameworks.end()) throw UnknownName(q.refs.at(role), "query " + std::to_string(qi));
    return it->second;
  };

  ScenarioReport report;
  report.name = "check";
  for (std::size_t qi = 0; qi < f.queries.size(); ++qi) {
    const ScenarioFile::Query& q = f.queries[qi];
    const double qtol = q.tol.value_or(tol);
    std::string label = "q" + std::to_string(qi) + " " + q.type;
    auto number_bound = [&]() {
      return q.expect_number ? Bound::equals(*q.expect_number, qtol) : Bound::none();
    };
    auto bool_bound = [&]() {
      return q.expect_bool ? Bound::equals(*q.expect_bool ? 1.0 : 0.0, 0.5) : Bound::none();
    };

    if (q.type == "born") {
      report.lines.push_back({label, born_probability(proj_ref(q, "projector", qi),
                                                      ket_ref(q, "state", qi), tol),
                              number_bound()});
    } else if (q.type == "joint") {
      report.lines.push_back(
          {label, joint_probability(proj_ref(q, "a", qi), proj_ref(q, "b", qi),
                                    ket_ref(q, "state", qi), tol),
           number_bound()});
    } else if (q.type == "conditional") {
      report.lines.push_back(
          {label, conditional_probability(proj_ref(q, "target", qi), proj_ref(q, "given", qi),
                                          ket_ref(q, "state", qi), tol),
           number_bound()});
    } else if (q.type == "meet" || q.type == "join") {
      Projector result = q.type == "meet" ? meet(proj_ref(q, "a", qi), proj_ref(q, "b", qi))
                                          : join(proj_ref(q, "a", qi), proj_ref(q, "b", qi));
      report.lines.push_back({label + " rank", static_cast<double>(result.rank()), number_bound()});
      report.matrices.emplace_back(label, result.matrix());
    } else if (q.type == "compatible") {
      bool c = compatible(proj_ref(q, "a", qi), proj_ref(q, "b", qi), tol);
      report.lines.push_back({label, c ? 1.0 : 0.0, bool_bound()});
    } else if (q.type == "framework-check") {
      bool c = frameworks_compatible(fw_ref(q, "a", qi), fw_ref(q, "b", qi), tol);
      report.lines.push_back({label + (c ? " compatible" : " incompatible"), c ? 1.0 : 0.0,
                              bool_bound()});
    } else if (q.type == "refinement") {
      Framework r = common_refinement(fw_ref(q, "a", qi), fw_ref(q, "b", qi), tol);
      report.lines.push_back({label + " elements", static_cast<double>(r.size()), number_bound()});
      for (std::size_t e = 0; e < r.size(); ++e)
        report.matrices.emplace_back(label + " " + r.name(e), r.element(e).matrix());
    } else if (q.type == "two-time") {
      const Ket& state = ket_ref(q, "state", qi);
      TwoTimeContext ctx{state, Dynamics::trivial(f.dimension, 3), 1, 3, {}};
      if (q.refs.count("measurement"))
        ctx.measurement = std::make_pair(2, fw_ref(q, "measurement", qi));
      double value = q.mode == "conditional"
                         ? two_time_conditional(proj_ref(q, "p3", qi), proj_ref(q, "p1", qi), ctx, tol)
                         : two_time_joint(proj_ref(q, "p1", qi), proj_ref(q, "p3", qi), ctx, tol);
      report.lines.push_back({label + " " + q.mode, value, number_bound()});
    }
  }
  return report;
}

}  // namespace qch
