#pragma once

#include <string>

#include <json.hpp>

#include "decide.hpp"
#include "expressibility.hpp"
#include "syntax.hpp"

namespace magari::report {

using json = nlohmann::ordered_json;

inline constexpr const char* version = "1.0.0";

inline json assignment_json(const Assignment& a) {
  json j = json::object();
  for (const auto& [name, value] : a)
    j[name] = to_string(value);
  return j;
}

inline json equation_json(const Equation& e) { return print(e.lhs) + " = " + print(e.rhs); }

inline json query_json(const QuasiQuery& q) {
  json j;
  j["hypotheses"] = json::array();
  for (const auto& e : q.hypotheses)
    j["hypotheses"].push_back(equation_json(e));
  j["conclusions"] = json::array();
  for (const auto& e : q.conclusions)
    j["conclusions"].push_back(equation_json(e));
  return j;
}

/// Per-variable element text of the replay assignment, plus where it fails.
inline json lasso_json(const Lasso& l) {
  json j;
  j["assignment"] = assignment_json(l.to_assignment());
  j["word_length"] = l.prefix.size();
  j["violation_step"] = l.violation_step;
  j["conclusion"] = l.conclusion + 1;
  return j;
}

inline json verdict_json(const Verdict& v, const QuasiQuery& q) {
  json j;
  j["verdict"] = v.valid() ? "valid" : "counterexample";
  if (!v.valid()) {
    j["lasso"] = lasso_json(*v.counterexample);
    j["replay"] = replay(*v.counterexample, q) ? "confirmed" : "FAILED";
  }
  return j;
}

inline json precompleteness_json(const PrecompletenessReport& r) {
  json j;
  j["i"] = r.i;
  j["input"] = print(r.input);
  j["a_i"] = to_string(r.point);
  j["input_outside_class"] = r.input_outside_class;
  if (!r.input_outside_class) {
    j["status"] = "rejected: input belongs to K_" + std::to_string(r.i);
    return j;
  }
  if (r.c)
    j["c"] = to_string(*r.c);
  j["c_differs"] = r.c_differs;
  if (r.f_neg)
    j["f_neg"] = print(*r.f_neg);
  if (r.f_delta)
    j["f_delta"] = print(*r.f_delta);
  j["f_neg_in_class"] = r.f_neg_in_class;
  j["f_delta_in_class"] = r.f_delta_in_class;
  j["directions"] = json::array();
  for (const auto& d : r.directions) {
    json dj;
    dj["relation"] = d.name;
    dj["verdict"] = d.verdict.valid() ? "valid" : "counterexample";
    if (!d.verdict.valid()) {
      dj["lasso"] = lasso_json(*d.verdict.counterexample);
      dj["replay"] = d.replayed ? "confirmed" : "FAILED";
    }
    if (r.oracle_bound) {
      dj["oracle"] = d.oracle_witness ? "refuted" : "unrefuted";
      if (d.oracle_witness)
        dj["oracle_assignment"] = assignment_json(*d.oracle_witness);
    }
    j["directions"].push_back(std::move(dj));
  }
  if (r.oracle_bound)
    j["oracle_bound"] = *r.oracle_bound;
  j["status"] = r.pass() ? "PASS (displayed relations verified)" : "FAIL";
  return j;
}

inline json separation_json(const SeparationMatrix& m) {
  json j;
  j["i_max"] = m.i_max;
  j["separations"] = json::array();
  for (const auto& s : m.entries) {
    json e;
    e["excluded_from"] = s.i;
    e["member_of"] = s.j;
    e["witness"] = print(s.witness);
    e["confirmed"] = s.confirmed();
    j["separations"].push_back(std::move(e));
  }
  j["all_confirmed"] = m.all_confirmed();
  return j;
}

namespace detail {

inline std::string scalar_text(const json& v) {
  if (v.is_string())
    return v.get<std::string>();
  return v.dump();
}

inline void render(const json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (v.is_object()) {
    for (const auto& [key, item] : v.items()) {
      if (item.is_structured() && !item.empty()) {
        out += pad + key + ":\n";
        render(item, indent + 1, out);
      } else {
        out += pad + key + ": " + (item.is_structured() ? std::string(item.is_array() ? "[]" : "{}") : scalar_text(item)) + "\n";
      }
    }
  } else if (v.is_array()) {
    for (const auto& item : v) {
      if (item.is_structured()) {
        out += pad + "-\n";
        render(item, indent + 1, out);
      } else {
        out += pad + "- " + scalar_text(item) + "\n";
      }
    }
  } else {
    out += pad + scalar_text(v) + "\n";
  }
}

} // namespace detail

/// Line-oriented rendering of a report tree: `key: value`, nested blocks
/// indented by two spaces, array items prefixed with `-`.
inline std::string to_text(const json& tree) {
  std::string out;
  detail::render(tree, 0, out);
  return out;
}

} // namespace magari::report
