// Command-line front end: eval | check | member | closure | synthesize | verify-paper.
//
// Exit codes: 0 success/PASS, 1 negative result, 2 usage or parse error,
// 3 internal inconsistency (decider/oracle disagreement, failed replay).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <magari/magari.hpp>
#include <magari/report.hpp>

namespace {

using magari::report::json;

enum Exit : int { ok = 0, negative = 1, usage = 2, inconsistent = 3 };

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

magari::Equation parse_equation(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || text.find('=', eq + 1) != std::string::npos)
    throw usage_error("equation '" + text + "' must have the form L=R");
  return {magari::parse(text.substr(0, eq)), magari::parse(text.substr(eq + 1))};
}

std::size_t default_oracle_bound() {
  if (const char* env = std::getenv("MAGARI_ORACLE_BOUND")) {
    try {
      const long v = std::stol(env);
      if (v >= 1)
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw usage_error(std::string("MAGARI_ORACLE_BOUND must be a positive integer, got '") + env + "'");
  }
  return 5;
}

bool oracle_env_set() { return std::getenv("MAGARI_ORACLE_BOUND") != nullptr; }

struct Outcome {
  json result;
  int code = ok;
};

Outcome cmd_eval(const std::string& text, const std::vector<std::string>& assigns) {
  magari::Assignment a;
  for (const auto& s : assigns) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw usage_error("--assign expects var=element, got '" + s + "'");
    const std::string name = s.substr(0, eq);
    if (!magari::is_identifier(name))
      throw usage_error("invalid variable name '" + name + "'");
    a[name] = magari::parse_element(s.substr(eq + 1));
  }
  const magari::Formula f = magari::parse(text);
  Outcome o;
  o.result["formula"] = magari::print(f);
  o.result["value"] = magari::to_string(magari::evaluate(f, a));
  return o;
}

Outcome cmd_check(const std::vector<std::string>& hyps, const std::vector<std::string>& concls,
                  std::optional<std::size_t> oracle_bound) {
  if (concls.empty())
    throw usage_error("check needs at least one --concl");
  magari::QuasiQuery q;
  for (const auto& h : hyps)
    q.hypotheses.push_back(parse_equation(h));
  for (const auto& c : concls)
    q.conclusions.push_back(parse_equation(c));

  Outcome o;
  o.result["query"] = magari::report::query_json(q);
  const magari::Verdict v = magari::decide(q);
  const json vj = magari::report::verdict_json(v, q);
  for (const auto& [k, item] : vj.items())
    o.result[k] = item;
  o.code = v.valid() ? ok : negative;
  if (!v.valid() && !magari::replay(*v.counterexample, q))
    o.code = inconsistent;

  if (oracle_bound) {
    const auto witness = magari::brute_force(q, *oracle_bound);
    json oj;
    oj["bound"] = *oracle_bound;
    oj["found"] = witness.has_value();
    if (witness)
      oj["assignment"] = magari::report::assignment_json(*witness);
    const bool agree = !(witness && v.valid());
    oj["agreement"] = agree;
    o.result["oracle"] = oj;
    if (!agree)
      o.code = inconsistent;
  }
  return o;
}

Outcome cmd_member(std::size_t i, const std::string& text) {
  const magari::Formula f = magari::parse(text);
  const bool in = magari::member_K(magari::ClassId(i), f);
  Outcome o;
  o.result["class"] = i;
  o.result["formula"] = magari::print(f);
  o.result["member"] = in;
  o.code = in ? ok : negative;
  return o;
}

Outcome cmd_closure(const std::string& path, std::size_t vars, std::size_t depth, std::size_t cap) {
  std::ifstream in(path);
  if (!in)
    throw usage_error("cannot read signature file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  magari::Signature sigma;
  try {
    sigma = magari::Signature::parse(buf.str());
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  const auto r = magari::enumerate_closure(sigma, vars, depth, cap);
  Outcome o;
  o.result["signature"] = json::array();
  for (const auto& m : sigma.members)
    o.result["signature"].push_back(m.name + " := " + magari::print(m.formula));
  o.result["classes"] = json::array();
  for (const auto& f : r.classes)
    o.result["classes"].push_back(magari::print(f));
  o.result["count"] = r.classes.size();
  o.result["rounds"] = r.rounds;
  o.result["truncated"] = r.truncated;
  return o;
}

Outcome cmd_synthesize(const std::string& text) {
  const magari::Element e = magari::parse_element(text);
  const magari::Formula t = magari::synthesize_term(e);
  const magari::Element back = magari::evaluate_closed(t);
  Outcome o;
  o.result["element"] = magari::to_string(e);
  o.result["term"] = magari::print(t);
  o.result["round_trip"] = back == e ? "confirmed" : "FAILED (" + magari::to_string(back) + ")";
  o.code = back == e ? ok : inconsistent;
  return o;
}

Outcome cmd_verify_paper(std::size_t i_max, const std::vector<std::string>& witnesses, std::size_t bound) {
  if (i_max < 1)
    throw usage_error("--i-max must be at least 1");
  struct Cell {
    std::size_t i;
    std::string label;
    magari::Formula f;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 1; i <= i_max; ++i)
    for (const auto& w : witnesses)
      cells.push_back({i, w, w == "next" ? magari::neg_delta_power_term(i + 1) : magari::parse(w)});

  std::vector<std::future<magari::PrecompletenessReport>> jobs;
  for (const auto& c : cells)
    jobs.push_back(std::async(std::launch::async, [&c, bound] {
      return magari::verify_precompleteness(magari::ClassId(c.i), c.f, bound);
    }));

  Outcome o;
  bool pass = true;
  bool consistent = true;
  o.result["i_max"] = i_max;
  o.result["oracle_bound"] = bound;
  o.result["reports"] = json::array();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto r = jobs[k].get();
    pass = pass && r.pass();
    for (const auto& d : r.directions) {
      if (!d.verdict.valid() && !d.replayed)
        consistent = false;
      if (d.verdict.valid() && d.oracle_witness)
        consistent = false;
    }
    json rj = magari::report::precompleteness_json(r);
    rj["witness_label"] = cells[k].label;
    o.result["reports"].push_back(std::move(rj));
  }
  if (i_max >= 2) {
    const auto m = magari::pairwise_distinct(i_max);
    pass = pass && m.all_confirmed();
    o.result["distinctness"] = magari::report::separation_json(m);
  }
  o.result["aggregate"] = pass ? "PASS" : "FAIL";
  o.code = !consistent ? inconsistent : pass ? ok : negative;
  return o;
}

std::string echo(int argc, char** argv) {
  std::string s = "magari";
  for (int k = 1; k < argc; ++k) {
    s += ' ';
    s += argv[k];
  }
  return s;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computation and decision procedures for the free diagonalizable algebra"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit the report as JSON");

  std::string formula_text;
  std::vector<std::string> assigns;
  auto* eval = app.add_subcommand("eval", "Evaluate a formula");
  eval->add_option("formula", formula_text, "Formula text")->required();
  eval->add_option("--assign", assigns, "Binding var=element, e.g. p=01(0)");

  std::vector<std::string> hyps, concls;
  std::optional<std::size_t> oracle_bound;
  auto* check = app.add_subcommand("check", "Decide a quasi-identity");
  check->add_option("--hyp", hyps, "Hypothesis equation L=R");
  check->add_option("--concl", concls, "Conclusion equation L=R");
  check->add_option("--oracle-bound", oracle_bound, "Cross-check with brute force at this prefix bound")
      ->check(CLI::PositiveNumber);

  std::size_t class_index = 1;
  auto* member = app.add_subcommand("member", "Membership of a formula in K_i");
  member->add_option("--class", class_index, "Class index i >= 1")->required()->check(CLI::PositiveNumber);
  member->add_option("formula", formula_text, "Formula text")->required();

  std::string sigma_path;
  std::size_t vars = 1, depth = 3, cap = 64;
  auto* closure = app.add_subcommand("closure", "Enumerate the superposition closure of a system");
  closure->add_option("--sigma", sigma_path, "File with lines 'name := formula'")->required();
  closure->add_option("--vars", vars, "Number of variables");
  closure->add_option("--depth", depth, "Superposition rounds");
  closure->add_option("--cap", cap, "Maximum number of classes")->check(CLI::PositiveNumber);

  std::string element_text;
  auto* synth = app.add_subcommand("synthesize", "Closed term over {0, D, !, &, |} denoting an element");
  synth->add_option("element", element_text, "Element, e.g. 10(0)")->required();

  std::size_t i_max = 5;
  std::vector<std::string> witnesses{"!p", "Dp", "next"};
  std::optional<std::size_t> verify_bound;
  auto* verify = app.add_subcommand("verify-paper", "Verify the K_i precompleteness evidence for i = 1..N");
  verify->add_option("--i-max", i_max, "Largest class index")->check(CLI::PositiveNumber);
  verify->add_option("--witnesses", witnesses, "Comma-separated formulas outside K_i ('next' = !D^(i+1) 0)")
      ->delimiter(',');
  verify->add_option("--oracle-bound", verify_bound, "Brute-force prefix bound")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    if (*eval) {
      out = cmd_eval(formula_text, assigns);
    } else if (*check) {
      if (!oracle_bound && oracle_env_set())
        oracle_bound = default_oracle_bound();
      out = cmd_check(hyps, concls, oracle_bound);
    } else if (*member) {
      out = cmd_member(class_index, formula_text);
    } else if (*closure) {
      out = cmd_closure(sigma_path, vars, depth, cap);
    } else if (*synth) {
      out = cmd_synthesize(element_text);
    } else if (*verify) {
      out = cmd_verify_paper(i_max, witnesses, verify_bound ? *verify_bound : default_oracle_bound());
    }
  } catch (const magari::parse_error& e) {
    std::cerr << "magari: parse error: " << e.what() << "\n";
    return usage;
  } catch (const magari::unbound_variable& e) {
    std::cerr << "magari: " << e.what() << "\n";
    return usage;
  } catch (const magari::element_syntax_error& e) {
    std::cerr << "magari: " << e.what() << "\n";
    return usage;
  } catch (const usage_error& e) {
    std::cerr << "magari: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "magari: internal error: " << e.what() << "\n";
    return inconsistent;
  }
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);

  json report;
  report["command"] = echo(argc, argv);
  report["version"] = magari::report::version;
  report["result"] = std::move(out.result);
  report["duration_ms"] = static_cast<long long>(elapsed.count());
  if (as_json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << magari::report::to_text(report);
  return out.code;
}
