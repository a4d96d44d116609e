#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "decide.hpp"
#include "element.hpp"
#include "eval.hpp"
#include "formula.hpp"
#include "syntax.hpp"

namespace magari {

/// Index i >= 1 of the class K_i of formulas preserving x = ¬Δ^i 0.
class ClassId {
public:
  explicit ClassId(std::size_t i) : i_(i) {
    if (i == 0)
      throw std::invalid_argument("class index must be at least 1");
  }
  std::size_t index() const noexcept { return i_; }

private:
  std::size_t i_;
};

/// a_i = ¬Δ^i 0, the element whose one-element relation K_i preserves.
inline Element class_point(ClassId k) { return neg_delta_power(k.index()); }
inline Formula class_point_term(ClassId k) { return neg_delta_power_term(k.index()); }

/// f is in K_i iff binding every variable to a_i yields a_i.  A closed
/// formula is in K_i iff its value is a_i.
inline bool member_K(ClassId k, const Formula& f) {
  const Element point = class_point(k);
  Assignment a;
  for (const auto& v : free_vars(f))
    a[v] = point;
  return evaluate(f, a) == point;
}

class precondition_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// F(¬Δ^i 0, ..., ¬Δ^i 0) as a closed term.
inline Formula constant_term(ClassId k, const Formula& f) {
  Bindings b;
  for (const auto& v : free_vars(f))
    b.emplace(v, class_point_term(k));
  return substitute(f, b);
}

/// The constant c = F(a_i, ..., a_i); rejects F in K_i, where c would equal a_i.
inline Element build_c(ClassId k, const Formula& f) {
  const Element c = evaluate_closed(constant_term(k, f));
  if (c == class_point(k))
    throw precondition_error("formula " + print(f) + " belongs to K_" + std::to_string(k.index()));
  return c;
}

/// (∇¬(p∼q) & ((¬p∼q) ∼ C)) ∨ (∇(p∼q) & A), with A = ¬Δ^i 0 and C = F(A, ..., A).
inline Formula build_F_neg(ClassId k, const Formula& f) {
  (void)build_c(k, f);
  const Formula p = Formula::var("p");
  const Formula q = Formula::var("q");
  const Formula same = Formula::equivalence(p, q);
  const Formula c = constant_term(k, f);
  const Formula a = class_point_term(k);
  return Formula::disjunction(
      Formula::conjunction(
          Formula::nabla(Formula::negation(same)),
          Formula::equivalence(Formula::equivalence(Formula::negation(p), q), c)),
      Formula::conjunction(Formula::nabla(same), a));
}

/// (∇q & ((Δp∼q) ∼ C)) ∨ (¬∇q & A).
inline Formula build_F_delta(ClassId k, const Formula& f) {
  (void)build_c(k, f);
  const Formula p = Formula::var("p");
  const Formula q = Formula::var("q");
  const Formula c = constant_term(k, f);
  const Formula a = class_point_term(k);
  return Formula::disjunction(
      Formula::conjunction(Formula::nabla(q),
                           Formula::equivalence(Formula::equivalence(Formula::delta(p), q), c)),
      Formula::conjunction(Formula::negation(Formula::nabla(q)), a));
}

/// \brief Data of a parametric definition of `target` by equations.
///
/// Claims that (target = π) implies every pair equation under the
/// substitution [π₁/D₁]...[π_l/D_l], and that the pair equations jointly
/// imply (target = π).  π and the πₖ must not occur in the target.
struct ParametricWitness {
  Formula target;
  std::string output_var;
  std::vector<std::string> aux_vars;
  std::vector<Equation> pairs;
  std::vector<Formula> substitutions; // one per aux variable
};

class freshness_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct WitnessCheck {
  QuasiQuery forward_query;
  QuasiQuery backward_query;
  Verdict forward;
  Verdict backward;

  bool accepted() const noexcept { return forward.valid() && backward.valid(); }
};

inline QuasiQuery witness_forward_query(const ParametricWitness& w) {
  Bindings b;
  for (std::size_t k = 0; k < w.aux_vars.size(); ++k)
    b.emplace(w.aux_vars[k], w.substitutions[k]);
  QuasiQuery q;
  q.hypotheses.push_back({w.target, Formula::var(w.output_var)});
  for (const auto& e : w.pairs)
    q.conclusions.push_back({substitute(e.lhs, b), substitute(e.rhs, b)});
  return q;
}

inline QuasiQuery witness_backward_query(const ParametricWitness& w) {
  QuasiQuery q;
  q.hypotheses = w.pairs;
  q.conclusions.push_back({w.target, Formula::var(w.output_var)});
  return q;
}

inline WitnessCheck check_parametric_witness(const ParametricWitness& w) {
  if (w.aux_vars.size() != w.substitutions.size())
    throw std::invalid_argument("parametric witness: one substitution per auxiliary variable");
  const auto target_vars = free_vars(w.target);
  auto occurs = [&](const std::string& v) {
    return std::binary_search(target_vars.begin(), target_vars.end(), v);
  };
  if (occurs(w.output_var))
    throw freshness_error("output variable " + w.output_var + " occurs in the target");
  for (const auto& v : w.aux_vars)
    if (occurs(v) || v == w.output_var)
      throw freshness_error("auxiliary variable " + v + " is not fresh");

  WitnessCheck r{witness_forward_query(w), witness_backward_query(w), {}, {}};
  r.forward = decide(r.forward_query);
  r.backward = decide(r.backward_query);
  return r;
}

/// (¬p = q) defined by F_¬(p, q) = C.
inline ParametricWitness negation_witness(ClassId k, const Formula& f) {
  return {Formula::negation(Formula::var("p")), "q", {}, {{build_F_neg(k, f), constant_term(k, f)}}, {}};
}

/// (Δp = q) defined by F_Δ(p, q) = C.
inline ParametricWitness delta_witness(ClassId k, const Formula& f) {
  return {Formula::delta(Formula::var("p")), "q", {}, {{build_F_delta(k, f), constant_term(k, f)}}, {}};
}

/// Outcome of checking that K_i ∪ {F} parametrically expresses ¬ and Δ.
///
/// PASS certifies the displayed facts (F ∉ K_i, c ≠ a_i, F_¬ and F_Δ in
/// K_i, all four implications valid); the completeness criterion that turns
/// them into precompleteness is not re-proved here.
struct PrecompletenessReport {
  struct Direction {
    std::string name;
    QuasiQuery query;
    Verdict verdict;
    bool replayed = false;                    // counterexample confirmed by exact evaluation
    std::optional<Assignment> oracle_witness; // brute-force refutation, if any
  };

  std::size_t i = 0;
  Formula input = Formula::zero();
  Element point;
  std::optional<Element> c;
  bool input_outside_class = false;
  bool c_differs = false;
  bool f_neg_in_class = false;
  bool f_delta_in_class = false;
  std::optional<Formula> f_neg;
  std::optional<Formula> f_delta;
  std::vector<Direction> directions;
  std::optional<std::size_t> oracle_bound;

  bool pass() const {
    if (!(input_outside_class && c_differs && f_neg_in_class && f_delta_in_class))
      return false;
    if (directions.size() != 4)
      return false;
    return std::all_of(directions.begin(), directions.end(), [](const Direction& d) {
      return d.verdict.valid() && !d.oracle_witness.has_value();
    });
  }
};

inline PrecompletenessReport verify_precompleteness(ClassId k, const Formula& f,
                                                    std::optional<std::size_t> oracle_bound = {}) {
  PrecompletenessReport r;
  r.i = k.index();
  r.input = f;
  r.point = class_point(k);
  r.oracle_bound = oracle_bound;
  r.input_outside_class = !member_K(k, f);
  if (!r.input_outside_class)
    return r;

  r.c = evaluate_closed(constant_term(k, f));
  r.c_differs = *r.c != r.point;
  if (!r.c_differs)
    return r;

  r.f_neg = build_F_neg(k, f);
  r.f_delta = build_F_delta(k, f);
  r.f_neg_in_class = member_K(k, *r.f_neg);
  r.f_delta_in_class = member_K(k, *r.f_delta);

  const WitnessCheck neg = check_parametric_witness(negation_witness(k, f));
  const WitnessCheck del = check_parametric_witness(delta_witness(k, f));
  const std::pair<const char*, std::pair<const QuasiQuery*, const Verdict*>> runs[] = {
      {"(!p = q) => (F_neg(p,q) = c)", {&neg.forward_query, &neg.forward}},
      {"(F_neg(p,q) = c) => (!p = q)", {&neg.backward_query, &neg.backward}},
      {"(D p = q) => (F_delta(p,q) = c)", {&del.forward_query, &del.forward}},
      {"(F_delta(p,q) = c) => (D p = q)", {&del.backward_query, &del.backward}},
  };
  for (const auto& [name, run] : runs) {
    PrecompletenessReport::Direction d{name, *run.first, *run.second, false, std::nullopt};
    if (!d.verdict.valid())
      d.replayed = replay(*d.verdict.counterexample, d.query);
    if (oracle_bound)
      d.oracle_witness = brute_force(d.query, *oracle_bound);
    r.directions.push_back(std::move(d));
  }
  return r;
}

/// ¬Δ^j 0 lies in K_j but not in K_i.
struct Separation {
  std::size_t i = 0; // class that excludes the witness
  std::size_t j = 0; // class that contains it
  Formula witness = Formula::zero();
  bool in_own_class = false;
  bool in_other_class = false;

  bool confirmed() const noexcept { return in_own_class && !in_other_class; }
};

struct SeparationMatrix {
  std::size_t i_max = 0;
  std::vector<Separation> entries; // (i, j) with i != j, row-major

  /// Entry for (i, j); null on the diagonal.
  const Separation* at(std::size_t i, std::size_t j) const {
    for (const auto& s : entries)
      if (s.i == i && s.j == j)
        return &s;
    return nullptr;
  }

  bool all_confirmed() const {
    return std::all_of(entries.begin(), entries.end(), [](const Separation& s) { return s.confirmed(); });
  }
};

inline SeparationMatrix pairwise_distinct(std::size_t i_max) {
  if (i_max < 2)
    throw std::invalid_argument("pairwise_distinct: need at least two classes");
  SeparationMatrix m{i_max, {}};
  for (std::size_t i = 1; i <= i_max; ++i)
    for (std::size_t j = 1; j <= i_max; ++j) {
      if (i == j)
        continue;
      Separation s{i, j, neg_delta_power_term(j)};
      s.in_own_class = member_K(ClassId(j), s.witness);
      s.in_other_class = member_K(ClassId(i), s.witness);
      m.entries.push_back(std::move(s));
    }
  return m;
}

/// A named member of a system of formulas; its parameters are its free
/// variables in sorted order.
struct Symbol {
  std::string name;
  Formula formula;
  std::vector<std::string> params;

  std::size_t arity() const noexcept { return params.size(); }
};

struct Signature {
  std::vector<Symbol> members;

  void add(std::string name, Formula f) {
    auto params = free_vars(f);
    members.push_back({std::move(name), std::move(f), std::move(params)});
  }

  /// One member per line, `name := formula`; blank lines are ignored.
  static Signature parse(std::string_view text) {
    Signature s;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos)
        continue;
      const auto sep = line.find(":=");
      if (sep == std::string::npos)
        throw std::invalid_argument("signature line " + std::to_string(lineno) + ": expected 'name := formula'");
      std::string name = line.substr(0, sep);
      const auto first = name.find_first_not_of(" \t");
      const auto last = name.find_last_not_of(" \t");
      if (first == std::string::npos)
        throw std::invalid_argument("signature line " + std::to_string(lineno) + ": empty name");
      name = name.substr(first, last - first + 1);
      try {
        s.add(name, magari::parse(line.substr(sep + 2)));
      } catch (const parse_error& e) {
        throw std::invalid_argument("signature line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    return s;
  }
};

struct ClosureResult {
  std::vector<Formula> classes; // one representative per semantic class
  std::size_t rounds = 0;       // superposition rounds performed
  bool truncated = false;       // cap reached before the depth was exhausted
};

namespace detail {

inline std::string closure_var_name(std::size_t k) {
  static constexpr const char* names[] = {"p", "q", "r", "s", "t"};
  return k < 5 ? names[k] : "x" + std::to_string(k);
}

} // namespace detail

/// \brief Breadth-first superposition closure of a system over `vars`
/// variables.
///
/// Level 0 holds the variables and the nullary members; each round applies
/// every member to every tuple of known classes that uses at least one class
/// found in the previous round.  Formulas are identified up to equality in
/// the algebra, confirmed by decide; cheap evaluations on fixed sample
/// assignments only rule out candidates.
inline ClosureResult enumerate_closure(const Signature& sigma, std::size_t vars, std::size_t depth,
                                       std::size_t cap) {
  if (cap == 0)
    throw std::invalid_argument("enumerate_closure: cap must be positive");

  std::vector<std::string> names;
  for (std::size_t k = 0; k < vars; ++k)
    names.push_back(detail::closure_var_name(k));

  std::vector<Assignment> samples;
  {
    const auto pool = canonical_elements(3);
    std::uint64_t seed = 0x2545F4914F6CDD1Dull;
    for (std::size_t s = 0; s < 12; ++s) {
      Assignment a;
      for (const auto& n : names) {
        seed = seed * 6364136223846793005ull + 1442695040888963407ull;
        a[n] = pool[(seed >> 33) % pool.size()];
      }
      samples.push_back(std::move(a));
    }
  }

  ClosureResult out;
  std::vector<std::vector<Element>> prints;
  auto fingerprint = [&](const Formula& f) {
    std::vector<Element> fp;
    for (const auto& a : samples)
      fp.push_back(evaluate(f, a));
    return fp;
  };
  // Returns false once the cap stops the enumeration.
  auto offer = [&](const Formula& f) {
    auto fp = fingerprint(f);
    for (std::size_t k = 0; k < out.classes.size(); ++k) {
      if (prints[k] != fp)
        continue;
      if (decide({{}, {{out.classes[k], f}}}).valid())
        return true;
    }
    if (out.classes.size() == cap) {
      out.truncated = true;
      return false;
    }
    out.classes.push_back(f);
    prints.push_back(std::move(fp));
    return true;
  };

  for (const auto& n : names)
    if (!offer(Formula::var(n)))
      return out;
  for (const auto& m : sigma.members)
    if (m.arity() == 0 && !offer(m.formula))
      return out;

  std::size_t fresh_from = 0;
  for (std::size_t round = 1; round <= depth; ++round) {
    const std::size_t known = out.classes.size();
    const std::vector<Formula> snapshot(out.classes.begin(), out.classes.end());
    for (const auto& m : sigma.members) {
      const std::size_t k = m.arity();
      if (k == 0 || known == 0)
        continue;
      std::vector<std::size_t> pick(k, 0);
      for (;;) {
        const bool uses_fresh =
            std::any_of(pick.begin(), pick.end(), [&](std::size_t x) { return x >= fresh_from; });
        if (uses_fresh) {
          Bindings b;
          for (std::size_t j = 0; j < k; ++j)
            b.emplace(m.params[j], snapshot[pick[j]]);
          if (!offer(substitute(m.formula, b))) {
            out.rounds = round;
            return out;
          }
        }
        std::size_t j = k;
        while (j > 0 && ++pick[j - 1] == known)
          pick[--j] = 0;
        if (j == 0)
          break;
      }
    }
    out.rounds = round;
    if (out.classes.size() == known)
      break;
    fresh_from = known;
  }
  return out;
}

/// \brief Closed term over {0, Δ, ¬, &, ∨} denoting e.
///
/// Position k is picked out by Δ^k 0 & ¬Δ^{k-1} 0; tail-1 elements are the
/// complement of the term for their complement.
inline Formula synthesize_term(const Element& e) {
  if (e.tail())
    return Formula::negation(synthesize_term(complement(e)));
  std::optional<Formula> acc;
  for (std::size_t k = 1; k <= e.prefix_length(); ++k) {
    if (!e.coordinate(k))
      continue;
    Formula indicator = k == 1 ? Formula::delta(Formula::zero())
                               : Formula::conjunction(delta_iterate(Formula::zero(), k),
                                                      Formula::negation(delta_iterate(Formula::zero(), k - 1)));
    acc = acc ? Formula::disjunction(*acc, indicator) : indicator;
  }
  return acc ? *acc : Formula::zero();
}

} // namespace magari
