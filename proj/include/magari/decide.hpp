#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "element.hpp"
#include "eval.hpp"
#include "formula.hpp"
#include "transducer.hpp"

namespace magari {

struct Equation {
  Formula lhs;
  Formula rhs;
};

/// Conjunction of hypotheses implies conjunction of conclusions, universally
/// quantified over the algebra.  No hypotheses means a plain identity.
struct QuasiQuery {
  std::vector<Equation> hypotheses;
  std::vector<Equation> conclusions;
};

/// Sorted free variables of every formula in the query.
inline std::vector<std::string> variables(const QuasiQuery& q) {
  std::vector<std::string> names;
  auto add = [&](const Formula& f) {
    for (auto& v : free_vars(f))
      names.push_back(std::move(v));
  };
  for (const auto* eqs : {&q.hypotheses, &q.conclusions})
    for (const auto& e : *eqs) {
      add(e.lhs);
      add(e.rhs);
    }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

/// An ultimately-constant input word: the prefix letters followed by the loop
/// letter forever.  Bit j of a letter is the coordinate of variables[j].
struct Lasso {
  std::vector<std::string> variables;
  std::vector<Letter> prefix;
  Letter loop = 0;
  std::size_t violation_step = 0; // 1-based coordinate where the conclusion fails
  std::size_t conclusion = 0;     // index of the violated conclusion

  Assignment to_assignment() const {
    Assignment a;
    for (std::size_t j = 0; j < variables.size(); ++j) {
      std::vector<bool> bits(prefix.size());
      for (std::size_t k = 0; k < prefix.size(); ++k)
        bits[k] = (prefix[k] >> j) & 1u;
      a[variables[j]] = Element::canonicalize(std::move(bits), (loop >> j) & 1u);
    }
    return a;
  }
};

struct Verdict {
  std::optional<Lasso> counterexample;

  bool valid() const noexcept { return !counterexample.has_value(); }
};

class decide_limit_error : public std::length_error {
public:
  using std::length_error::length_error;
};

/// \brief Decides a quasi-identity over the ultimately-constant sequences.
///
/// Explores the transducer from its initial state along steps where every
/// hypothesis holds.  A counterexample is a hypothesis-respecting path to a
/// step where some conclusion differs, whose successor can still reach a
/// SAFE state: one from which some constant letter keeps the hypotheses true
/// forever.  Because memory bits only fall, a constant letter drives any state
/// to a fixpoint within (width + horizon) steps, so SAFE is decidable by
/// direct simulation.  Letters are tried in increasing order, which makes the
/// emitted lasso deterministic.
inline Verdict decide(const QuasiQuery& q, std::size_t max_states = std::size_t{1} << 22) {
  std::vector<Formula> roots;
  for (const auto* eqs : {&q.hypotheses, &q.conclusions})
    for (const auto& e : *eqs) {
      roots.push_back(e.lhs);
      roots.push_back(e.rhs);
    }
  const Transducer t = Transducer::compile(roots);
  const std::size_t hyps = q.hypotheses.size();
  const std::size_t concls = q.conclusions.size();
  const std::size_t letters = t.alphabet_size();
  using State = Transducer::State;
  constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

  std::vector<State> states{t.initial()};
  std::unordered_map<State, std::uint32_t, Transducer::StateHash> index{{t.initial(), 0}};
  std::vector<std::pair<std::uint32_t, Letter>> parent{{none, 0}};
  std::vector<std::uint32_t> succ; // states x letters; none where a hypothesis fails

  struct Violation {
    std::uint32_t state;
    Letter letter;
    std::size_t conclusion;
  };
  std::vector<Violation> violations;

  std::vector<std::uint8_t> out;
  for (std::uint32_t s = 0; s < states.size(); ++s) {
    for (Letter x = 0; x < letters; ++x) {
      const State next = t.step(states[s], x, out);
      bool hyp_ok = true;
      for (std::size_t h = 0; h < hyps && hyp_ok; ++h)
        hyp_ok = out[2 * h] == out[2 * h + 1];
      if (!hyp_ok) {
        succ.push_back(none);
        continue;
      }
      auto [it, fresh] = index.emplace(next, static_cast<std::uint32_t>(states.size()));
      if (fresh) {
        if (states.size() >= max_states)
          throw decide_limit_error("decide: state space exceeds " + std::to_string(max_states));
        states.push_back(next);
        parent.emplace_back(s, x);
      }
      succ.push_back(it->second);
      for (std::size_t c = 0; c < concls; ++c) {
        const std::size_t r = 2 * (hyps + c);
        if (out[r] != out[r + 1]) {
          violations.push_back({s, x, c});
          break;
        }
      }
    }
  }
  if (violations.empty())
    return {};

  const std::size_t n = states.size();
  auto edge = [&](std::uint32_t s, Letter x) { return succ[s * letters + x]; };

  // Smallest constant letter that keeps the hypotheses true forever from s.
  std::vector<std::int64_t> safe_letter(n, -1);
  for (std::uint32_t s = 0; s < n; ++s) {
    for (Letter c = 0; c < letters && safe_letter[s] < 0; ++c) {
      std::uint32_t cur = s;
      for (;;) {
        const std::uint32_t nxt = edge(cur, c);
        if (nxt == none)
          break;
        if (nxt == cur) {
          safe_letter[s] = c;
          break;
        }
        cur = nxt;
      }
    }
  }

  // States from which a SAFE state is reachable along hypothesis-true steps.
  std::vector<std::vector<std::uint32_t>> preds(n);
  for (std::uint32_t s = 0; s < n; ++s)
    for (Letter x = 0; x < letters; ++x)
      if (const auto d = edge(s, x); d != none)
        preds[d].push_back(s);
  std::vector<std::uint8_t> live(n, 0);
  std::deque<std::uint32_t> work;
  for (std::uint32_t s = 0; s < n; ++s)
    if (safe_letter[s] >= 0) {
      live[s] = 1;
      work.push_back(s);
    }
  while (!work.empty()) {
    const auto s = work.front();
    work.pop_front();
    for (auto p : preds[s])
      if (!live[p]) {
        live[p] = 1;
        work.push_back(p);
      }
  }

  for (const auto& v : violations) {
    const std::uint32_t after = edge(v.state, v.letter);
    if (!live[after])
      continue;

    Lasso lasso;
    lasso.variables = t.variables();
    for (std::uint32_t s = v.state; parent[s].first != none; s = parent[s].first)
      lasso.prefix.push_back(parent[s].second);
    std::reverse(lasso.prefix.begin(), lasso.prefix.end());
    lasso.prefix.push_back(v.letter);
    lasso.violation_step = lasso.prefix.size();
    lasso.conclusion = v.conclusion;

    // Shortest hypothesis-true continuation to a SAFE state.
    std::unordered_map<std::uint32_t, std::pair<std::uint32_t, Letter>> back{{after, {none, 0}}};
    std::deque<std::uint32_t> queue{after};
    std::uint32_t target = none;
    while (!queue.empty()) {
      const auto s = queue.front();
      queue.pop_front();
      if (safe_letter[s] >= 0) {
        target = s;
        break;
      }
      for (Letter x = 0; x < letters; ++x) {
        const auto d = edge(s, x);
        if (d != none && live[d] && back.emplace(d, std::pair{s, x}).second)
          queue.push_back(d);
      }
    }
    std::vector<Letter> tail;
    for (auto s = target; back.at(s).first != none; s = back.at(s).first)
      tail.push_back(back.at(s).second);
    lasso.prefix.insert(lasso.prefix.end(), tail.rbegin(), tail.rend());
    lasso.loop = static_cast<Letter>(safe_letter[target]);
    return {std::move(lasso)};
  }
  return {};
}

class malformed_lasso : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Confirms a counterexample by exact evaluation: every hypothesis holds as an
/// element equality and some conclusion fails.
inline bool replay(const Lasso& l, const QuasiQuery& q) {
  const auto vars = variables(q);
  if (l.variables != vars)
    throw malformed_lasso("lasso variables do not match the query");
  const Letter limit = vars.size() >= 32 ? ~Letter{0} : (Letter{1} << vars.size()) - 1;
  auto in_range = [&](Letter x) { return (x & ~limit) == 0; };
  if (!in_range(l.loop) || !std::all_of(l.prefix.begin(), l.prefix.end(), in_range))
    throw malformed_lasso("lasso letter outside the alphabet");

  const Assignment a = l.to_assignment();
  for (const auto& h : q.hypotheses)
    if (!holds_equation(h.lhs, h.rhs, a))
      return false;
  for (const auto& c : q.conclusions)
    if (!holds_equation(c.lhs, c.rhs, a))
      return true;
  return false;
}

/// Every canonical element with prefix length at most max_prefix, shortest first.
inline std::vector<Element> canonical_elements(std::size_t max_prefix) {
  std::vector<Element> out{Element::zero(), Element::one()};
  for (std::size_t len = 1; len <= max_prefix; ++len) {
    for (std::uint64_t body = 0; body < (std::uint64_t{1} << (len - 1)); ++body) {
      for (bool tail : {false, true}) {
        std::vector<bool> bits(len);
        for (std::size_t k = 0; k + 1 < len; ++k)
          bits[k] = (body >> k) & 1u;
        bits[len - 1] = !tail;
        out.push_back(Element::canonicalize(std::move(bits), tail));
      }
    }
  }
  return out;
}

namespace detail {

/// Straight-line evaluator of a formula on length-M truncations packed in a
/// 64-bit word (bit k-1 holds coordinate k).
class TruncatedProgram {
public:
  TruncatedProgram(const std::vector<std::string>& vars, std::size_t length)
      : mask_(length >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << length) - 1), length_(length) {
    for (std::size_t j = 0; j < vars.size(); ++j)
      var_slot_[vars[j]] = j;
  }

  std::size_t add(const Formula& f) {
    if (auto it = slot_.find(f.id()); it != slot_.end())
      return it->second;
    Instr in{f.kind()};
    switch (f.kind()) {
    case Kind::var: in.a = var_slot_.at(f.name()); break;
    case Kind::zero: in.word = 0; break;
    case Kind::one: in.word = mask_; break;
    case Kind::literal: in.word = pack(f.value()); break;
    default:
      in.a = add(f.lhs());
      if (is_binary(f.kind()))
        in.b = add(f.rhs());
    }
    code_.push_back(in);
    pinned_.push_back(f);
    return slot_[f.id()] = code_.size() - 1;
  }

  std::uint64_t pack(const Element& e) const {
    std::uint64_t w = 0;
    for (std::size_t k = 1; k <= length_; ++k)
      if (e.coordinate(k))
        w |= std::uint64_t{1} << (k - 1);
    return w;
  }

  void run(const std::vector<std::uint64_t>& inputs, std::vector<std::uint64_t>& regs) const {
    regs.resize(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) {
      const Instr& in = code_[i];
      std::uint64_t v = 0;
      switch (in.kind) {
      case Kind::var: v = inputs[in.a]; break;
      case Kind::zero:
      case Kind::one:
      case Kind::literal: v = in.word; break;
      case Kind::negation: v = ~regs[in.a] & mask_; break;
      case Kind::conjunction: v = regs[in.a] & regs[in.b]; break;
      case Kind::disjunction: v = regs[in.a] | regs[in.b]; break;
      case Kind::implication: v = (~regs[in.a] | regs[in.b]) & mask_; break;
      case Kind::equivalence: v = ~(regs[in.a] ^ regs[in.b]) & mask_; break;
      case Kind::delta: v = cumulative(regs[in.a]); break;
      case Kind::box: v = regs[in.a] & cumulative(regs[in.a]); break;
      case Kind::nabla: {
        auto bx = [&](std::uint64_t w) { return w & cumulative(w); };
        v = bx(~bx(~bx(regs[in.a]) & mask_) & mask_);
        break;
      }
      }
      regs[i] = v;
    }
  }

private:
  struct Instr {
    Kind kind;
    std::size_t a = 0;
    std::size_t b = 0;
    std::uint64_t word = 0;
  };

  // (1, w1, w1&w2, ...): ones through the first zero of w, inclusive.
  std::uint64_t cumulative(std::uint64_t w) const {
    const auto z = static_cast<std::size_t>(std::countr_one(w));
    if (z + 1 >= 64)
      return mask_;
    return ((std::uint64_t{1} << (z + 1)) - 1) & mask_;
  }

  std::uint64_t mask_;
  std::size_t length_;
  std::unordered_map<std::string, std::size_t> var_slot_;
  std::unordered_map<const Formula::Node*, std::size_t> slot_;
  std::vector<Instr> code_;
  std::vector<Formula> pinned_;
};

inline std::size_t longest_literal(const Formula& f) {
  std::size_t n = 0;
  std::unordered_map<const Formula::Node*, bool> seen;
  auto look = [&](const Formula& g) {
    if (g.kind() == Kind::literal)
      n = std::max(n, g.value().prefix_length());
  };
  visit_unique(f, seen, look);
  return n;
}

} // namespace detail

/// \brief Exhaustive search for a counterexample among assignments of
/// canonical elements with prefix length at most bound.
///
/// Independent of the transducer.  Inputs constant from coordinate m make a
/// formula of modal depth d constant from m + d, so values are compared on
/// truncations of that length, which is exact.  Falls back to full element
/// evaluation when the truncation would not fit in a machine word.
inline std::optional<Assignment> brute_force(const QuasiQuery& q, std::size_t bound) {
  if (bound == 0)
    throw std::invalid_argument("brute_force: bound must be at least 1");
  const auto vars = variables(q);
  const auto universe = canonical_elements(bound);

  std::size_t depth = 0;
  std::size_t lit = 0;
  for (const auto* eqs : {&q.hypotheses, &q.conclusions})
    for (const auto& e : *eqs)
      for (const auto* f : {&e.lhs, &e.rhs}) {
        depth = std::max(depth, modal_depth(*f));
        lit = std::max(lit, detail::longest_literal(*f));
      }
  const std::size_t length = std::max(bound, lit) + depth + 1;
  const bool truncated = length <= 64;

  std::optional<detail::TruncatedProgram> prog;
  std::vector<std::pair<std::size_t, std::size_t>> hyp_slots, concl_slots;
  std::vector<std::uint64_t> words;
  if (truncated) {
    prog.emplace(vars, length);
    for (const auto& e : q.hypotheses)
      hyp_slots.emplace_back(prog->add(e.lhs), prog->add(e.rhs));
    for (const auto& e : q.conclusions)
      concl_slots.emplace_back(prog->add(e.lhs), prog->add(e.rhs));
    for (const auto& e : universe)
      words.push_back(prog->pack(e));
  }

  std::vector<std::size_t> pick(vars.size(), 0);
  std::vector<std::uint64_t> inputs(vars.size());
  std::vector<std::uint64_t> regs;
  auto assignment = [&] {
    Assignment a;
    for (std::size_t j = 0; j < vars.size(); ++j)
      a[vars[j]] = universe[pick[j]];
    return a;
  };

  for (;;) {
    bool violated = false;
    if (truncated) {
      for (std::size_t j = 0; j < vars.size(); ++j)
        inputs[j] = words[pick[j]];
      prog->run(inputs, regs);
      const bool hyp_ok = std::all_of(hyp_slots.begin(), hyp_slots.end(),
                                      [&](auto s) { return regs[s.first] == regs[s.second]; });
      violated = hyp_ok && std::any_of(concl_slots.begin(), concl_slots.end(),
                                       [&](auto s) { return regs[s.first] != regs[s.second]; });
    } else {
      const Assignment a = assignment();
      const bool hyp_ok = std::all_of(q.hypotheses.begin(), q.hypotheses.end(),
                                      [&](const Equation& e) { return holds_equation(e.lhs, e.rhs, a); });
      violated = hyp_ok && std::any_of(q.conclusions.begin(), q.conclusions.end(),
                                       [&](const Equation& e) { return !holds_equation(e.lhs, e.rhs, a); });
    }
    if (violated)
      return assignment();

    // odometer, last variable fastest
    std::size_t j = vars.size();
    while (j > 0 && ++pick[j - 1] == universe.size())
      pick[--j] = 0;
    if (j == 0)
      return std::nullopt;
  }
}

} // namespace magari
