#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "element.hpp"

namespace magari {

enum class Kind : std::uint8_t {
  var,
  zero,
  one,
  literal, // folded closed subterm; never produced by the parser
  negation,
  conjunction,
  disjunction,
  implication,
  equivalence,
  delta,
  box,
  nabla,
};

inline bool is_unary(Kind k) noexcept {
  return k == Kind::negation || k == Kind::delta || k == Kind::box || k == Kind::nabla;
}

inline bool is_binary(Kind k) noexcept {
  return k == Kind::conjunction || k == Kind::disjunction || k == Kind::implication ||
         k == Kind::equivalence;
}

/// Variables are lowercase identifiers: a lowercase letter followed by
/// letters, digits or underscores.
inline bool is_identifier(std::string_view s) noexcept {
  if (s.empty() || s[0] < 'a' || s[0] > 'z')
    return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    if (!ok)
      return false;
  }
  return true;
}

/// \brief Immutable formula over {0, 1, ¬, &, ∨, ⊃, ↔, Δ, □, ∇} and variables.
///
/// A Formula is a cheap handle on a shared node; subtrees may be shared
/// between formulas (desugaring shares the operand of □ with its Δ child).
class Formula {
public:
  struct Node;

  static Formula var(std::string name) {
    if (!is_identifier(name))
      throw std::invalid_argument("invalid variable name '" + name + "'");
    return make(Kind::var, {}, {}, std::move(name), {});
  }
  static Formula zero() { return make(Kind::zero, {}, {}, {}, {}); }
  static Formula one() { return make(Kind::one, {}, {}, {}, {}); }
  static Formula literal(Element value) {
    return make(Kind::literal, {}, {}, {}, std::move(value));
  }

  static Formula negation(Formula f) { return unary(Kind::negation, std::move(f)); }
  static Formula delta(Formula f) { return unary(Kind::delta, std::move(f)); }
  static Formula box(Formula f) { return unary(Kind::box, std::move(f)); }
  static Formula nabla(Formula f) { return unary(Kind::nabla, std::move(f)); }

  static Formula conjunction(Formula a, Formula b) {
    return binary(Kind::conjunction, std::move(a), std::move(b));
  }
  static Formula disjunction(Formula a, Formula b) {
    return binary(Kind::disjunction, std::move(a), std::move(b));
  }
  static Formula implication(Formula a, Formula b) {
    return binary(Kind::implication, std::move(a), std::move(b));
  }
  static Formula equivalence(Formula a, Formula b) {
    return binary(Kind::equivalence, std::move(a), std::move(b));
  }

  /// Builds a node of the given kind from children; arity must match.
  static Formula rebuild(Kind k, const Formula& a, const Formula& b);

  Kind kind() const noexcept;
  const std::string& name() const noexcept;
  const Element& value() const noexcept;
  /// Operand of a unary node, left operand of a binary one.
  const Formula& lhs() const noexcept;
  const Formula& rhs() const noexcept;

  /// Identity of the shared node; stable for the lifetime of any handle.
  const Node* id() const noexcept { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

private:
  Formula() = default;
  static Formula make(Kind k, Formula a, Formula b, std::string name, Element value);
  static Formula unary(Kind k, Formula f) { return make(k, std::move(f), {}, {}, {}); }
  static Formula binary(Kind k, Formula a, Formula b) {
    return make(k, std::move(a), std::move(b), {}, {});
  }

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Kind kind;
  Formula lhs;
  Formula rhs;
  std::string name;
  Element value;
};

inline Formula Formula::make(Kind k, Formula a, Formula b, std::string name, Element value) {
  Formula f;
  f.node_ = std::make_shared<const Node>(
      Node{k, std::move(a), std::move(b), std::move(name), std::move(value)});
  return f;
}

inline Formula Formula::rebuild(Kind k, const Formula& a, const Formula& b) {
  if (is_unary(k))
    return unary(k, a);
  if (is_binary(k))
    return binary(k, a, b);
  throw std::invalid_argument("Formula::rebuild: leaf kind");
}

inline Kind Formula::kind() const noexcept { return node_->kind; }
inline const std::string& Formula::name() const noexcept { return node_->name; }
inline const Element& Formula::value() const noexcept { return node_->value; }
inline const Formula& Formula::lhs() const noexcept { return node_->lhs; }
inline const Formula& Formula::rhs() const noexcept { return node_->rhs; }

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_)
    return true;
  if (a.kind() != b.kind())
    return false;
  switch (a.kind()) {
  case Kind::var:
    return a.name() == b.name();
  case Kind::zero:
  case Kind::one:
    return true;
  case Kind::literal:
    return a.value() == b.value();
  default:
    break;
  }
  if (!(a.lhs() == b.lhs()))
    return false;
  return !is_binary(a.kind()) || a.rhs() == b.rhs();
}

namespace detail {

template <class Visit>
void visit_unique(const Formula& f, std::unordered_map<const Formula::Node*, bool>& seen,
                  Visit& visit) {
  if (!seen.emplace(f.id(), true).second)
    return;
  if (is_unary(f.kind()) || is_binary(f.kind()))
    visit_unique(f.lhs(), seen, visit);
  if (is_binary(f.kind()))
    visit_unique(f.rhs(), seen, visit);
  visit(f);
}

} // namespace detail

/// Free variables, sorted.
inline std::vector<std::string> free_vars(const Formula& f) {
  std::set<std::string> names;
  std::unordered_map<const Formula::Node*, bool> seen;
  auto collect = [&](const Formula& g) {
    if (g.kind() == Kind::var)
      names.insert(g.name());
  };
  detail::visit_unique(f, seen, collect);
  return {names.begin(), names.end()};
}

inline bool is_closed(const Formula& f) { return free_vars(f).empty(); }

/// Nesting depth of Δ, counting □ as one Δ and ∇ as three.
inline std::size_t modal_depth(const Formula& f) {
  std::unordered_map<const Formula::Node*, std::size_t> depth;
  std::unordered_map<const Formula::Node*, bool> seen;
  auto measure = [&](const Formula& g) {
    std::size_t d = 0;
    if (is_unary(g.kind()) || is_binary(g.kind()))
      d = depth.at(g.lhs().id());
    if (is_binary(g.kind()))
      d = std::max(d, depth.at(g.rhs().id()));
    switch (g.kind()) {
    case Kind::delta:
    case Kind::box:
      d += 1;
      break;
    case Kind::nabla:
      d += 3;
      break;
    default:
      break;
    }
    depth[g.id()] = d;
  };
  detail::visit_unique(f, seen, measure);
  return depth.at(f.id());
}

/// Number of nodes in the tree (shared subtrees counted once per occurrence).
inline std::size_t tree_size(const Formula& f) {
  std::size_t n = 1;
  if (is_unary(f.kind()) || is_binary(f.kind()))
    n += tree_size(f.lhs());
  if (is_binary(f.kind()))
    n += tree_size(f.rhs());
  return n;
}

using Bindings = std::map<std::string, Formula>;

/// Simultaneous substitution; variables without a binding are kept.
inline Formula substitute(const Formula& f, const Bindings& bindings) {
  if (bindings.empty())
    return f;
  std::unordered_map<const Formula::Node*, Formula> done;
  auto go = [&](auto& self, const Formula& g) -> Formula {
    if (auto it = done.find(g.id()); it != done.end())
      return it->second;
    Formula out = g;
    if (g.kind() == Kind::var) {
      if (auto b = bindings.find(g.name()); b != bindings.end())
        out = b->second;
    } else if (is_unary(g.kind())) {
      Formula a = self(self, g.lhs());
      if (a.id() != g.lhs().id())
        out = Formula::rebuild(g.kind(), a, a);
    } else if (is_binary(g.kind())) {
      Formula a = self(self, g.lhs());
      Formula b = self(self, g.rhs());
      if (a.id() != g.lhs().id() || b.id() != g.rhs().id())
        out = Formula::rebuild(g.kind(), a, b);
    }
    done.emplace(g.id(), out);
    return out;
  };
  return go(go, f);
}

/// Rewrites □, ∇ and ↔ into the core signature {0, 1, literal, var, ¬, &, ∨, ⊃, Δ}.
/// Repeated operands are shared, not copied.
inline Formula desugar(const Formula& f) {
  std::unordered_map<const Formula::Node*, Formula> done;
  auto box_of = [](const Formula& g) { return Formula::conjunction(g, Formula::delta(g)); };
  auto go = [&](auto& self, const Formula& g) -> Formula {
    if (auto it = done.find(g.id()); it != done.end())
      return it->second;
    Formula out = g;
    switch (g.kind()) {
    case Kind::box:
      out = box_of(self(self, g.lhs()));
      break;
    case Kind::nabla: {
      const Formula inner = box_of(self(self, g.lhs()));
      out = box_of(Formula::negation(box_of(Formula::negation(inner))));
      break;
    }
    case Kind::equivalence: {
      const Formula a = self(self, g.lhs());
      const Formula b = self(self, g.rhs());
      out = Formula::conjunction(Formula::implication(a, b), Formula::implication(b, a));
      break;
    }
    default:
      if (is_unary(g.kind())) {
        const Formula a = self(self, g.lhs());
        if (a.id() != g.lhs().id())
          out = Formula::rebuild(g.kind(), a, a);
      } else if (is_binary(g.kind())) {
        const Formula a = self(self, g.lhs());
        const Formula b = self(self, g.rhs());
        if (a.id() != g.lhs().id() || b.id() != g.rhs().id())
          out = Formula::rebuild(g.kind(), a, b);
      }
    }
    done.emplace(g.id(), out);
    return out;
  };
  return go(go, f);
}

inline bool is_core(const Formula& f) {
  bool core = true;
  std::unordered_map<const Formula::Node*, bool> seen;
  auto check = [&](const Formula& g) {
    const Kind k = g.kind();
    if (k == Kind::box || k == Kind::nabla || k == Kind::equivalence)
      core = false;
  };
  detail::visit_unique(f, seen, check);
  return core;
}

/// Δ^n applied to f.
inline Formula delta_iterate(Formula f, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k)
    f = Formula::delta(std::move(f));
  return f;
}

/// The closed term ¬Δ^i 0.
inline Formula neg_delta_power_term(std::size_t i) {
  return Formula::negation(delta_iterate(Formula::zero(), i));
}

} // namespace magari
