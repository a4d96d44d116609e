#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "element.hpp"
#include "formula.hpp"

namespace magari {

using Assignment = std::map<std::string, Element>;

class unbound_variable : public std::runtime_error {
public:
  explicit unbound_variable(const std::string& name)
      : std::runtime_error("unbound variable '" + name + "'"), name_(name) {}

  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

/// Exact value of f in the algebra under the assignment.
inline Element evaluate(const Formula& f, const Assignment& a) {
  std::unordered_map<const Formula::Node*, Element> memo;
  auto go = [&](auto& self, const Formula& g) -> Element {
    if (auto it = memo.find(g.id()); it != memo.end())
      return it->second;
    Element v;
    switch (g.kind()) {
    case Kind::var: {
      auto it = a.find(g.name());
      if (it == a.end())
        throw unbound_variable(g.name());
      v = it->second;
      break;
    }
    case Kind::zero: v = Element::zero(); break;
    case Kind::one: v = Element::one(); break;
    case Kind::literal: v = g.value(); break;
    case Kind::negation: v = complement(self(self, g.lhs())); break;
    case Kind::delta: v = delta(self(self, g.lhs())); break;
    case Kind::box: v = box(self(self, g.lhs())); break;
    case Kind::nabla: v = nabla(self(self, g.lhs())); break;
    case Kind::conjunction: v = meet(self(self, g.lhs()), self(self, g.rhs())); break;
    case Kind::disjunction: v = join(self(self, g.lhs()), self(self, g.rhs())); break;
    case Kind::implication: v = implies(self(self, g.lhs()), self(self, g.rhs())); break;
    case Kind::equivalence: v = equiv(self(self, g.lhs()), self(self, g.rhs())); break;
    }
    memo.emplace(g.id(), v);
    return v;
  };
  return go(go, f);
}

inline Element evaluate_closed(const Formula& f) { return evaluate(f, {}); }

inline bool holds_equation(const Formula& lhs, const Formula& rhs, const Assignment& a) {
  return evaluate(lhs, a) == evaluate(rhs, a);
}

/// Replaces every maximal closed subterm by the literal of its value.
inline Formula constant_fold(const Formula& f) {
  struct Folded {
    Formula formula;
    bool closed;
  };
  std::unordered_map<const Formula::Node*, Folded> done;
  auto go = [&](auto& self, const Formula& g) -> Folded {
    if (auto it = done.find(g.id()); it != done.end())
      return it->second;
    Folded out{g, g.kind() != Kind::var};
    if (is_unary(g.kind())) {
      const Folded a = self(self, g.lhs());
      out.closed = a.closed;
      if (!a.closed && a.formula.id() != g.lhs().id())
        out.formula = Formula::rebuild(g.kind(), a.formula, a.formula);
    } else if (is_binary(g.kind())) {
      const Folded a = self(self, g.lhs());
      const Folded b = self(self, g.rhs());
      out.closed = a.closed && b.closed;
      if (!out.closed) {
        const Formula& lhs = a.closed ? Formula::literal(evaluate_closed(a.formula)) : a.formula;
        const Formula& rhs = b.closed ? Formula::literal(evaluate_closed(b.formula)) : b.formula;
        if (lhs.id() != g.lhs().id() || rhs.id() != g.rhs().id())
          out.formula = Formula::rebuild(g.kind(), lhs, rhs);
      }
    }
    done.emplace(g.id(), out);
    return out;
  };
  const Folded top = go(go, f);
  if (top.closed)
    return Formula::literal(evaluate_closed(top.formula));
  return top.formula;
}

} // namespace magari
