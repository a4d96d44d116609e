#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "element.hpp"
#include "eval.hpp"
#include "formula.hpp"

namespace magari {

using NodeId = std::uint32_t;

/// \brief Hash-consed term DAG.
///
/// Structurally identical subterms map to one node.  Nodes are appended
/// children-first, so index order is a topological order.
class TermDag {
public:
  struct Node {
    Kind kind;
    NodeId lhs = 0;
    NodeId rhs = 0;
    std::uint32_t payload = 0; // variable or literal index

    friend bool operator==(const Node&, const Node&) = default;
  };

  NodeId add(const Formula& f) {
    if (auto it = by_formula_.find(f.id()); it != by_formula_.end())
      return it->second;
    Node n{f.kind()};
    switch (f.kind()) {
    case Kind::var: n.payload = intern_variable(f.name()); break;
    case Kind::literal: n.payload = intern_literal(f.value()); break;
    default:
      if (is_unary(f.kind()) || is_binary(f.kind()))
        n.lhs = add(f.lhs());
      if (is_binary(f.kind()))
        n.rhs = add(f.rhs());
    }
    NodeId id;
    if (auto it = by_node_.find(n); it != by_node_.end()) {
      id = it->second;
    } else {
      id = static_cast<NodeId>(nodes_.size());
      nodes_.push_back(n);
      by_node_.emplace(n, id);
    }
    by_formula_.emplace(f.id(), id);
    keep_alive_.push_back(f);
    return id;
  }

  std::uint32_t intern_variable(const std::string& name) {
    auto [it, fresh] = variable_index_.emplace(name, static_cast<std::uint32_t>(variables_.size()));
    if (fresh)
      variables_.push_back(name);
    return it->second;
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<Element>& literals() const noexcept { return literals_; }

  std::size_t count(Kind k) const {
    std::size_t n = 0;
    for (const auto& node : nodes_)
      n += node.kind == k;
    return n;
  }

private:
  struct NodeHash {
    std::size_t operator()(const Node& n) const noexcept {
      std::size_t h = static_cast<std::size_t>(n.kind);
      h = h * 1000003u ^ n.lhs;
      h = h * 1000003u ^ n.rhs;
      h = h * 1000003u ^ n.payload;
      return h;
    }
  };

  std::uint32_t intern_literal(const Element& e) {
    auto [it, fresh] = literal_index_.emplace(e, static_cast<std::uint32_t>(literals_.size()));
    if (fresh)
      literals_.push_back(e);
    return it->second;
  }

  std::vector<Node> nodes_;
  std::unordered_map<Node, NodeId, NodeHash> by_node_;
  std::unordered_map<const Formula::Node*, NodeId> by_formula_;
  std::vector<Formula> keep_alive_; // pins node addresses used as keys above
  std::vector<std::string> variables_;
  std::unordered_map<std::string, std::uint32_t> variable_index_;
  std::vector<Element> literals_;
  std::unordered_map<Element, std::uint32_t> literal_index_;
};

/// Distinct Δ-subterms of the desugared formula.
inline std::size_t delta_nodes(const Formula& f) {
  TermDag dag;
  dag.add(desugar(f));
  return dag.count(Kind::delta);
}

/// One input letter: bit j is the current coordinate of variable j.
using Letter = std::uint32_t;

/// \brief Deterministic stepper reading one coordinate of every variable per
/// step and emitting the matching coordinate of every root formula.
///
/// The state is one memory bit per shared Δ-node, initially 1, plus a step
/// counter clamped just past the longest literal prefix.  A Δ-node outputs its
/// memory and then ANDs in its operand's current output, so at step n it
/// emits the conjunction of its operand's coordinates 1..n-1.
class Transducer {
public:
  static constexpr std::size_t max_width = 64;
  static constexpr std::size_t max_variables = 20;

  struct State {
    std::uint64_t memory = 0;
    std::uint32_t position = 1;

    friend bool operator==(const State&, const State&) = default;
  };

  struct StateHash {
    std::size_t operator()(const State& s) const noexcept {
      return std::hash<std::uint64_t>{}(s.memory * 0x9E3779B97F4A7C15ull + s.position);
    }
  };

  /// Desugars, constant-folds and jointly hash-conses the roots.  Variables
  /// are indexed in sorted order of their names.
  static Transducer compile(std::span<const Formula> roots) {
    std::vector<std::string> names;
    for (const auto& r : roots)
      for (auto& v : free_vars(r))
        names.push_back(std::move(v));
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    if (names.size() > max_variables)
      throw std::length_error("transducer: too many variables (" + std::to_string(names.size()) + ")");

    Transducer t;
    for (const auto& n : names)
      t.dag_.intern_variable(n);
    for (const auto& r : roots)
      t.roots_.push_back(t.dag_.add(constant_fold(desugar(r))));

    t.delta_slot_.assign(t.dag_.nodes().size(), 0);
    std::uint32_t width = 0;
    for (std::size_t i = 0; i < t.dag_.nodes().size(); ++i)
      if (t.dag_.nodes()[i].kind == Kind::delta)
        t.delta_slot_[i] = width++;
    if (width > max_width)
      throw std::length_error("transducer: too many Δ-subterms (" + std::to_string(width) + ")");
    t.width_ = width;
    for (const auto& lit : t.dag_.literals())
      t.horizon_ = std::max(t.horizon_, lit.prefix_length());
    return t;
  }

  static Transducer compile(std::initializer_list<Formula> roots) {
    return compile(std::span<const Formula>(roots.begin(), roots.size()));
  }

  std::size_t state_width() const noexcept { return width_; }
  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t root_count() const noexcept { return roots_.size(); }
  const std::vector<std::string>& variables() const noexcept { return dag_.variables(); }
  std::size_t alphabet_size() const noexcept { return std::size_t{1} << variables().size(); }
  const TermDag& dag() const noexcept { return dag_; }

  State initial() const noexcept {
    State s;
    s.memory = width_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_) - 1;
    s.position = 1;
    return s;
  }

  /// Advances one step; writes one output bit per root into out.
  State step(const State& s, Letter x, std::vector<std::uint8_t>& out) const {
    const auto& nodes = dag_.nodes();
    thread_local std::vector<std::uint8_t> scratch;
    scratch.resize(nodes.size());
    State next{s.memory, s.position <= horizon_ ? s.position + 1 : s.position};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      std::uint8_t v = 0;
      switch (n.kind) {
      case Kind::var: v = (x >> n.payload) & 1u; break;
      case Kind::zero: v = 0; break;
      case Kind::one: v = 1; break;
      case Kind::literal: v = dag_.literals()[n.payload].coordinate(s.position); break;
      case Kind::negation: v = !scratch[n.lhs]; break;
      case Kind::conjunction: v = scratch[n.lhs] & scratch[n.rhs]; break;
      case Kind::disjunction: v = scratch[n.lhs] | scratch[n.rhs]; break;
      case Kind::implication: v = (!scratch[n.lhs]) | scratch[n.rhs]; break;
      case Kind::delta: {
        const std::uint64_t bit = std::uint64_t{1} << delta_slot_[i];
        v = (s.memory & bit) != 0;
        if (!scratch[n.lhs])
          next.memory &= ~bit;
        break;
      }
      default:
        throw std::logic_error("transducer: formula not desugared");
      }
      scratch[i] = v;
    }
    out.resize(roots_.size());
    for (std::size_t r = 0; r < roots_.size(); ++r)
      out[r] = scratch[roots_[r]];
    return next;
  }

  /// Runs the word from the initial state; row n holds the outputs of step n+1.
  std::vector<std::vector<std::uint8_t>> run(std::span<const Letter> word) const {
    std::vector<std::vector<std::uint8_t>> rows;
    State s = initial();
    for (Letter x : word) {
      rows.emplace_back();
      s = step(s, x, rows.back());
    }
    return rows;
  }

private:
  TermDag dag_;
  std::vector<NodeId> roots_;
  std::vector<std::uint32_t> delta_slot_;
  std::size_t width_ = 0;
  std::size_t horizon_ = 0;
};

} // namespace magari
