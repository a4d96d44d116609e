#pragma once

// Test-only generators and reference oracles.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include <magari/magari.hpp>

namespace magari::testing {

inline Element random_element(std::mt19937_64& rng, std::size_t max_prefix) {
  std::uniform_int_distribution<std::size_t> len(0, max_prefix);
  std::bernoulli_distribution bit(0.5);
  std::vector<bool> prefix(len(rng));
  for (std::size_t k = 0; k < prefix.size(); ++k)
    prefix[k] = bit(rng);
  return Element::canonicalize(std::move(prefix), bit(rng));
}

/// Bitvector of length n as a vector<bool> of coordinates 1..n.
inline std::vector<bool> bits_of(const Element& e, std::size_t n) { return project(e, n).bits; }

/// □ on a truncation, straight from its definition v & Δv.
inline Bitvector box_reference(const Bitvector& v) {
  Bitvector d = delta_reference(v);
  for (std::size_t k = 0; k < v.size(); ++k)
    d.bits[k] = d.bits[k] && v.bits[k];
  return d;
}

inline Bitvector not_reference(Bitvector v) {
  v.bits.flip();
  return v;
}

struct FormulaGen {
  std::vector<std::string> vars{"p", "q", "r"};
  bool sugar = true;      // allow □, ∇ and ↔
  bool constants = true;  // allow 0 and 1

  Formula operator()(std::mt19937_64& rng, std::size_t depth) const {
    std::uniform_int_distribution<int> pick(0, 99);
    if (depth == 0 || pick(rng) < 20) {
      const int c = pick(rng);
      if (constants && c < 12)
        return c < 6 ? Formula::zero() : Formula::one();
      std::uniform_int_distribution<std::size_t> v(0, vars.size() - 1);
      return Formula::var(vars[v(rng)]);
    }
    const int op = pick(rng) % (sugar ? 10 : 6);
    auto sub = [&] { return (*this)(rng, depth - 1); };
    switch (op) {
    case 0: return Formula::negation(sub());
    case 1: return Formula::delta(sub());
    case 2: return Formula::conjunction(sub(), sub());
    case 3: return Formula::disjunction(sub(), sub());
    case 4: return Formula::implication(sub(), sub());
    case 5: return Formula::delta(sub());
    case 6: return Formula::box(sub());
    case 7: return Formula::nabla(sub());
    case 8: return Formula::equivalence(sub(), sub());
    default: return Formula::negation(sub());
    }
  }
};

/// Random formula with modal depth at most max_modal.
inline Formula random_formula_bounded(std::mt19937_64& rng, const FormulaGen& gen, std::size_t depth,
                                      std::size_t max_modal) {
  for (;;) {
    Formula f = gen(rng, depth);
    if (modal_depth(f) <= max_modal)
      return f;
  }
}

inline Assignment random_assignment(std::mt19937_64& rng, const std::vector<std::string>& vars,
                                    std::size_t max_prefix) {
  Assignment a;
  for (const auto& v : vars)
    a[v] = random_element(rng, max_prefix);
  return a;
}

/// Random quasi-identity over at most three variables, modal depth at most 4.
/// Hypotheses are kept small so that they are frequently satisfiable.
inline QuasiQuery random_query(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvars(1, 3);
  static const std::vector<std::string> all{"p", "q", "r"};
  FormulaGen gen;
  gen.vars.assign(all.begin(), all.begin() + nvars(rng));
  std::uniform_int_distribution<int> nhyp(0, 2);
  QuasiQuery q;
  const int h = nhyp(rng);
  for (int k = 0; k < h; ++k)
    q.hypotheses.push_back({random_formula_bounded(rng, gen, 2, 4), random_formula_bounded(rng, gen, 2, 4)});
  q.conclusions.push_back({random_formula_bounded(rng, gen, 3, 4), random_formula_bounded(rng, gen, 3, 4)});
  return q;
}

} // namespace magari::testing
