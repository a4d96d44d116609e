#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace magari {

/// \brief An ultimately-constant binary sequence, the carrier of the free
/// diagonalizable algebra.
///
/// The sequence is stored as a finite prefix (coordinates 1..n) followed by a
/// constant tail bit.  The representation is canonical: either the prefix is
/// empty or its last bit differs from the tail, so two elements are equal iff
/// their fields are equal.
class Element {
public:
  /// The zero element (0, 0, ...).
  Element() = default;

  /// Builds the canonical element with the given coordinate function.
  static Element canonicalize(std::vector<bool> prefix, bool tail) {
    while (!prefix.empty() && prefix.back() == tail)
      prefix.pop_back();
    Element e;
    e.prefix_ = std::move(prefix);
    e.tail_ = tail;
    return e;
  }

  static Element zero() { return Element(); }
  static Element one() { return canonicalize({}, true); }

  const std::vector<bool>& prefix() const noexcept { return prefix_; }
  bool tail() const noexcept { return tail_; }
  std::size_t prefix_length() const noexcept { return prefix_.size(); }

  /// Coordinate k, 1-based.  Total for every k >= 1.
  bool coordinate(std::size_t k) const {
    if (k == 0)
      throw std::out_of_range("Element::coordinate: coordinates start at 1");
    return k <= prefix_.size() ? prefix_[k - 1] : tail_;
  }

  bool is_zero() const noexcept { return prefix_.empty() && !tail_; }
  bool is_one() const noexcept { return prefix_.empty() && tail_; }

  friend bool operator==(const Element&, const Element&) = default;

  friend bool operator<(const Element& a, const Element& b) {
    if (a.tail_ != b.tail_)
      return a.tail_ < b.tail_;
    return a.prefix_ < b.prefix_;
  }

private:
  std::vector<bool> prefix_;
  bool tail_ = false;
};

/// Free-function spelling of Element::canonicalize.
inline Element canonicalize(std::vector<bool> prefix, bool tail) {
  return Element::canonicalize(std::move(prefix), tail);
}

/// A length-n truncation of an element (coordinates 1..n).
struct Bitvector {
  std::vector<bool> bits;

  std::size_t size() const noexcept { return bits.size(); }
  friend bool operator==(const Bitvector&, const Bitvector&) = default;
};

namespace detail {

template <class Op>
Element pointwise(const Element& a, const Element& b, Op op) {
  const std::size_t n = std::max(a.prefix_length(), b.prefix_length());
  std::vector<bool> bits(n);
  for (std::size_t k = 1; k <= n; ++k)
    bits[k - 1] = op(a.coordinate(k), b.coordinate(k));
  return Element::canonicalize(std::move(bits), op(a.tail(), b.tail()));
}

} // namespace detail

inline Element meet(const Element& a, const Element& b) {
  return detail::pointwise(a, b, [](bool x, bool y) { return x && y; });
}

inline Element join(const Element& a, const Element& b) {
  return detail::pointwise(a, b, [](bool x, bool y) { return x || y; });
}

inline Element implies(const Element& a, const Element& b) {
  return detail::pointwise(a, b, [](bool x, bool y) { return !x || y; });
}

inline Element equiv(const Element& a, const Element& b) {
  return detail::pointwise(a, b, [](bool x, bool y) { return x == y; });
}

inline Element complement(const Element& a) {
  std::vector<bool> bits = a.prefix();
  bits.flip();
  return Element::canonicalize(std::move(bits), !a.tail());
}

/// Δa: coordinate 1 is 1, coordinate k+1 is the conjunction of a's first k
/// coordinates.  Closed form: with z the position of a's first zero, the
/// result is z ones followed by zeros; if a has no zero the result is 1.
inline Element delta(const Element& a) {
  const auto& p = a.prefix();
  const auto it = std::find(p.begin(), p.end(), false);
  std::size_t first_zero;
  if (it != p.end())
    first_zero = static_cast<std::size_t>(it - p.begin()) + 1;
  else if (!a.tail())
    first_zero = p.size() + 1;
  else
    return Element::one();
  return Element::canonicalize(std::vector<bool>(first_zero, true), false);
}

/// Order of the Boolean algebra: a <= b coordinatewise.
inline bool leq(const Element& a, const Element& b) {
  return meet(a, b) == a;
}

/// □a = a & Δa, the cumulative conjunction including the current coordinate.
inline Element box(const Element& a) { return meet(a, delta(a)); }

/// ∇a = □¬□¬□a.
inline Element nabla(const Element& a) {
  return box(complement(box(complement(box(a)))));
}

/// Δ^i 0: i ones followed by zeros.
inline Element delta_power(std::size_t i) {
  return Element::canonicalize(std::vector<bool>(i, true), false);
}

/// ¬Δ^i 0: i zeros followed by ones.
inline Element neg_delta_power(std::size_t i) {
  return Element::canonicalize(std::vector<bool>(i, false), true);
}

inline Bitvector project(const Element& a, std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("project: length must be positive");
  Bitvector v;
  v.bits.resize(n);
  for (std::size_t k = 1; k <= n; ++k)
    v.bits[k - 1] = a.coordinate(k);
  return v;
}

/// Componentwise definition of Δ on a truncation:
/// (1, v1, v1&v2, ..., v1&...&v_{n-1}).
inline Bitvector delta_reference(const Bitvector& v) {
  Bitvector out;
  out.bits.resize(v.size());
  bool acc = true;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.bits[k] = acc;
    acc = acc && v.bits[k];
  }
  return out;
}

/// Text form `b...b(t)`, e.g. `010(1)`; the empty prefix prints as `(0)` or `(1)`.
inline std::string to_string(const Element& e) {
  std::string s;
  s.reserve(e.prefix_length() + 3);
  for (bool b : e.prefix())
    s.push_back(b ? '1' : '0');
  s += e.tail() ? "(1)" : "(0)";
  return s;
}

class element_syntax_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Parses `b...b(t)`.  Non-canonical prefixes are accepted and canonicalized.
inline Element parse_element(std::string_view text) {
  auto fail = [&](const char* why) {
    return element_syntax_error("invalid element '" + std::string(text) + "': " + why);
  };
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.size() != open + 3 || text.back() != ')')
    throw fail("expected bits followed by (0) or (1)");
  std::vector<bool> prefix;
  prefix.reserve(open);
  for (char c : text.substr(0, open)) {
    if (c != '0' && c != '1')
      throw fail("prefix must consist of 0 and 1");
    prefix.push_back(c == '1');
  }
  const char t = text[open + 1];
  if (t != '0' && t != '1')
    throw fail("tail must be 0 or 1");
  return Element::canonicalize(std::move(prefix), t == '1');
}

} // namespace magari

template <>
struct std::hash<magari::Element> {
  std::size_t operator()(const magari::Element& e) const noexcept {
    return std::hash<std::vector<bool>>{}(e.prefix()) * 31u + (e.tail() ? 1u : 0u);
  }
};
