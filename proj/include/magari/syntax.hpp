#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formula.hpp"

namespace magari {

/// Syntax error in formula text; position is a byte offset into the input.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

namespace detail {

enum class Tok { end, zero, one, ident, lparen, rparen, bang, delta, box, nabla, amp, bar, arrow, iff };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
};

struct UnicodeAlias {
  std::string_view utf8;
  Tok kind;
};

// ∼ and ↔ both spell Boolean equivalence.
inline constexpr UnicodeAlias unicode_aliases[] = {
    {"¬", Tok::bang},  {"Δ", Tok::delta}, {"□", Tok::box},
    {"∇", Tok::nabla}, {"∧", Tok::amp},   {"∨", Tok::bar},
    {"⊃", Tok::arrow}, {"∼", Tok::iff},   {"↔", Tok::iff},
};

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    auto push = [&](Tok k, std::size_t len) {
      out.push_back({k, start, std::string(s.substr(start, len))});
      i += len;
    };
    if (c >= 'a' && c <= 'z') {
      std::size_t j = i + 1;
      while (j < s.size() && ((s[j] >= 'a' && s[j] <= 'z') || (s[j] >= 'A' && s[j] <= 'Z') ||
                              (s[j] >= '0' && s[j] <= '9') || s[j] == '_'))
        ++j;
      push(Tok::ident, j - i);
      continue;
    }
    switch (c) {
    case '0': push(Tok::zero, 1); continue;
    case '1': push(Tok::one, 1); continue;
    case '(': push(Tok::lparen, 1); continue;
    case ')': push(Tok::rparen, 1); continue;
    case '!': push(Tok::bang, 1); continue;
    case 'D': push(Tok::delta, 1); continue;
    case '#': push(Tok::box, 1); continue;
    case '@': push(Tok::nabla, 1); continue;
    case '&': push(Tok::amp, 1); continue;
    case '|': push(Tok::bar, 1); continue;
    default: break;
    }
    if (s.substr(i, 3) == "<->") {
      push(Tok::iff, 3);
      continue;
    }
    if (s.substr(i, 2) == "->") {
      push(Tok::arrow, 2);
      continue;
    }
    bool matched = false;
    for (const auto& alias : unicode_aliases) {
      if (s.substr(i, alias.utf8.size()) == alias.utf8) {
        push(alias.kind, alias.utf8.size());
        matched = true;
        break;
      }
    }
    if (matched)
      continue;
    if (c >= 'A' && c <= 'Z')
      throw parse_error(std::string("reserved uppercase token '") + c +
                            "' (variables must start with a lowercase letter)",
                        i);
    throw parse_error(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Tok::end, s.size(), {}});
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Formula parse() {
    Formula f = iff();
    if (peek().kind != Tok::end)
      throw parse_error("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k)
      return false;
    ++pos_;
    return true;
  }

  Formula iff() {
    Formula f = imp();
    while (accept(Tok::iff))
      f = Formula::equivalence(f, imp());
    return f;
  }

  Formula imp() {
    Formula f = disj();
    if (accept(Tok::arrow))
      return Formula::implication(f, imp());
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (accept(Tok::bar))
      f = Formula::disjunction(f, conj());
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (accept(Tok::amp))
      f = Formula::conjunction(f, unary());
    return f;
  }

  Formula unary() {
    if (accept(Tok::bang))
      return Formula::negation(unary());
    if (accept(Tok::delta))
      return Formula::delta(unary());
    if (accept(Tok::box))
      return Formula::box(unary());
    if (accept(Tok::nabla))
      return Formula::nabla(unary());
    return atom();
  }

  Formula atom() {
    const Token& t = peek();
    switch (t.kind) {
    case Tok::zero:
      ++pos_;
      return Formula::zero();
    case Tok::one:
      ++pos_;
      return Formula::one();
    case Tok::ident:
      ++pos_;
      return Formula::var(t.text);
    case Tok::lparen: {
      ++pos_;
      Formula f = iff();
      if (!accept(Tok::rparen))
        throw parse_error("expected ')'", peek().pos);
      return f;
    }
    case Tok::end:
      throw parse_error("unexpected end of input", t.pos);
    default:
      throw parse_error("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Binding strength, loosest first.
enum Prec : int { prec_iff = 1, prec_imp, prec_or, prec_and, prec_unary, prec_atom };

inline int precedence(Kind k) {
  switch (k) {
  case Kind::equivalence: return prec_iff;
  case Kind::implication: return prec_imp;
  case Kind::disjunction: return prec_or;
  case Kind::conjunction: return prec_and;
  case Kind::negation:
  case Kind::delta:
  case Kind::box:
  case Kind::nabla: return prec_unary;
  default: return prec_atom;
  }
}

inline void print_into(const Formula& f, int min_prec, std::string& out) {
  const int p = precedence(f.kind());
  const bool paren = p < min_prec;
  if (paren)
    out += '(';
  switch (f.kind()) {
  case Kind::var: out += f.name(); break;
  case Kind::zero: out += '0'; break;
  case Kind::one: out += '1'; break;
  case Kind::literal: out += '[' + to_string(f.value()) + ']'; break;
  case Kind::negation: out += '!'; print_into(f.lhs(), prec_unary, out); break;
  case Kind::delta: out += "D "; print_into(f.lhs(), prec_unary, out); break;
  case Kind::box: out += '#'; print_into(f.lhs(), prec_unary, out); break;
  case Kind::nabla: out += '@'; print_into(f.lhs(), prec_unary, out); break;
  case Kind::implication:
    print_into(f.lhs(), p + 1, out);
    out += " -> ";
    print_into(f.rhs(), p, out);
    break;
  default: {
    const char* op = f.kind() == Kind::conjunction   ? " & "
                     : f.kind() == Kind::disjunction ? " | "
                                                     : " <-> ";
    print_into(f.lhs(), p, out);
    out += op;
    print_into(f.rhs(), p + 1, out);
  }
  }
  if (paren)
    out += ')';
}

} // namespace detail

/// Parses formula text.  Precedence, tightest first: the unary operators
/// `!` `D` `#` `@`, then `&`, `|`, `->` (right-associative), `<->`
/// (left-associative).
inline Formula parse(std::string_view text) { return detail::Parser(text).parse(); }

/// Canonical text with minimal parentheses; parse(print(f)) == f for every
/// formula without literals.  Literals print as `[b...b(t)]`, which the
/// parser does not accept.
inline std::string print(const Formula& f) {
  std::string out;
  detail::print_into(f, detail::prec_iff, out);
  return out;
}

} // namespace magari
