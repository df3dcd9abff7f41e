#pragma once

// Text form of tensor elements.
//
//   element := term (("+" | "-") term)*
//   term    := [coeff "*"] factors [":" vpart] | coeff [":" vpart]
//   factors := atom ("*" atom)*
//   atom    := ("D" | "T") index ["^" exponent]
//   vpart   := "V[" exponents "]" ["@" tail]
//   coeff   := ["-"] integer ["/" positive-integer], optionally in parentheses
//
// D1..Dm and T1..Tm belong to the Omega(lambda, alpha, h) factors, D(m+1)..D(m+n)
// to the Omega(mu, beta) factors. V[k1,k2,...] is d_{-1}^{k1} d_{-2}^{k2} ... applied
// to v_h (Verma) or to the N basis vector b_tail (induced). A missing vpart
// means V[] on specs with a V factor.

#include <cctype>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "virmod/error.hpp"
#include "virmod/rational.hpp"
#include "virmod/tensor.hpp"

namespace virmod {

namespace detail {

class ElementParser {
 public:
  ElementParser(std::string_view text, const TensorSpec& spec) : s_(text), spec_(spec) {}

  TensorElement parse() {
    std::vector<std::pair<TensorMonomial, Rational>> terms;
    skip();
    if (at_end()) fail("empty element");
    bool negate = false;
    if (peek() == '-') {
      ++pos_;
      negate = true;
    } else if (peek() == '+') {
      ++pos_;
    }
    for (;;) {
      auto [x, c] = term();
      terms.emplace_back(std::move(x), negate ? -c : c);
      skip();
      if (at_end()) break;
      if (peek() == '+') negate = false;
      else if (peek() == '-') negate = true;
      else fail(std::string("expected '+' or '-', found '") + peek() + "'");
      ++pos_;
    }
    return TensorElement::from_terms(std::move(terms));
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw parse_error(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const { throw parse_error(what, at); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  bool accept(char c) {
    skip();
    if (!at_end() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }

  unsigned long number(unsigned long limit, const char* what) {
    skip();
    std::size_t start = pos_;
    if (!at_end() && peek() == '-') fail(std::string("negative ") + what);
    std::string d = digits();
    if (d.size() > 9 || std::stoul(d) > limit) fail_at(std::string(what) + " " + d + " is too large", start);
    return std::stoul(d);
  }

  Rational coefficient() {
    skip();
    bool paren = accept('(');
    skip();
    std::size_t start = pos_;
    std::string text;
    if (!at_end() && (peek() == '-' || peek() == '+')) text += s_[pos_++];
    text += digits();
    skip();
    if (!at_end() && peek() == '/') {
      ++pos_;
      std::size_t den_at = pos_;
      skip();
      if (!at_end() && peek() == '-') fail("denominator must be positive");
      std::string den = digits();
      if (den.find_first_not_of('0') == std::string::npos) fail_at("zero denominator", den_at);
      text += "/" + den;
    }
    if (paren) expect(')');
    try {
      return Rational::parse(text);
    } catch (const parse_error& e) {
      fail_at(e.what(), start);
    }
  }

  bool starts_number() {
    skip();
    if (at_end()) return false;
    char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || c == '-';
  }

  std::pair<TensorMonomial, Rational> term() {
    TensorMonomial x;
    x.e.resize(spec_.slot_count(), 0);
    Rational c(1);
    bool have_atom = false;
    if (starts_number()) {
      c = coefficient();
      if (accept('*')) {
        atom(x);
        have_atom = true;
      }
    } else {
      atom(x);
      have_atom = true;
    }
    while (have_atom && accept('*')) atom(x);
    if (accept(':')) {
      if (!spec_.v) fail("this spec has no V factor");
      vpart(x.v);
    }
    return {std::move(x), c};
  }

  void atom(TensorMonomial& x) {
    skip();
    std::size_t start = pos_;
    if (at_end() || (peek() != 'D' && peek() != 'T')) fail("expected D<index> or T<index>");
    const char kind = s_[pos_++];
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected slot index");
    unsigned long idx = number(1000, "slot index");
    std::size_t slot = 0;
    const std::size_t m = spec_.m(), n = spec_.n();
    if (kind == 'D') {
      if (idx < 1 || idx > m + n)
        fail_at("unknown slot D" + std::to_string(idx) + " (valid D1..D" + std::to_string(m + n) + ")", start);
      slot = idx <= m ? r_index(spec_, idx - 1) : rd_index(spec_, idx - m - 1);
    } else {
      if (idx < 1 || idx > m)
        fail_at("unknown slot T" + std::to_string(idx) +
                    (m ? " (valid T1..T" + std::to_string(m) + ")" : std::string(" (spec has no T slots)")),
                start);
      slot = p_index(spec_, idx - 1);
    }
    unsigned long e = 1;
    if (accept('^')) e = number(std::numeric_limits<std::uint16_t>::max(), "exponent");
    unsigned long total = x.e[slot] + e;
    if (total > std::numeric_limits<std::uint16_t>::max()) fail_at("exponent too large", start);
    x.e[slot] = static_cast<std::uint16_t>(total);
  }

  void vpart(PBWMonomial& v) {
    skip();
    if (at_end() || peek() != 'V') fail("expected V[...]");
    ++pos_;
    expect('[');
    v = PBWMonomial{};
    if (!accept(']')) {
      std::size_t j = 1;
      do {
        v.add(j++, static_cast<int>(number(std::numeric_limits<std::uint16_t>::max(), "V exponent")));
      } while (accept(','));
      expect(']');
    }
    v.trim();
    if (accept('@')) {
      std::size_t start = pos_;
      unsigned long b = number(std::numeric_limits<std::uint32_t>::max() >> 1, "tail index");
      if (spec_.v->is_verma() && b != 0) fail_at("a Verma V factor has the single tail v_h (@0)", start);
      if (!spec_.v->is_verma()) {
        auto size = spec_.v->induced().basis_size();
        if (size && b >= *size) fail_at("tail index " + std::to_string(b) + " is outside the N basis", start);
      }
      v.tail = static_cast<std::uint32_t>(b);
    }
  }

  std::string_view s_;
  const TensorSpec& spec_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline TensorElement parse_element(std::string_view text, const TensorSpec& spec) {
  return detail::ElementParser(text, spec).parse();
}

/// Canonical text: terms in monomial order, unit coefficients and exponents
/// omitted, atoms D1 T1 D2 T2 ... then the Omega(mu, beta) slots, V part on
/// every term when the spec has a V factor.
inline std::string format_monomial(const TensorMonomial& x, const TensorSpec& spec) {
  std::string out;
  auto atom = [&](char kind, std::size_t idx, unsigned e) {
    if (e == 0) return;
    if (!out.empty()) out += '*';
    out += kind + std::to_string(idx);
    if (e != 1) out += '^' + std::to_string(e);
  };
  for (std::size_t i = 0; i < spec.m(); ++i) {
    atom('D', i + 1, x.e[r_index(spec, i)]);
    atom('T', i + 1, x.e[p_index(spec, i)]);
  }
  for (std::size_t j = 0; j < spec.n(); ++j) atom('D', spec.m() + j + 1, x.e[rd_index(spec, j)]);
  if (out.empty()) out = "1";
  if (spec.v) {
    out += " : V[";
    for (std::size_t j = 0; j < x.v.exps.size(); ++j) {
      if (j) out += ',';
      out += std::to_string(x.v.exps[j]);
    }
    out += ']';
    if (x.v.tail) out += '@' + std::to_string(x.v.tail);
  }
  return out;
}

inline std::string format_element(const TensorElement& f, const TensorSpec& spec) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [x, c] : f) {
    Rational a = c;
    if (a.sign() < 0) {
      out += first ? "-" : " - ";
      a = -a;
    } else if (!first) {
      out += " + ";
    }
    first = false;
    std::string mono = format_monomial(x, spec);
    if (a.is_one()) {
      out += mono;
    } else if (mono.compare(0, 1, "1") == 0 && (mono.size() == 1 || mono[1] == ' ')) {
      out += a.to_string() + mono.substr(1);
    } else {
      out += a.to_string() + "*" + mono;
    }
  }
  return out;
}

}  // namespace virmod
