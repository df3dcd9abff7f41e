#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include "virmod/error.hpp"
#include "virmod/lincomb.hpp"
#include "virmod/rational.hpp"

namespace virmod {

using Exponents = boost::container::small_vector<std::uint32_t, 4>;

/// Ordered list of variable names shared by polynomials that combine.
class VariableTable {
 public:
  VariableTable() : names_(std::make_shared<const std::vector<std::string>>()) {}
  VariableTable(std::initializer_list<std::string> names)
      : VariableTable(std::vector<std::string>(names)) {}
  explicit VariableTable(std::vector<std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = i + 1; j < names.size(); ++j)
        if (names[i] == names[j]) throw precondition_error("duplicate variable '" + names[i] + "'");
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
  }

  std::size_t size() const { return names_->size(); }
  const std::string& operator[](std::size_t i) const { return (*names_)[i]; }
  const std::vector<std::string>& names() const { return *names_; }

  std::size_t index_of(const std::string& name) const {
    auto it = std::find(names_->begin(), names_->end(), name);
    if (it == names_->end()) throw mismatch_error("variable '" + name + "' not in table");
    return static_cast<std::size_t>(it - names_->begin());
  }
  bool contains(const std::string& name) const {
    return std::find(names_->begin(), names_->end(), name) != names_->end();
  }

  friend bool operator==(const VariableTable& a, const VariableTable& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

/// Sparse multivariate polynomial over Rational in named commuting variables.
/// Exponent vectors are dense (one slot per table variable).
class MultiPoly {
 public:
  using Terms = LinComb<Exponents>;

  MultiPoly() = default;
  explicit MultiPoly(VariableTable vars) : vars_(std::move(vars)) {}
  MultiPoly(VariableTable vars, Terms terms) : vars_(std::move(vars)), terms_(std::move(terms)) {
    for (const auto& [e, c] : terms_)
      if (e.size() != vars_.size()) throw mismatch_error("exponent vector width differs from variable table");
  }

  static MultiPoly constant(const VariableTable& vars, const Rational& c) {
    return MultiPoly(vars, Terms::monomial(Exponents(vars.size(), 0), c));
  }
  static MultiPoly variable(const VariableTable& vars, const std::string& name) {
    Exponents e(vars.size(), 0);
    e[vars.index_of(name)] = 1;
    return MultiPoly(vars, Terms::monomial(std::move(e)));
  }
  /// coeff * prod vars^exps
  static MultiPoly monomial(const VariableTable& vars, Exponents exps, const Rational& coeff = Rational(1)) {
    if (exps.size() != vars.size()) throw mismatch_error("exponent vector width differs from variable table");
    return MultiPoly(vars, Terms::monomial(std::move(exps), coeff));
  }

  const VariableTable& vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.is_zero(); }
  std::size_t size() const { return terms_.size(); }
  Rational coeff(const Exponents& e) const { return terms_.coeff(e); }

  /// Highest exponent of one variable, -1 for the zero polynomial.
  long degree_in(const std::string& name) const {
    std::size_t i = vars_.index_of(name);
    long d = -1;
    for (const auto& [e, c] : terms_) d = std::max<long>(d, e[i]);
    return d;
  }
  long total_degree() const {
    long d = -1;
    for (const auto& [e, c] : terms_) {
      long s = 0;
      for (auto x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  MultiPoly scaled(const Rational& c) const { return MultiPoly(vars_, terms_.scaled(c)); }
  MultiPoly operator-() const { return scaled(Rational(-1)); }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    check_same(a, b);
    return MultiPoly(a.vars_, a.terms_ + b.terms_);
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    check_same(a, b);
    return MultiPoly(a.vars_, a.terms_ - b.terms_);
  }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    check_same(a, b);
    Accumulator<Exponents> acc;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        acc.add(std::move(e), ca * cb);
      }
    }
    return MultiPoly(a.vars_, std::move(acc).finish());
  }
  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  MultiPoly pow(unsigned e) const {
    MultiPoly r = constant(vars_, Rational(1));
    MultiPoly b = *this;
    while (e) {
      if (e & 1) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  /// Re-expresses the polynomial over `target`. Every variable with a nonzero
  /// exponent must exist in `target`; target-only variables get exponent 0.
  MultiPoly embed(const VariableTable& target) const {
    std::vector<long> where(vars_.size(), -1);
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (target.contains(vars_[i])) where[i] = static_cast<long>(target.index_of(vars_[i]));
    std::vector<std::pair<Exponents, Rational>> out;
    for (const auto& [e, c] : terms_) {
      Exponents ne(target.size(), 0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (where[i] < 0) throw mismatch_error("variable '" + vars_[i] + "' missing from target table");
        ne[static_cast<std::size_t>(where[i])] = e[i];
      }
      out.emplace_back(std::move(ne), c);
    }
    return MultiPoly(target, Terms::from_terms(std::move(out)));
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.terms().rbegin(); it != terms_.terms().rend(); ++it) {
      const auto& [e, c] = *it;
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += vars_[i];
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      Rational a = c.sign() < 0 ? -c : c;
      std::string body = mono.empty() ? a.to_string() : (a.is_one() ? mono : a.to_string() + "*" + mono);
      if (first) s += c.sign() < 0 ? "-" + body : body;
      else s += (c.sign() < 0 ? " - " : " + ") + body;
      first = false;
    }
    return s;
  }

 private:
  static void check_same(const MultiPoly& a, const MultiPoly& b) {
    if (!(a.vars_ == b.vars_)) throw mismatch_error("polynomials over different variable tables");
  }

  VariableTable vars_;
  Terms terms_;
};

inline MultiPoly poly_add(const MultiPoly& a, const MultiPoly& b) { return a + b; }
inline MultiPoly poly_mul(const MultiPoly& a, const MultiPoly& b) { return a * b; }

/// (var - shift)^exponent, expanded.
inline MultiPoly poly_pow_linear(const VariableTable& vars, const std::string& var, const Rational& shift,
                                 unsigned exponent) {
  std::size_t vi = vars.index_of(var);
  std::vector<std::pair<Exponents, Rational>> terms;
  Rational neg = -shift;
  for (unsigned j = 0; j <= exponent; ++j) {
    Exponents e(vars.size(), 0);
    e[vi] = j;
    terms.emplace_back(std::move(e), binomial(exponent, j) * pow(neg, exponent - j));
  }
  return MultiPoly(vars, MultiPoly::Terms::from_terms(std::move(terms)));
}

/// Formal partial derivative.
inline MultiPoly poly_derive(const MultiPoly& p, const std::string& var) {
  std::size_t vi = p.vars().index_of(var);
  std::vector<std::pair<Exponents, Rational>> terms;
  for (const auto& [e, c] : p.terms()) {
    if (e[vi] == 0) continue;
    Exponents ne = e;
    --ne[vi];
    terms.emplace_back(std::move(ne), c * Rational(e[vi]));
  }
  return MultiPoly(p.vars(), MultiPoly::Terms::from_terms(std::move(terms)));
}

/// Replaces `var` by `replacement`; the replacement must only use variables of p's table.
inline MultiPoly poly_substitute(const MultiPoly& p, const std::string& var, const MultiPoly& replacement) {
  const VariableTable& vars = p.vars();
  std::size_t vi = vars.index_of(var);
  MultiPoly rep = replacement.embed(vars);
  std::vector<MultiPoly> powers{MultiPoly::constant(vars, Rational(1))};
  MultiPoly out(vars);
  for (const auto& [e, c] : p.terms()) {
    while (powers.size() <= e[vi]) powers.push_back(powers.back() * rep);
    Exponents rest = e;
    rest[vi] = 0;
    out += MultiPoly::monomial(vars, std::move(rest), c) * powers[e[vi]];
  }
  return out;
}

inline MultiPoly poly_evaluate(const MultiPoly& p, const std::string& var, const Rational& value) {
  return poly_substitute(p, var, MultiPoly::constant(p.vars(), value));
}

/// Exact quotient q with p = (var - root) * q. Throws if the remainder is nonzero.
inline MultiPoly poly_div_linear(const MultiPoly& p, const std::string& var, const Rational& root) {
  const VariableTable& vars = p.vars();
  std::size_t vi = vars.index_of(var);
  // Synthetic division per coefficient of the remaining variables:
  // walk exponents of `var` downwards, carrying the running quotient coefficient.
  std::vector<std::pair<Exponents, Rational>> quotient;
  // Group terms by their exponents with var zeroed out.
  std::vector<std::pair<Exponents, std::vector<std::pair<std::uint32_t, Rational>>>> groups;
  {
    std::vector<std::pair<Exponents, std::pair<std::uint32_t, Rational>>> flat;
    for (const auto& [e, c] : p.terms()) {
      Exponents rest = e;
      rest[vi] = 0;
      flat.push_back({std::move(rest), {e[vi], c}});
    }
    std::sort(flat.begin(), flat.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second.first > b.second.first;
    });
    for (auto& f : flat) {
      if (groups.empty() || groups.back().first != f.first) groups.push_back({f.first, {}});
      groups.back().second.push_back(std::move(f.second));
    }
  }
  for (const auto& [rest, coeffs] : groups) {
    std::uint32_t top = coeffs.front().first;
    std::vector<Rational> dense(top + 1);
    for (const auto& [d, c] : coeffs) dense[d] = c;
    Rational carry;
    for (std::uint32_t d = top; d >= 1; --d) {
      carry = dense[d] + carry * root;
      Exponents e = rest;
      e[vi] = d - 1;
      quotient.emplace_back(std::move(e), carry);
    }
    Rational remainder = dense[0] + carry * root;
    if (!remainder.is_zero())
      throw precondition_error("poly_div_linear: nonzero remainder " + remainder.to_string() + " dividing by (" +
                               var + " - " + root.to_string() + ")");
  }
  return MultiPoly(vars, MultiPoly::Terms::from_terms(std::move(quotient)));
}

}  // namespace virmod
