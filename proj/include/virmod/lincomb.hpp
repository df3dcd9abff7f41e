#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "virmod/error.hpp"
#include "virmod/rational.hpp"

namespace virmod {

/// Finite Rational-linear combination of keys, kept canonical: terms sorted
/// strictly increasing by key, no zero coefficients. The zero combination is
/// the empty one, so equality is plain term-list equality.
template <class Key, class Less = std::less<Key>>
class LinComb {
 public:
  using key_type = Key;
  using term_type = std::pair<Key, Rational>;
  using const_iterator = typename std::vector<term_type>::const_iterator;

  LinComb() = default;

  static LinComb monomial(Key key, Rational coeff = Rational(1)) {
    LinComb r;
    if (!coeff.is_zero()) r.terms_.emplace_back(std::move(key), std::move(coeff));
    return r;
  }

  /// Sorts, merges duplicate keys and drops zeros.
  static LinComb from_terms(std::vector<term_type> terms) {
    Less less;
    std::sort(terms.begin(), terms.end(),
              [&](const term_type& a, const term_type& b) { return less(a.first, b.first); });
    LinComb r;
    r.terms_.reserve(terms.size());
    for (auto& t : terms) {
      if (!r.terms_.empty() && !less(r.terms_.back().first, t.first)) {
        r.terms_.back().second += t.second;
        if (r.terms_.back().second.is_zero()) r.terms_.pop_back();
      } else if (!t.second.is_zero()) {
        r.terms_.push_back(std::move(t));
      }
    }
    return r;
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const_iterator begin() const { return terms_.begin(); }
  const_iterator end() const { return terms_.end(); }
  const std::vector<term_type>& terms() const { return terms_; }

  /// Term with the largest key. Requires a nonzero combination.
  const term_type& leading() const {
    if (terms_.empty()) throw precondition_error("leading term of zero combination");
    return terms_.back();
  }

  Rational coeff(const Key& key) const {
    Less less;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [&](const term_type& t, const Key& k) { return less(t.first, k); });
    if (it != terms_.end() && !less(key, it->first)) return it->second;
    return {};
  }

  LinComb scaled(const Rational& c) const {
    if (c.is_zero()) return {};
    LinComb r = *this;
    for (auto& t : r.terms_) t.second *= c;
    return r;
  }

  LinComb operator-() const { return scaled(Rational(-1)); }

  friend LinComb operator+(const LinComb& a, const LinComb& b) { return merge(a, b, Rational(1)); }
  friend LinComb operator-(const LinComb& a, const LinComb& b) { return merge(a, b, Rational(-1)); }
  LinComb& operator+=(const LinComb& o) { return *this = *this + o; }
  LinComb& operator-=(const LinComb& o) { return *this = *this - o; }

  /// a + c * b
  static LinComb axpy(const LinComb& a, const Rational& c, const LinComb& b) {
    if (c.is_zero()) return a;
    return merge(a, b, c);
  }

  friend bool operator==(const LinComb& a, const LinComb& b) { return a.terms_ == b.terms_; }

  /// Applies `f` to every key and re-canonicalizes (keys may collide).
  template <class F>
  auto map_keys(F&& f) const {
    using NewKey = std::decay_t<decltype(f(std::declval<const Key&>()))>;
    std::vector<std::pair<NewKey, Rational>> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) out.emplace_back(f(k), c);
    return LinComb<NewKey>::from_terms(std::move(out));
  }

  template <class Pred>
  LinComb filter(Pred&& keep) const {
    LinComb r;
    for (const auto& t : terms_)
      if (keep(t.first)) r.terms_.push_back(t);
    return r;
  }

 private:
  static LinComb merge(const LinComb& a, const LinComb& b, const Rational& cb) {
    Less less;
    LinComb r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && less(i->first, j->first))) {
        r.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || less(j->first, i->first)) {
        r.terms_.emplace_back(j->first, j->second * cb);
        ++j;
      } else {
        Rational c = i->second + j->second * cb;
        if (!c.is_zero()) r.terms_.emplace_back(i->first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<term_type> terms_;
};

/// Unordered sink for terms; `finish()` produces the canonical combination.
template <class Key, class Less = std::less<Key>>
class Accumulator {
 public:
  void add(Key key, Rational coeff) {
    if (!coeff.is_zero()) buf_.emplace_back(std::move(key), std::move(coeff));
  }
  void add(const LinComb<Key, Less>& v, const Rational& scale = Rational(1)) {
    if (scale.is_zero()) return;
    for (const auto& [k, c] : v) buf_.emplace_back(k, c * scale);
  }
  bool empty() const { return buf_.empty(); }
  LinComb<Key, Less> finish() && { return LinComb<Key, Less>::from_terms(std::move(buf_)); }

 private:
  std::vector<std::pair<Key, Rational>> buf_;
};

/// Accumulator that merges equal keys on arrival; cheaper than sorting when
/// many generated terms collide.
template <class Key, class Hash, class Less = std::less<Key>>
class HashAccumulator {
 public:
  void add(const Key& key, const Rational& coeff) {
    if (coeff.is_zero()) return;
    auto [it, fresh] = buf_.try_emplace(key, coeff);
    if (!fresh) it->second += coeff;
  }
  void add(const LinComb<Key, Less>& v, const Rational& scale = Rational(1)) {
    if (scale.is_zero()) return;
    for (const auto& [k, c] : v) add(k, c * scale);
  }
  bool empty() const { return buf_.empty(); }
  LinComb<Key, Less> finish() && {
    std::vector<std::pair<Key, Rational>> terms;
    terms.reserve(buf_.size());
    for (auto& [k, c] : buf_)
      if (!c.is_zero()) terms.emplace_back(k, std::move(c));
    return LinComb<Key, Less>::from_terms(std::move(terms));
  }

 private:
  std::unordered_map<Key, Rational, Hash> buf_;
};

}  // namespace virmod
