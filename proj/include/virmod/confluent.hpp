#pragma once

#include <cstddef>
#include <vector>

#include "virmod/error.hpp"
#include "virmod/linalg.hpp"
#include "virmod/rational.hpp"

namespace virmod {

/// Generalized Vandermonde data: column functions n^d * base_j^n for
/// d < multiplicity_j, sampled at rows n = offset, ..., offset + s - 1.
struct ConfluentSpec {
  std::vector<Rational> bases;
  std::vector<unsigned> multiplicities;
  unsigned offset = 0;

  std::size_t size() const {
    std::size_t s = 0;
    for (auto m : multiplicities) s += m;
    return s;
  }

  void validate() const {
    if (bases.size() != multiplicities.size())
      throw precondition_error("confluent spec: bases and multiplicities differ in length");
    for (std::size_t i = 0; i < bases.size(); ++i) {
      if (bases[i].is_zero()) throw precondition_error("confluent spec: zero base");
      if (multiplicities[i] == 0) throw precondition_error("confluent spec: zero multiplicity");
      for (std::size_t j = i + 1; j < bases.size(); ++j)
        if (bases[i] == bases[j]) throw precondition_error("confluent spec: repeated base " + bases[i].to_string());
    }
  }
};

inline Matrix confluent_vandermonde(const ConfluentSpec& spec) {
  spec.validate();
  std::size_t s = spec.size();
  Matrix m(s, s);
  std::size_t col = 0;
  for (std::size_t j = 0; j < spec.bases.size(); ++j) {
    for (unsigned d = 0; d < spec.multiplicities[j]; ++d, ++col) {
      for (std::size_t row = 0; row < s; ++row) {
        long long n = static_cast<long long>(spec.offset + row);
        m(row, col) = pow(Rational(n), d) * pow(spec.bases[j], n);
      }
    }
  }
  return m;
}

/// s!! = s! (s-1)! ... 1!, with 0!! = 1.
inline Rational superfactorial(unsigned s) {
  Rational r(1);
  for (unsigned q = 1; q <= s; ++q) r *= factorial(q);
  return r;
}

/// Closed form of det(confluent_vandermonde(spec)).
inline Rational confluent_det_formula(const ConfluentSpec& spec) {
  spec.validate();
  Rational det(1);
  const auto& b = spec.bases;
  const auto& s = spec.multiplicities;
  for (std::size_t j = 0; j < b.size(); ++j) {
    long long e2 = static_cast<long long>(s[j]) * (static_cast<long long>(s[j]) + 2LL * spec.offset - 1);
    det *= superfactorial(s[j] - 1) * pow(b[j], e2 / 2);
    for (std::size_t i = 0; i < j; ++i) det *= pow(b[j] - b[i], static_cast<long long>(s[i]) * s[j]);
  }
  return det;
}

}  // namespace virmod
