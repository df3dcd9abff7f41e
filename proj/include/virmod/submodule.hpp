#pragma once

// The chain W_0 < W_1 < ... inside Omega(lambda, alpha, h) (x) Omega(lambda, beta)
// and the quotient maps W_m / W_{m-1} -> Omega(lambda, alpha, h - m - beta).
// Elements are handled as polynomials in D1, D2, T where D1 is the derivation
// of whichever factor the case assigns to it; W_m is the span of
// D1^l (D1 + D2)^n C[T] for l <= m.

#include <string>

#include "virmod/error.hpp"
#include "virmod/multipoly.hpp"
#include "virmod/omega.hpp"
#include "virmod/tensor.hpp"

namespace virmod {

enum class SubmoduleCase {
  DTCarriesD1,  // D1 belongs to Omega(lambda, alpha, h), D2 to Omega(lambda, beta)
  DTCarriesD2,  // D1 belongs to Omega(lambda, beta), D2 to Omega(lambda, alpha, h)
};

inline const VariableTable& plain_vars() {
  static const VariableTable v{"D1", "D2", "T"};
  return v;
}
inline const VariableTable& u_vars() {
  static const VariableTable v{"D1", "U", "T"};
  return v;
}

/// Shape check: one factor of each family, equal lambda and mu, no V.
inline void require_same_pair(const TensorSpec& spec) {
  if (spec.m() != 1 || spec.n() != 1 || spec.v)
    throw precondition_error("W_m machinery needs exactly Omega(lambda, alpha, h) (x) Omega(lambda, beta)");
  if (spec.dt[0].lambda() != spec.d[0].mu()) throw precondition_error("W_m machinery needs lambda = mu");
}

inline MultiPoly to_plain(const TensorElement& f, const TensorSpec& spec, SubmoduleCase c) {
  require_same_pair(spec);
  std::vector<std::pair<Exponents, Rational>> t;
  for (const auto& [x, a] : f) {
    std::uint32_t rdt = x.e[r_index(spec, 0)], p = x.e[p_index(spec, 0)], rd = x.e[rd_index(spec, 0)];
    if (c == SubmoduleCase::DTCarriesD1) t.emplace_back(Exponents{rdt, rd, p}, a);
    else t.emplace_back(Exponents{rd, rdt, p}, a);
  }
  return MultiPoly(plain_vars(), MultiPoly::Terms::from_terms(std::move(t)));
}

inline TensorElement from_plain(const MultiPoly& f, const TensorSpec& spec, SubmoduleCase c) {
  require_same_pair(spec);
  MultiPoly g = f.embed(plain_vars());
  std::vector<std::pair<TensorMonomial, Rational>> t;
  for (const auto& [e, a] : g.terms()) {
    unsigned rdt = c == SubmoduleCase::DTCarriesD1 ? e[0] : e[1];
    unsigned rd = c == SubmoduleCase::DTCarriesD1 ? e[1] : e[0];
    t.emplace_back(make_monomial(spec, {rdt}, {e[2]}, {rd}), a);
  }
  return TensorElement::from_terms(std::move(t));
}

/// Rewrites in the basis D1, U = D1 + D2, T.
inline MultiPoly to_u_basis(const MultiPoly& f) {
  static const VariableTable all{"D1", "U", "D2", "T"};
  MultiPoly g = f.embed(plain_vars()).embed(all);
  MultiPoly rep = MultiPoly::variable(all, "U") - MultiPoly::variable(all, "D1");
  return poly_substitute(g, "D2", rep).embed(u_vars());
}

inline MultiPoly from_u_basis(const MultiPoly& f) {
  static const VariableTable all{"D1", "U", "D2", "T"};
  MultiPoly g = f.embed(u_vars()).embed(all);
  MultiPoly rep = MultiPoly::variable(all, "D1") + MultiPoly::variable(all, "D2");
  return poly_substitute(g, "U", rep).embed(plain_vars());
}

/// f in W_m iff its D1-degree in the U basis is at most m.
inline bool wm_member(const MultiPoly& f, unsigned m) {
  return to_u_basis(f).degree_in("D1") <= static_cast<long>(m);
}

/// Omega(lambda, alpha, h - m - beta)
inline OmegaDTSpec quotient_target(const TensorSpec& spec, unsigned m) {
  require_same_pair(spec);
  const auto& w = spec.dt[0];
  MultiPoly h = w.h() - MultiPoly::constant(t_vars(), Rational(static_cast<long>(m)) + spec.d[0].beta());
  return OmegaDTSpec(w.lambda(), w.alpha(), h);
}

/// D1^m U^n T^p + W_{m-1}  ->  D^n T^p
inline MultiPoly quotient_phi(const MultiPoly& f, unsigned m) {
  MultiPoly u = to_u_basis(f);
  if (u.degree_in("D1") > static_cast<long>(m)) throw precondition_error("element is not in W_m");
  std::vector<std::pair<Exponents, Rational>> t;
  for (const auto& [e, a] : u.terms())
    if (e[0] == m) t.emplace_back(Exponents{e[1], e[2]}, a);
  return MultiPoly(dt_vars(), MultiPoly::Terms::from_terms(std::move(t)));
}

}  // namespace virmod
