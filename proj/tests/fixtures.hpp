#pragma once

// Tensor-module fixtures and reference computations shared by the unit and
// acceptance tests. The symbolic expansion here treats k as a polynomial
// variable and never touches the Vandermonde solver.

#include <map>
#include <random>
#include <tuple>
#include <vector>

#include "virmod/submodule.hpp"
#include "virmod/tensor.hpp"
#include "test_util.hpp"

namespace testutil {

using namespace virmod;

inline OmegaDTSpec dt_factor(const char* lambda, const char* alpha, const char* xi, const char* eta) {
  return OmegaDTSpec::linear(R(lambda), R(alpha), R(xi), R(eta));
}
inline OmegaDSpec d_factor(const char* mu, const char* beta) { return OmegaDSpec(R(mu), R(beta)); }
inline VFactorSpec verma_v(const char* theta, const char* h) { return VFactorSpec::make_verma(R(theta), R(h)); }

/// The desk-scale instance: lambda=2, alpha=1, h=t, mu=3, beta=2, Verma theta=1/2, h=1/3.
inline TensorSpec spec_m1n1() {
  return TensorSpec{{dt_factor("2", "1", "1", "0")}, {d_factor("3", "2")}, verma_v("1/2", "1/3")};
}
inline TensorSpec spec_m1n0() { return TensorSpec{{dt_factor("-3/2", "2/5", "3", "-1")}, {}, verma_v("-2", "7/4")}; }
inline TensorSpec spec_m0n1() { return TensorSpec{{}, {d_factor("5/3", "-1/2")}, verma_v("3", "2/9")}; }
inline TensorSpec spec_m2n1() {
  return TensorSpec{{dt_factor("2", "3/2", "2", "1"), dt_factor("-1/2", "-2", "-1", "3")},
                    {d_factor("3", "5/4")},
                    verma_v("-2", "7/4")};
}
inline TensorSpec spec_m1n2() {
  return TensorSpec{{dt_factor("3/2", "-1", "1/2", "2")}, {d_factor("-2", "3"), d_factor("1/3", "-3/4")},
                    verma_v("5/2", "-1/5")};
}

/// All monomials with every slot exponent <= max_exp and V-level <= max_level.
inline std::vector<TensorMonomial> box_basis(const TensorSpec& spec, unsigned max_exp, unsigned max_level) {
  std::vector<PBWMonomial> vs;
  if (spec.v) {
    for (unsigned l = 0; l <= max_level; ++l)
      for (auto& m : verma_basis(l)) vs.push_back(m);
  } else {
    vs.push_back(PBWMonomial{});
  }
  std::vector<TensorMonomial> out;
  std::size_t slots = spec.slot_count();
  std::vector<std::uint16_t> e(slots, 0);
  for (;;) {
    for (const auto& v : vs) {
      TensorMonomial x;
      x.e.assign(e.begin(), e.end());
      x.v = v;
      out.push_back(x);
    }
    std::size_t i = 0;
    while (i < slots && e[i] == max_exp) e[i++] = 0;
    if (i == slots) break;
    ++e[i];
  }
  return out;
}

/// Random element with total Omega degree <= max_deg and V-level <= max_level.
inline TensorElement random_element(std::mt19937_64& rng, const TensorSpec& spec, unsigned max_deg,
                                    unsigned max_level, unsigned max_terms = 4) {
  for (;;) {
    std::vector<std::pair<TensorMonomial, Rational>> t;
    unsigned n = 1 + static_cast<unsigned>(rng() % max_terms);
    for (unsigned it = 0; it < n; ++it) {
      TensorMonomial x;
      x.e.resize(spec.slot_count(), 0);
      unsigned budget = static_cast<unsigned>(rng() % (max_deg + 1));
      while (budget--) ++x.e[rng() % spec.slot_count()];
      if (spec.v) {
        auto level = static_cast<unsigned>(rng() % (max_level + 1));
        auto basis = verma_basis(level);
        x.v = basis[rng() % basis.size()];
      }
      t.emplace_back(std::move(x), random_nonzero(rng, 4));
    }
    auto f = TensorElement::from_terms(std::move(t));
    if (!f.is_zero()) return f;
  }
}

using ComponentKey = std::tuple<SlotKind, std::size_t, unsigned>;

/// d_k f for large k expanded with k symbolic: coefficient of k^s base^k per slot.
inline std::map<ComponentKey, TensorElement> symbolic_components(const TensorElement& f, const TensorSpec& spec) {
  static const VariableTable kdt{"K", "D", "T"};
  static const VariableTable kd{"K", "D"};
  std::map<ComponentKey, std::vector<std::pair<TensorMonomial, Rational>>> acc;
  MultiPoly K = MultiPoly::variable(kdt, "K"), D = MultiPoly::variable(kdt, "D");
  MultiPoly Kd = MultiPoly::variable(kd, "K"), Dd = MultiPoly::variable(kd, "D");
  for (const auto& [x, c] : f) {
    for (std::size_t i = 0; i < spec.m(); ++i) {
      unsigned r = x.e[r_index(spec, i)], p = x.e[p_index(spec, i)];
      const auto& w = spec.dt[i];
      MultiPoly tp = MultiPoly::monomial(t_vars(), {p});
      MultiPoly inner = D * tp.embed(kdt) + K * G_op(tp, w).embed(kdt) -
                        K * K * F_op(tp, w).embed(kdt).scaled(w.alpha());
      MultiPoly full = (D - K).pow(r) * inner;
      for (const auto& [e, a] : full.terms()) {
        TensorMonomial y = x;
        y.e[r_index(spec, i)] = static_cast<std::uint16_t>(e[1]);
        y.e[p_index(spec, i)] = static_cast<std::uint16_t>(e[2]);
        acc[{SlotKind::DT, i, e[0]}].emplace_back(y, a * c);
      }
    }
    for (std::size_t j = 0; j < spec.n(); ++j) {
      unsigned r = x.e[rd_index(spec, j)];
      MultiPoly full = (Dd - Kd).pow(r) * (Dd - Kd.scaled(spec.d[j].beta()));
      for (const auto& [e, a] : full.terms()) {
        TensorMonomial y = x;
        y.e[rd_index(spec, j)] = static_cast<std::uint16_t>(e[1]);
        acc[{SlotKind::D, j, e[0]}].emplace_back(y, a * c);
      }
    }
  }
  std::map<ComponentKey, TensorElement> out;
  for (auto& [k, t] : acc) {
    auto v = TensorElement::from_terms(std::move(t));
    if (!v.is_zero()) out.emplace(k, std::move(v));
  }
  return out;
}

/// Replaces the whole contents of one dt slot by a polynomial in D, T.
inline TensorElement replace_dt_slot(const TensorElement& f, const TensorSpec& spec, std::size_t i,
                                     const MultiPoly& slot) {
  std::vector<std::pair<TensorMonomial, Rational>> t;
  MultiPoly s = slot.embed(dt_vars());
  for (const auto& [x, c] : f)
    for (const auto& [e, a] : s.terms()) {
      TensorMonomial y = x;
      y.e[r_index(spec, i)] = static_cast<std::uint16_t>(e[0]);
      y.e[p_index(spec, i)] = static_cast<std::uint16_t>(e[1]);
      t.emplace_back(std::move(y), a * c);
    }
  return TensorElement::from_terms(std::move(t));
}

inline TensorElement replace_d_slot(const TensorElement& f, const TensorSpec& spec, std::size_t j,
                                    const MultiPoly& slot) {
  std::vector<std::pair<TensorMonomial, Rational>> t;
  MultiPoly s = slot.embed(d_vars());
  for (const auto& [x, c] : f)
    for (const auto& [e, a] : s.terms()) {
      TensorMonomial y = x;
      y.e[rd_index(spec, j)] = static_cast<std::uint16_t>(e[0]);
      t.emplace_back(std::move(y), a * c);
    }
  return TensorElement::from_terms(std::move(t));
}

}  // namespace testutil
