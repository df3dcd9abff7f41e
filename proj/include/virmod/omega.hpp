#pragma once

#include <string>

#include "virmod/error.hpp"
#include "virmod/multipoly.hpp"
#include "virmod/rational.hpp"

namespace virmod {

// Variable tables for single-factor elements: C[D, T] for Omega(lambda, alpha, h),
// C[D] for Omega(mu, beta), C[T] for h and the arguments of F and G.
inline const VariableTable& dt_vars() {
  static const VariableTable v{"D", "T"};
  return v;
}
inline const VariableTable& d_vars() {
  static const VariableTable v{"D"};
  return v;
}
inline const VariableTable& t_vars() {
  static const VariableTable v{"T"};
  return v;
}

/// Parameters of Omega(lambda, alpha, h) on C[D, T].
class OmegaDTSpec {
 public:
  OmegaDTSpec(Rational lambda, Rational alpha, MultiPoly h)
      : lambda_(std::move(lambda)), alpha_(std::move(alpha)), h_(h.embed(t_vars())) {
    if (lambda_.is_zero()) throw precondition_error("Omega(lambda, alpha, h) requires lambda != 0");
    h_at_alpha_ = poly_evaluate(h_, "T", alpha_).coeff(Exponents{0});
    quotient_ = poly_div_linear(h_ - MultiPoly::constant(t_vars(), h_at_alpha_), "T", alpha_);
  }

  /// h = xi * t + eta.
  static OmegaDTSpec linear(Rational lambda, Rational alpha, const Rational& xi, const Rational& eta) {
    MultiPoly h = MultiPoly::variable(t_vars(), "T").scaled(xi) + MultiPoly::constant(t_vars(), eta);
    return OmegaDTSpec(std::move(lambda), std::move(alpha), std::move(h));
  }

  const Rational& lambda() const { return lambda_; }
  const Rational& alpha() const { return alpha_; }
  const MultiPoly& h() const { return h_; }
  const Rational& h_at_alpha() const { return h_at_alpha_; }
  /// (h(t) - h(alpha)) / (t - alpha)
  const MultiPoly& quotient() const { return quotient_; }
  long degree_h() const { return h_.degree_in("T"); }

  Rational xi() const {
    require_linear();
    return h_.coeff(Exponents{1});
  }
  Rational eta() const {
    require_linear();
    return h_.coeff(Exponents{0});
  }

  friend bool operator==(const OmegaDTSpec& a, const OmegaDTSpec& b) {
    return a.lambda_ == b.lambda_ && a.alpha_ == b.alpha_ && a.h_ == b.h_;
  }

 private:
  void require_linear() const {
    if (degree_h() != 1) throw precondition_error("h must have degree 1");
  }

  Rational lambda_;
  Rational alpha_;
  MultiPoly h_;
  Rational h_at_alpha_;
  MultiPoly quotient_;
};

/// Parameters of Omega(mu, beta) on C[D].
class OmegaDSpec {
 public:
  OmegaDSpec(Rational mu, Rational beta) : mu_(std::move(mu)), beta_(std::move(beta)) {
    if (mu_.is_zero()) throw precondition_error("Omega(mu, beta) requires mu != 0");
  }
  const Rational& mu() const { return mu_; }
  const Rational& beta() const { return beta_; }
  friend bool operator==(const OmegaDSpec&, const OmegaDSpec&) = default;

 private:
  Rational mu_;
  Rational beta_;
};

/// F(f) = (h(t) - h(alpha)) / (t - alpha) * f - f'
inline MultiPoly F_op(const MultiPoly& f, const OmegaDTSpec& spec) {
  MultiPoly g = f.embed(t_vars());
  return spec.quotient() * g - poly_derive(g, "T");
}

/// G(f) = h(alpha) f + t F(f)
inline MultiPoly G_op(const MultiPoly& f, const OmegaDTSpec& spec) {
  MultiPoly g = f.embed(t_vars());
  return g.scaled(spec.h_at_alpha()) + MultiPoly::variable(t_vars(), "T") * F_op(g, spec);
}

/// d_k on Omega(lambda, alpha, h):
/// d_k(D^i f) = lambda^k (D - k)^i (D f + k G(f) - k^2 alpha F(f)).
inline MultiPoly act_omega_dt(long k, const MultiPoly& elem, const OmegaDTSpec& spec) {
  const VariableTable& vars = dt_vars();
  MultiPoly x = elem.embed(vars);
  MultiPoly out(vars);
  if (x.is_zero()) return out;
  const Rational kk(k);
  MultiPoly D = MultiPoly::variable(vars, "D");
  for (const auto& [e, c] : x.terms()) {
    Exponents te{e[1]};
    MultiPoly f = MultiPoly::monomial(t_vars(), te);
    MultiPoly inner = D * f.embed(vars) + G_op(f, spec).embed(vars).scaled(kk) -
                      F_op(f, spec).embed(vars).scaled(kk * kk * spec.alpha());
    out += (poly_pow_linear(vars, "D", kk, e[0]) * inner).scaled(c);
  }
  return out.scaled(pow(spec.lambda(), k));
}

/// d_k on Omega(mu, beta): d_k(D^n) = mu^k (D - k)^n (D - beta k).
inline MultiPoly act_omega_d(long k, const MultiPoly& elem, const OmegaDSpec& spec) {
  const VariableTable& vars = d_vars();
  MultiPoly x = elem.embed(vars);
  MultiPoly out(vars);
  if (x.is_zero()) return out;
  const Rational kk(k);
  MultiPoly last = MultiPoly::variable(vars, "D") - MultiPoly::constant(vars, spec.beta() * kk);
  for (const auto& [e, c] : x.terms()) out += (poly_pow_linear(vars, "D", kk, e[0]) * last).scaled(c);
  return out.scaled(pow(spec.mu(), k));
}

inline bool is_simple_omega_dt(const OmegaDTSpec& spec) { return spec.degree_h() == 1 && !spec.alpha().is_zero(); }
inline bool is_simple_omega_d(const OmegaDSpec& spec) { return spec.beta() != Rational(1); }

}  // namespace virmod
