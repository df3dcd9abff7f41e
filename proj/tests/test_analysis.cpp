#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "virmod/analysis.hpp"
#include "fixtures.hpp"

using namespace virmod;
using namespace testutil;

namespace {

// rank of the component set computed with k symbolic (no sampling, no solve)
std::size_t symbolic_rank(const TensorElement& f, const TensorSpec& spec) {
  std::vector<TensorElement> comps;
  for (auto& [key, v] : symbolic_components(f, spec)) comps.push_back(v);
  return exact_rank(comps);
}

TensorElement mono(const TensorSpec& spec, std::vector<unsigned> r, std::vector<unsigned> p, std::vector<unsigned> rd,
                   PBWMonomial v = {}) {
  return TensorElement::monomial(make_monomial(spec, r, p, rd, std::move(v)));
}

}  // namespace

TEST(Rank, VacuumIsTwoMPlusNPlusOne) {
  for (const auto& spec : {spec_m1n1(), spec_m2n1(), spec_m1n2(), spec_m1n0(), spec_m0n1()}) {
    auto rep = rank_invariant(vacuum(spec), spec);
    EXPECT_EQ(rep.value, 2 * spec.m() + spec.n() + 1);
    EXPECT_TRUE(rep.stabilized);
  }
}

TEST(Rank, MatchesSymbolicComponentRank) {
  std::mt19937_64 rng(11);
  for (const auto& spec : {spec_m1n1(), spec_m2n1(), spec_m1n2()}) {
    for (int it = 0; it < 15; ++it) {
      auto f = random_element(rng, spec, 3, 2);
      auto rep = rank_invariant(f, spec);
      EXPECT_EQ(rep.value, symbolic_rank(f, spec));
      EXPECT_TRUE(rep.stabilized);
      EXPECT_EQ(rank_invariant(f.scaled(R("-7/3")), spec).value, rep.value);
    }
  }
}

TEST(Rank, NonVacuumExceedsBound) {
  auto spec = spec_m1n1();
  EXPECT_GT(rank_invariant(mono(spec, {1}, {0}, {0}), spec).value, 4u);
  // with m = 1, n = 0 the vector t (x) v reaches the vacuum value
  auto s10 = spec_m1n0();
  EXPECT_EQ(rank_invariant(mono(s10, {0}, {1}, {}), s10).value, 3u);
}

TEST(Certify, VacuumHasTrivialStageOne) {
  auto spec = spec_m1n1();
  auto f = vacuum(spec);
  auto cert = certify_irreducible(spec, f, 1, 1);
  EXPECT_EQ(cert.vacuum_step, 1u);  // input, then normalization only
  EXPECT_TRUE(replay_certificate(cert, spec, f).ok);
}

TEST(Certify, DerivativeTimesT) {
  auto spec = spec_m1n1();
  auto f = mono(spec, {1}, {1}, {0});
  auto cert = certify_irreducible(spec, f, 2, 1);
  EXPECT_GT(cert.vacuum_step, 1u);
  auto rep = replay_certificate(cert, spec, f);
  EXPECT_TRUE(rep.ok) << rep.failure;
  std::vector<TensorElement> span;
  for (const auto& e : cert.spanning) span.push_back(cert.trace[e.step].value);
  EXPECT_EQ(exact_rank(span), bounded_monomials(spec, 2, 1).size());
  EXPECT_EQ(span.size(), 27u * 2u);
}

TEST(Certify, RandomStartsReplay) {
  std::mt19937_64 rng(3);
  for (const auto& spec : {spec_m1n1(), spec_m2n1()}) {
    for (int it = 0; it < 4; ++it) {
      auto f = random_element(rng, spec, 2, 1);
      auto cert = certify_irreducible(spec, f, 1, 1);
      auto rep = replay_certificate(cert, spec, f);
      EXPECT_TRUE(rep.ok) << rep.failure;
    }
  }
}

TEST(Certify, TamperedCertificateFailsReplay) {
  auto spec = spec_m1n1();
  auto f = mono(spec, {2}, {1}, {1}, PBWMonomial{1});
  auto cert = certify_irreducible(spec, f, 1, 1);
  ASSERT_TRUE(replay_certificate(cert, spec, f).ok);

  EXPECT_FALSE(replay_certificate(cert, spec, f.scaled(Rational(2))).ok);  // different input

  auto bad = cert;
  for (auto& s : bad.trace)
    if (s.kind == StepKind::Combine && !s.terms.empty()) {
      s.terms[0].second += Rational(1);
      break;
    }
  EXPECT_FALSE(replay_certificate(bad, spec, f).ok);

  bad = cert;
  bad.spanning.pop_back();
  EXPECT_FALSE(replay_certificate(bad, spec, f).ok);
}

TEST(Certify, Preconditions) {
  auto same = spec_m1n1();
  same.d[0] = d_factor("2", "2");  // mu = lambda
  EXPECT_THROW(certify_irreducible(same, vacuum(same), 1, 1), precondition_error);
  auto quadratic = spec_m1n1();
  MultiPoly t = MultiPoly::variable(t_vars(), "T");
  quadratic.dt[0] = OmegaDTSpec(R("2"), R("1"), t * t);
  EXPECT_THROW(certify_irreducible(quadratic, vacuum(quadratic), 1, 1), precondition_error);
  auto singular = spec_m1n1();
  singular.v = verma_v("1/2", "0");  // d_{-1} v_0 is singular
  EXPECT_THROW(certify_irreducible(singular, vacuum(singular), 1, 1), precondition_error);
  auto beta_one = spec_m1n1();
  beta_one.d[0] = d_factor("3", "1");
  EXPECT_THROW(certify_irreducible(beta_one, vacuum(beta_one), 1, 1), precondition_error);
}

TEST(Classify, CanonicalForm) {
  TensorSpec a{{OmegaDTSpec::linear(R("2"), R("3"), R("5"), R("7"))}, {}, std::nullopt};
  auto c = canonicalize(a);
  ASSERT_EQ(c.dt_part.size(), 1u);
  EXPECT_EQ(c.dt_part[0], std::make_pair(R("2"), R("15")));
  TensorSpec b{{OmegaDTSpec::linear(R("2"), R("15"), R("1"), R("0"))}, {}, std::nullopt};
  EXPECT_EQ(canonicalize(b), c);
  auto p = spec_m2n1();
  auto q = p;
  std::swap(q.dt[0], q.dt[1]);
  EXPECT_EQ(canonicalize(p), canonicalize(q));
}

TEST(Classify, PermutationWitness) {
  auto a = spec_m2n1();
  auto b = a;
  std::swap(b.dt[0], b.dt[1]);
  auto r = specs_isomorphic(a, b);
  EXPECT_EQ(r.verdict, IsoVerdict::Isomorphic);
  EXPECT_EQ(r.dt_perm, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(r.d_perm, (std::vector<std::size_t>{0}));
}

TEST(Classify, Perturbations) {
  TensorSpec a{{OmegaDTSpec::linear(R("2"), R("15"), R("1"), R("0"))}, {d_factor("3", "2")}, verma_v("1/2", "1/3")};
  auto b = a;
  b.dt[0] = OmegaDTSpec::linear(R("2"), R("14"), R("1"), R("0"));
  EXPECT_EQ(specs_isomorphic(a, b).verdict, IsoVerdict::NotIsomorphic);
  EXPECT_EQ(specs_isomorphic(spec_m1n2(), spec_m2n1()).verdict, IsoVerdict::NotIsomorphic);
  b = a;
  b.v = verma_v("1/2", "1/4");
  EXPECT_EQ(specs_isomorphic(a, b).verdict, IsoVerdict::NotIsomorphic);
}

TEST(Classify, InducedPresentationsAreUnknownUnlessIdentical) {
  auto a = spec_m1n1();
  auto b = a;
  FiniteAction one{1, {{LinComb<std::uint32_t>::monomial(0, R("1/3"))}}};
  b.v = VFactorSpec::make_induced(InducedData{R("1/2"), 0, one});
  EXPECT_EQ(specs_isomorphic(a, b).verdict, IsoVerdict::Unknown);
  EXPECT_EQ(specs_isomorphic(b, b).verdict, IsoVerdict::Isomorphic);
  auto c = b;
  c.v = VFactorSpec::make_induced(InducedData{R("5/2"), 0, one});
  EXPECT_EQ(specs_isomorphic(b, c).verdict, IsoVerdict::NotIsomorphic);  // central charge
}

TEST(Classify, CanonicalIntertwinerCommutesWithAction) {
  for (const auto& w : {OmegaDTSpec::linear(R("2"), R("3"), R("5"), R("7")),
                        OmegaDTSpec::linear(R("-1/2"), R("-2"), R("-1"), R("3")),
                        OmegaDTSpec::linear(R("3/2"), R("1"), R("1/2"), R("0"))}) {
    OmegaDTSpec target = OmegaDTSpec::linear(w.lambda(), w.alpha() * w.xi(), R("1"), R("0"));
    auto psi = canonical_intertwiner(w, 6);
    for (unsigned r = 0; r <= 3; ++r)
      for (unsigned p = 0; p <= 3; ++p)
        for (long k = -4; k <= 4; ++k) {
          MultiPoly x = MultiPoly::monomial(dt_vars(), {r, p});
          EXPECT_EQ(apply_intertwiner(psi, act_omega_dt(k, x, w)), act_omega_dt(k, apply_intertwiner(psi, x), target));
        }
  }
}

TEST(Classify, IsomorphicSpecsShareVacuumStatistics) {
  auto a = spec_m2n1();
  auto b = canonical_representative(a);
  std::swap(b.dt[0], b.dt[1]);
  ASSERT_EQ(specs_isomorphic(a, b).verdict, IsoVerdict::Isomorphic);
  EXPECT_EQ(vacuum_statistics(a), vacuum_statistics(b));
}

TEST(Distinguish, PureOmega) {
  TensorSpec pure2{{}, {d_factor("3", "2"), d_factor("5", "1/2")}, std::nullopt};
  EXPECT_TRUE(distinguish_pure_omega(spec_m1n1(), pure2).distinguishable);
  TensorSpec m2{{dt_factor("2", "1", "1", "0"), dt_factor("3", "2", "1", "1")}, {}, std::nullopt};
  EXPECT_TRUE(distinguish_pure_omega(m2, spec_m0n1()).distinguishable);
  EXPECT_THROW(distinguish_pure_omega(spec_m0n1(), pure2), precondition_error);
}

TEST(LocalFiniteness, IteratesAreIndependent) {
  EXPECT_EQ(non_local_finiteness_witness(spec_m1n1(), 1, 4).rank, 4u);
  EXPECT_EQ(non_local_finiteness_witness(spec_m1n1(), 2, 1).rank, 1u);
  EXPECT_EQ(non_local_finiteness_witness(spec_m1n0(), 1, 3).rank, 3u);
}

TEST(Identity, BinomialVanishing) {
  EXPECT_EQ(binomial_vanishing(2, 1), Rational(0));
  EXPECT_EQ(binomial_vanishing(3, 2), Rational(0));
  EXPECT_EQ(binomial_vanishing(2, 2), Rational(2));
  // sum equals r! S(j, r) with Stirling numbers of the second kind
  std::vector<std::vector<Rational>> S(13, std::vector<Rational>(13));
  S[0][0] = 1;
  for (unsigned j = 1; j <= 12; ++j)
    for (unsigned r = 1; r <= j; ++r) S[j][r] = Rational(static_cast<long>(r)) * S[j - 1][r] + S[j - 1][r - 1];
  for (unsigned r = 1; r <= 10; ++r)
    for (unsigned j = 0; j <= 12; ++j) EXPECT_EQ(binomial_vanishing(r, j), factorial(r) * S[j][r]) << r << " " << j;
}

TEST(NM, ActionExamplesAndBracket) {
  auto d = bundled_nm_data();
  validate_nm(d);
  NMElement w = NMElement::monomial({2, 5});
  // m = 0: n w + beta w
  NMElement expect = NMElement::from_terms({{{2, 5}, Rational(5)}, {{2, 6}, Rational(1)}, {{2, 4}, Rational(2)}});
  EXPECT_EQ(nm_act(0, w, d), expect);
  for (std::uint32_t b = 0; b < 3; ++b)
    for (long n = -2; n <= 2; ++n) {
      NMElement x = NMElement::monomial({b, n});
      for (long i = -3; i <= 3; ++i)
        for (long j = -3; j <= 3; ++j) {
          NMElement lhs = nm_act(i, nm_act(j, x, d), d) - nm_act(j, nm_act(i, x, d), d);
          EXPECT_EQ(lhs, nm_act(i + j, x, d).scaled(Rational(j - i)));  // c acts by 0
        }
    }
  EXPECT_THROW(validate_nm(NMData{d.m, LaurentPoly::monomial(0, Rational(3))}), precondition_error);
}

TEST(NM, OmegaVanishesAboveFourAndTopTermIsSixDbarSquared) {
  auto d = bundled_nm_data();
  for (std::uint32_t b = 0; b < 3; ++b)
    for (long n = -2; n <= 2; ++n) {
      NMElement x = NMElement::monomial({b, n});
      for (long l = -2; l <= 2; ++l)
        for (long m = -2; m <= 2; ++m) {
          for (unsigned r = 5; r <= 7; ++r) EXPECT_TRUE(nm_omega(r, l, m, x, d).is_zero());
          // leading i^4 coefficient of (l-m-i)^2/2 (m+i)^2/2 is 1/4, and the
          // alternating sum of i^4 is 4!, giving 6 = 4!/(2!)^2
          EXPECT_EQ(nm_omega(4, l, m, x, d), nm_top_square(x, d, l).scaled(Rational(6)));
        }
    }
}
