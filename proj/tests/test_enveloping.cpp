#include <gtest/gtest.h>

#include <map>
#include <random>
#include <vector>

#include "virmod/enveloping.hpp"
#include "test_util.hpp"

using namespace virmod;
using testutil::R;

namespace {

// Reference implementation: rewrites arbitrary generator words by adjacent
// swaps until they are normal ordered. Words are read right to left onto v_h.
using Word = std::vector<long>;

std::map<Word, Rational> naive_normalize(std::map<Word, Rational> todo, const VermaData& v) {
  std::map<Word, Rational> done;
  auto push = [](std::map<Word, Rational>& m, const Word& w, const Rational& c) {
    if (c.is_zero()) return;
    auto& x = m[w];
    x += c;
    if (x.is_zero()) m.erase(w);
  };
  while (!todo.empty()) {
    auto [w, c] = *todo.begin();
    todo.erase(todo.begin());
    long last_nonneg = -1;
    for (std::size_t p = 0; p < w.size(); ++p)
      if (w[p] >= 0) last_nonneg = static_cast<long>(p);
    std::size_t p;
    if (last_nonneg >= 0) {
      p = static_cast<std::size_t>(last_nonneg);
      if (p + 1 == w.size()) {
        if (w[p] == 0) {
          Word u(w.begin(), w.end() - 1);
          push(todo, u, c * v.h);
        }
        continue;
      }
    } else {
      p = w.size();
      for (std::size_t q = 0; q + 1 < w.size(); ++q)
        if (w[q] < w[q + 1]) {
          p = q;
          break;
        }
      if (p == w.size()) {
        push(done, w, c);
        continue;
      }
    }
    long x = w[p], y = w[p + 1];
    Word swapped = w;
    std::swap(swapped[p], swapped[p + 1]);
    push(todo, swapped, c);
    Word merged(w.begin(), w.begin() + static_cast<long>(p));
    merged.push_back(x + y);
    merged.insert(merged.end(), w.begin() + static_cast<long>(p) + 2, w.end());
    push(todo, merged, c * Rational(y - x));
    if (x == -y) {
      Word dropped(w.begin(), w.begin() + static_cast<long>(p));
      dropped.insert(dropped.end(), w.begin() + static_cast<long>(p) + 2, w.end());
      push(todo, dropped, c * Rational(x * x * x - x, 12) * v.theta);
    }
  }
  return done;
}

PBWVector from_words(const std::map<Word, Rational>& m) {
  std::vector<std::pair<PBWMonomial, Rational>> t;
  for (const auto& [w, c] : m) {
    PBWMonomial x;
    for (long g : w) x.add(static_cast<std::size_t>(-g), 1);
    t.emplace_back(x, c);
  }
  return PBWVector::from_terms(std::move(t));
}

Word to_word(const PBWMonomial& m) {
  Word w;
  for (std::size_t j = 1; j <= m.exps.size(); ++j)
    for (unsigned e = 0; e < m.exp(j); ++e) w.push_back(-static_cast<long>(j));
  return w;
}

VFactorSpec verma(const char* theta, const char* h) { return VFactorSpec::make_verma(R(theta), R(h)); }

std::vector<PBWMonomial> basis_upto(unsigned L, std::uint32_t tail = 0) {
  std::vector<PBWMonomial> out;
  for (unsigned l = 0; l <= L; ++l)
    for (auto& m : verma_basis(l, tail)) out.push_back(m);
  return out;
}

}  // namespace

TEST(Straighten, Examples) {
  auto spec = verma("7/5", "2/3");
  Rational h = R("2/3"), theta = R("7/5");
  PBWMonomial v;
  EXPECT_EQ(straighten_apply(1, PBWVector::monomial(PBWMonomial{1}), spec), PBWVector::monomial(v, h * -2));
  EXPECT_EQ(straighten_apply(2, PBWVector::monomial(PBWMonomial{0, 1}), spec),
            PBWVector::monomial(v, h * -4 + theta / 2));
  EXPECT_EQ(straighten_apply(-3, PBWVector::monomial(v), spec), PBWVector::monomial(PBWMonomial{0, 0, 1}));
}

TEST(Verma, Basis) {
  EXPECT_EQ(verma_basis(0), std::vector<PBWMonomial>{PBWMonomial{}});
  auto b2 = verma_basis(2);
  ASSERT_EQ(b2.size(), 2u);
  EXPECT_NE(std::find(b2.begin(), b2.end(), PBWMonomial{2}), b2.end());
  EXPECT_NE(std::find(b2.begin(), b2.end(), PBWMonomial{0, 1}), b2.end());
  const std::size_t partitions[] = {1, 1, 2, 3, 5, 7, 11, 15};
  for (unsigned l = 0; l < 8; ++l) {
    EXPECT_EQ(verma_basis(l).size(), partitions[l]);
    for (const auto& m : verma_basis(l)) EXPECT_EQ(m.level(), l);
  }
}

TEST(Verma, D0IsDiagonalWithEigenvalueHMinusLevel) {
  auto spec = verma("1/2", "1/3");
  for (const auto& m : basis_upto(5))
    EXPECT_EQ(straighten_apply(0, PBWVector::monomial(m), spec),
              PBWVector::monomial(m, R("1/3") - Rational(static_cast<long>(m.level()))));
}

TEST(Verma, AgreesWithNaiveRewriting) {
  std::mt19937_64 rng(21);
  VermaData data{R("-3/7"), R("5/2")};
  VFactorSpec spec{data};
  for (int it = 0; it < 300; ++it) {
    auto basis = basis_upto(4);
    const auto& m = basis[rng() % basis.size()];
    long i = static_cast<long>(rng() % 11) - 5;
    Word w = to_word(m);
    w.insert(w.begin(), i);
    auto expect = from_words(naive_normalize({{w, Rational(1)}}, data));
    EXPECT_EQ(straighten_apply(i, PBWVector::monomial(m), spec), expect) << "i=" << i;
  }
}

TEST(Verma, BracketRelationWithCentralTerm) {
  for (auto spec : {verma("1/2", "1/3"), verma("-2", "7/4"), verma("0", "0")}) {
    Straightener s(spec);
    for (const auto& m : basis_upto(4)) {
      auto v = PBWVector::monomial(m);
      for (long i = -3; i <= 3; ++i) {
        for (long j = -3; j <= 3; ++j) {
          PBWVector lhs = s.apply(i, s.apply(j, v)) - s.apply(j, s.apply(i, v));
          PBWVector rhs = s.apply(i + j, v).scaled(Rational(j - i));
          if (i == -j) rhs = PBWVector::axpy(rhs, Rational(i * i * i - i, 12) * spec.theta(), v);
          ASSERT_EQ(lhs, rhs) << i << " " << j;
        }
      }
    }
  }
}

TEST(Verma, LevelGrading) {
  auto spec = verma("1/2", "1/3");
  for (const auto& m : basis_upto(4)) {
    for (long i = -3; i <= 5; ++i) {
      auto out = straighten_apply(i, PBWVector::monomial(m), spec);
      long target = static_cast<long>(m.level()) - i;
      if (target < 0) {
        EXPECT_TRUE(out.is_zero());
      }
      for (const auto& [x, c] : out) EXPECT_EQ(static_cast<long>(x.level()), target);
    }
  }
}

TEST(Verma, LocalBound) {
  auto spec = verma("1/2", "1/3");
  EXPECT_EQ(local_bound(PBWVector::monomial(PBWMonomial{}), spec), 0u);
  EXPECT_EQ(local_bound(PBWVector::monomial(PBWMonomial{1, 1}), spec), 3u);
  for (const auto& m : basis_upto(4)) {
    auto v = PBWVector::monomial(m);
    unsigned K = local_bound(v, spec);
    for (long k = K + 1; k <= static_cast<long>(K) + 4; ++k) EXPECT_TRUE(straighten_apply(k, v, spec).is_zero());
  }
}

TEST(Verma, Genericity) {
  // h = 0 has the singular vector d_{-1} v_h
  EXPECT_FALSE(verma_is_generic({R("1/2"), R("0")}, 1));
  EXPECT_TRUE(verma_is_generic({R("1/2"), R("1/3")}, 4));
}

namespace {

InducedData shift_module(unsigned k, const char* theta, const char* offset) {
  return InducedData{R(theta), k, ShiftAction{R(offset)}};
}

}  // namespace

TEST(Induced, ConditionsOnSmallModules) {
  FiniteAction one{1, {{LinComb<std::uint32_t>::monomial(0, 3)}}};
  auto rep = check_conditions_ab(VFactorSpec::make_induced(InducedData{1, 0, one}), 5);
  EXPECT_TRUE(rep.injective_on_truncation);
  EXPECT_TRUE(rep.condition_b);
  EXPECT_EQ(rep.truncation, 1u);

  for (unsigned k : {1u, 2u}) {
    auto shift = check_conditions_ab(VFactorSpec::make_induced(shift_module(k, "1", "2/3")), 8);
    EXPECT_TRUE(shift.injective_on_truncation);
  }

  // d_1 = 0 on a two-dimensional trivial module
  FiniteAction zero{2, {{LinComb<std::uint32_t>(), LinComb<std::uint32_t>()},
                        {LinComb<std::uint32_t>(), LinComb<std::uint32_t>()}}};
  auto z = check_conditions_ab(VFactorSpec::make_induced(InducedData{1, 1, zero}), 2);
  EXPECT_FALSE(z.injective_on_truncation);
  EXPECT_EQ(z.kernel, (std::vector<Rational>{1, 0}));
}

TEST(Induced, MalformedTableReportsOffendingTriple) {
  // d_0 = 0, d_1 b_0 = b_1: violates [d_0, d_1] = d_1 at b_0
  FiniteAction bad{2, {{LinComb<std::uint32_t>(), LinComb<std::uint32_t>()},
                       {LinComb<std::uint32_t>::monomial(1), LinComb<std::uint32_t>()}}};
  try {
    check_conditions_ab(VFactorSpec::make_induced(InducedData{1, 1, bad}), 2);
    FAIL() << "expected bracket violation";
  } catch (const bracket_violation& e) {
    EXPECT_EQ(e.b(), 0u);
    EXPECT_EQ(std::abs(e.i() - e.j()), 1);
  }
  EXPECT_THROW(VFactorSpec::make_induced(shift_module(3, "1", "0")), precondition_error);
}

TEST(Induced, BracketRelation) {
  FiniteAction one{1, {{LinComb<std::uint32_t>::monomial(0, R("5/3"))}}};
  std::vector<VFactorSpec> specs{VFactorSpec::make_induced(shift_module(1, "1/2", "2/3")),
                                 VFactorSpec::make_induced(shift_module(2, "-3", "1")),
                                 VFactorSpec::make_induced(InducedData{R("4"), 0, one})};
  for (const auto& spec : specs) {
    Straightener s(spec);
    for (std::uint32_t b = 0; b < 2; ++b) {
      for (const auto& m : basis_upto(3, b)) {
        if (spec.induced().basis_size() && b >= *spec.induced().basis_size()) continue;
        auto v = PBWVector::monomial(m);
        for (long i = -3; i <= 3; ++i) {
          for (long j = -3; j <= 3; ++j) {
            PBWVector lhs = s.apply(i, s.apply(j, v)) - s.apply(j, s.apply(i, v));
            PBWVector rhs = s.apply(i + j, v).scaled(Rational(j - i));
            if (i == -j) rhs = PBWVector::axpy(rhs, Rational(i * i * i - i, 12) * spec.theta(), v);
            ASSERT_EQ(lhs, rhs) << i << " " << j;
          }
        }
      }
    }
  }
}

TEST(Induced, LocalBound) {
  auto spec = VFactorSpec::make_induced(shift_module(2, "1", "0"));
  PBWMonomial t;
  t.tail = 3;
  EXPECT_EQ(local_bound(PBWVector::monomial(t), spec), 2u);
  Straightener s(spec);
  for (const auto& m : basis_upto(3, 1)) {
    auto v = PBWVector::monomial(m);
    unsigned K = local_bound(v, spec);
    for (long k = K + 1; k <= static_cast<long>(K) + 3; ++k) EXPECT_TRUE(s.apply(k, v).is_zero());
  }
}
