#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "virmod/error.hpp"
#include "virmod/lincomb.hpp"
#include "virmod/linalg.hpp"
#include "virmod/rational.hpp"

namespace virmod {

/// d_{-1}^{k_1} d_{-2}^{k_2} ... d_{-n}^{k_n} applied to a tail vector.
/// `exps[j-1]` is k_j, trailing zeros trimmed. `tail` is 0 for the Verma
/// highest-weight vector, otherwise an index into the basis of N.
struct PBWMonomial {
  boost::container::small_vector<std::uint16_t, 6> exps;
  std::uint32_t tail = 0;

  PBWMonomial() = default;
  PBWMonomial(std::initializer_list<std::uint16_t> k, std::uint32_t t = 0) : exps(k), tail(t) { trim(); }

  unsigned level() const {
    unsigned l = 0;
    for (std::size_t j = 0; j < exps.size(); ++j) l += static_cast<unsigned>(j + 1) * exps[j];
    return l;
  }
  bool is_tail_only() const { return exps.empty(); }
  std::uint16_t exp(std::size_t j) const { return j >= 1 && j <= exps.size() ? exps[j - 1] : 0; }

  void add(std::size_t j, int delta) {
    if (exps.size() < j) exps.resize(j, 0);
    exps[j - 1] = static_cast<std::uint16_t>(exps[j - 1] + delta);
    trim();
  }
  void trim() {
    while (!exps.empty() && exps.back() == 0) exps.pop_back();
  }

  friend bool operator==(const PBWMonomial& a, const PBWMonomial& b) {
    return a.tail == b.tail && a.exps == b.exps;
  }
  friend bool operator<(const PBWMonomial& a, const PBWMonomial& b) {
    if (a.tail != b.tail) return a.tail < b.tail;
    return std::lexicographical_compare(a.exps.begin(), a.exps.end(), b.exps.begin(), b.exps.end());
  }
};

using PBWVector = LinComb<PBWMonomial>;

struct VermaData {
  Rational theta;
  Rational h;
  friend bool operator==(const VermaData&, const VermaData&) = default;
};

/// Explicit action of d_0..d_k on a finite basis: table[i][b] = d_i b.
struct FiniteAction {
  std::uint32_t basis_size = 0;
  std::vector<std::vector<LinComb<std::uint32_t>>> table;
  friend bool operator==(const FiniteAction&, const FiniteAction&) = default;
};

/// Infinite-dimensional N with basis b_0, b_1, ...: d_k b_i = b_{i+1},
/// d_0 b_i = (d0_offset + k i) b_i, every other d_j zero. A Vir_+-module only
/// for k = 1 and k = 2.
struct ShiftAction {
  Rational d0_offset;
  friend bool operator==(const ShiftAction&, const ShiftAction&) = default;
};

struct InducedData {
  Rational theta;
  unsigned k = 0;
  std::variant<FiniteAction, ShiftAction> action;
  friend bool operator==(const InducedData&, const InducedData&) = default;

  /// d_i b for 0 <= i; zero for i > k.
  LinComb<std::uint32_t> act(long i, std::uint32_t b) const {
    if (i < 0) throw precondition_error("N carries only d_0..d_k");
    if (i > static_cast<long>(k)) return {};
    if (const auto* f = std::get_if<FiniteAction>(&action)) {
      if (b >= f->basis_size) throw precondition_error("N basis index " + std::to_string(b) + " out of range");
      return f->table[static_cast<std::size_t>(i)][b];
    }
    const auto& s = std::get<ShiftAction>(action);
    if (i == 0) return LinComb<std::uint32_t>::monomial(b, s.d0_offset + Rational(static_cast<long>(k) * b));
    if (i == static_cast<long>(k)) return LinComb<std::uint32_t>::monomial(b + 1);
    return {};
  }

  std::optional<std::uint32_t> basis_size() const {
    if (const auto* f = std::get_if<FiniteAction>(&action)) return f->basis_size;
    return std::nullopt;
  }

  void validate_shape() const {
    if (const auto* f = std::get_if<FiniteAction>(&action)) {
      if (f->table.size() != k + 1) throw precondition_error("action table must list d_0..d_k");
      for (const auto& row : f->table) {
        if (row.size() != f->basis_size) throw precondition_error("action table row has wrong length");
        for (const auto& v : row)
          for (const auto& [b, c] : v)
            if (b >= f->basis_size) throw precondition_error("action table refers to basis index out of range");
      }
    } else if (k != 1 && k != 2) {
      throw precondition_error("shift rule defines a Vir_+-module only for k = 1 or k = 2");
    }
  }
};

struct VFactorSpec {
  std::variant<VermaData, InducedData> kind;

  bool is_verma() const { return std::holds_alternative<VermaData>(kind); }
  const VermaData& verma() const { return std::get<VermaData>(kind); }
  const InducedData& induced() const { return std::get<InducedData>(kind); }
  const Rational& theta() const { return is_verma() ? verma().theta : induced().theta; }

  static VFactorSpec make_verma(Rational theta, Rational h) { return {VermaData{std::move(theta), std::move(h)}}; }
  static VFactorSpec make_induced(InducedData d) {
    d.validate_shape();
    return {std::move(d)};
  }
  friend bool operator==(const VFactorSpec&, const VFactorSpec&) = default;
};

/// Applies Virasoro generators to PBW vectors by commuting them through the
/// word with the bracket. Results for single monomials are memoized, so one
/// instance should be reused across many calls on the same module.
class Straightener {
 public:
  explicit Straightener(const VFactorSpec& spec) : spec_(&spec) {}

  PBWVector apply(long i, const PBWVector& v) {
    Accumulator<PBWMonomial> acc;
    for (const auto& [m, c] : v) acc.add(apply(i, m), c);
    return std::move(acc).finish();
  }

  const PBWVector& apply(long i, const PBWMonomial& m) {
    auto key = std::make_pair(i, m);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    PBWVector r = compute(i, m);
    return memo_.emplace(std::move(key), std::move(r)).first->second;
  }

 private:
  PBWVector tail_action(long i, const PBWMonomial& m) const {
    if (spec_->is_verma()) {
      if (i == 0) return PBWVector::monomial(m, spec_->verma().h);
      return {};
    }
    std::vector<std::pair<PBWMonomial, Rational>> out;
    for (const auto& [b, c] : spec_->induced().act(i, m.tail)) {
      PBWMonomial n;
      n.tail = b;
      out.emplace_back(std::move(n), c);
    }
    return PBWVector::from_terms(std::move(out));
  }

  static PBWVector prepend(std::size_t a, const PBWVector& v) {
    return v.map_keys([a](const PBWMonomial& m) {
      PBWMonomial n = m;
      n.add(a, 1);
      return n;
    });
  }

  PBWVector compute(long i, const PBWMonomial& m) {
    std::size_t a1 = 0;
    for (std::size_t j = 1; j <= m.exps.size(); ++j)
      if (m.exp(j)) {
        a1 = j;
        break;
      }
    if (a1 == 0) {
      if (i < 0) {
        PBWMonomial n = m;
        n.add(static_cast<std::size_t>(-i), 1);
        return PBWVector::monomial(std::move(n));
      }
      return tail_action(i, m);
    }
    PBWMonomial rest = m;
    rest.add(a1, -1);
    const long b = static_cast<long>(a1);
    if (i < 0) {
      const long a = -i;
      if (a <= b) {
        PBWMonomial n = m;
        n.add(static_cast<std::size_t>(a), 1);
        return PBWVector::monomial(std::move(n));
      }
      // d_{-a} d_{-b} = d_{-b} d_{-a} + (a - b) d_{-a-b}
      PBWVector first = prepend(a1, PBWVector(apply(i, rest)));
      return PBWVector::axpy(first, Rational(a - b), apply(i - b, rest));
    }
    // d_i d_{-b} = d_{-b} d_i + (-b - i) d_{i-b} + [i == b] (i^3 - i)/12 c
    PBWVector inner = apply(i, rest);
    PBWVector out = apply(-b, inner);
    out = PBWVector::axpy(out, Rational(-b - i), apply(i - b, rest));
    if (i == b) out = PBWVector::axpy(out, Rational(i * i * i - i, 12) * spec_->theta(), PBWVector::monomial(rest));
    return out;
  }

  const VFactorSpec* spec_;
  std::map<std::pair<long, PBWMonomial>, PBWVector> memo_;
};

inline PBWVector straighten_apply(long i, const PBWVector& v, const VFactorSpec& spec) {
  Straightener s(spec);
  return s.apply(i, v);
}

/// All PBW monomials of exactly `level` on the given tail, one per partition.
inline std::vector<PBWMonomial> verma_basis(unsigned level, std::uint32_t tail = 0) {
  std::vector<PBWMonomial> out;
  PBWMonomial cur;
  cur.tail = tail;
  // largest part first, parts non-increasing
  auto rec = [&](auto&& self, unsigned remaining, unsigned max_part) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (unsigned p = std::min(remaining, max_part); p >= 1; --p) {
      cur.add(p, 1);
      self(self, remaining - p, p);
      cur.add(p, -1);
    }
  };
  rec(rec, level, level);
  std::sort(out.begin(), out.end());
  return out;
}

/// d_k v = 0 for every k > local_bound(v).
inline unsigned local_bound(const PBWVector& v, const VFactorSpec& spec) {
  unsigned l = 0;
  for (const auto& [m, c] : v) l = std::max(l, m.level());
  return spec.is_verma() ? l : l + spec.induced().k;
}

/// Offending bracket d_i d_j b - d_j d_i b != (j - i) d_{i+j} b in an N table.
class bracket_violation : public precondition_error {
 public:
  bracket_violation(long i, long j, std::uint32_t b)
      : precondition_error("Vir_+ bracket fails for (i, j, b) = (" + std::to_string(i) + ", " + std::to_string(j) +
                           ", " + std::to_string(b) + ")"),
        i_(i), j_(j), b_(b) {}
  long i() const { return i_; }
  long j() const { return j_; }
  std::uint32_t b() const { return b_; }

 private:
  long i_, j_;
  std::uint32_t b_;
};

struct ConditionsReport {
  unsigned truncation = 0;
  bool condition_b = true;  // d_i N = 0 for i > k holds by construction
  bool injective_on_truncation = false;
  std::vector<Rational> kernel;  // coefficients on b_0..b_{truncation-1} when not injective
};

namespace detail {
inline LinComb<std::uint32_t> n_act(const InducedData& d, long i, const LinComb<std::uint32_t>& v) {
  Accumulator<std::uint32_t> acc;
  for (const auto& [b, c] : v) acc.add(d.act(i, b), c);
  return std::move(acc).finish();
}
}  // namespace detail

/// Validates the Vir_+ bracket on the first `truncation` basis vectors, then
/// tests injectivity of d_k there by a rank computation.
inline ConditionsReport check_conditions_ab(const VFactorSpec& spec, unsigned truncation) {
  if (spec.is_verma()) throw precondition_error("conditions (a)/(b) concern induced modules");
  const InducedData& d = spec.induced();
  d.validate_shape();
  if (auto n = d.basis_size()) truncation = std::min(truncation, *n);
  const long k = static_cast<long>(d.k);
  for (std::uint32_t b = 0; b < truncation; ++b) {
    auto base = LinComb<std::uint32_t>::monomial(b);
    for (long i = 0; i <= k; ++i) {
      for (long j = 0; j <= k; ++j) {
        auto lhs = detail::n_act(d, i, detail::n_act(d, j, base)) - detail::n_act(d, j, detail::n_act(d, i, base));
        auto rhs = detail::n_act(d, i + j, base).scaled(Rational(j - i));
        if (!(lhs == rhs)) throw bracket_violation(i, j, b);
      }
    }
  }
  ConditionsReport rep;
  rep.truncation = truncation;
  std::map<std::uint32_t, std::size_t> rows;
  std::vector<LinComb<std::uint32_t>> images;
  for (std::uint32_t b = 0; b < truncation; ++b) {
    images.push_back(d.act(k, b));
    for (const auto& [x, c] : images.back()) rows.emplace(x, 0);
  }
  std::size_t r = 0;
  for (auto& [x, idx] : rows) idx = r++;
  Matrix m(rows.size(), truncation);
  for (std::uint32_t b = 0; b < truncation; ++b)
    for (const auto& [x, c] : images[b]) m(rows[x], b) = c;
  auto pivots = detail::rref(m, truncation);
  rep.injective_on_truncation = pivots.size() == truncation;
  if (!rep.injective_on_truncation) rep.kernel = detail::kernel_vector(m, pivots, truncation);
  return rep;
}

/// True iff the Verma module has no singular vector at levels 1..max_level,
/// i.e. the joint kernel of d_1 and d_2 is zero on each of those levels.
inline bool verma_is_generic(const VermaData& data, unsigned max_level) {
  VFactorSpec spec{data};
  Straightener s(spec);
  for (unsigned level = 1; level <= max_level; ++level) {
    std::vector<LinComb<std::pair<int, PBWMonomial>>> images;
    auto basis = verma_basis(level);
    for (const auto& m : basis) {
      std::vector<std::pair<std::pair<int, PBWMonomial>, Rational>> t;
      for (int i = 1; i <= 2; ++i)
        for (const auto& [x, c] : s.apply(i, m)) t.push_back({{i, x}, c});
      images.push_back(LinComb<std::pair<int, PBWMonomial>>::from_terms(std::move(t)));
    }
    if (exact_rank(images) != basis.size()) return false;
  }
  return true;
}

}  // namespace virmod
