#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "virmod/confluent.hpp"
#include "virmod/enveloping.hpp"
#include "virmod/error.hpp"
#include "virmod/lincomb.hpp"
#include "virmod/linalg.hpp"
#include "virmod/omega.hpp"
#include "virmod/rational.hpp"

namespace virmod {

/// (tensor of Omega(lambda_i, alpha_i, h_i)) (tensor of Omega(mu_j, beta_j)) (tensor V).
struct TensorSpec {
  std::vector<OmegaDTSpec> dt;
  std::vector<OmegaDSpec> d;
  std::optional<VFactorSpec> v;

  std::size_t m() const { return dt.size(); }
  std::size_t n() const { return d.size(); }
  std::size_t slot_count() const { return 2 * m() + n(); }

  void validate() const {
    if (m() + n() == 0) throw precondition_error("tensor spec needs at least one Omega factor");
  }

  /// All lambda_i and mu_j pairwise distinct.
  bool distinct() const {
    std::vector<Rational> b = bases();
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j)
        if (b[i] == b[j]) return false;
    return true;
  }

  std::vector<Rational> bases() const {
    std::vector<Rational> b;
    for (const auto& s : dt) b.push_back(s.lambda());
    for (const auto& s : d) b.push_back(s.mu());
    return b;
  }
};

/// One pure tensor of basis vectors. `e` holds r_1..r_m, p_1..p_m,
/// r_{m+1}..r_{m+n} in that order, so lexicographic order on `e` is the
/// degree order; `v` is ignored by that order and only breaks ties.
struct TensorMonomial {
  boost::container::small_vector<std::uint16_t, 8> e;
  PBWMonomial v;

  friend bool operator==(const TensorMonomial& a, const TensorMonomial& b) { return a.e == b.e && a.v == b.v; }
  friend bool operator<(const TensorMonomial& a, const TensorMonomial& b) {
    if (a.e != b.e) return std::lexicographical_compare(a.e.begin(), a.e.end(), b.e.begin(), b.e.end());
    return a.v < b.v;
  }
};

using TensorElement = LinComb<TensorMonomial>;

struct TensorMonomialHash {
  std::size_t operator()(const TensorMonomial& x) const {
    std::size_t h = x.v.tail;
    for (auto a : x.e) h = h * 1000003u + a;
    for (auto a : x.v.exps) h = h * 998244353u + a + 17;
    return h ^ (h >> 29);
  }
};

using TensorAccumulator = HashAccumulator<TensorMonomial, TensorMonomialHash>;

/// Slot layout helpers.
inline std::size_t r_index(const TensorSpec&, std::size_t i) { return i; }               // dt factor i
inline std::size_t p_index(const TensorSpec& s, std::size_t i) { return s.m() + i; }    // dt factor i
inline std::size_t rd_index(const TensorSpec& s, std::size_t j) { return 2 * s.m() + j; }  // d factor j

inline TensorMonomial make_monomial(const TensorSpec& spec, const std::vector<unsigned>& r,
                                    const std::vector<unsigned>& p, const std::vector<unsigned>& rd,
                                    PBWMonomial v = {}) {
  if (r.size() != spec.m() || p.size() != spec.m() || rd.size() != spec.n())
    throw mismatch_error("exponent lists do not match the spec shape");
  TensorMonomial x;
  x.e.resize(spec.slot_count(), 0);
  for (std::size_t i = 0; i < spec.m(); ++i) {
    x.e[r_index(spec, i)] = static_cast<std::uint16_t>(r[i]);
    x.e[p_index(spec, i)] = static_cast<std::uint16_t>(p[i]);
  }
  for (std::size_t j = 0; j < spec.n(); ++j) x.e[rd_index(spec, j)] = static_cast<std::uint16_t>(rd[j]);
  x.v = std::move(v);
  return x;
}

/// 1 (x) ... (x) 1 (x) v
inline TensorMonomial vacuum_monomial(const TensorSpec& spec, PBWMonomial v = {}) {
  TensorMonomial x;
  x.e.resize(spec.slot_count(), 0);
  x.v = std::move(v);
  return x;
}
inline TensorElement vacuum(const TensorSpec& spec, PBWMonomial v = {}) {
  return TensorElement::monomial(vacuum_monomial(spec, std::move(v)));
}

/// Degree order on exponent data: r_1..r_m, then p_1..p_m, then r_{m+1}..r_{m+n}.
inline std::strong_ordering compare_monomials(const TensorMonomial& a, const TensorMonomial& b) {
  if (a.e.size() != b.e.size()) throw mismatch_error("monomials of different spec shapes");
  return std::lexicographical_compare_three_way(a.e.begin(), a.e.end(), b.e.begin(), b.e.end());
}

using DegreeData = boost::container::small_vector<std::uint16_t, 8>;

inline DegreeData degree(const TensorElement& f) {
  if (f.is_zero()) throw precondition_error("degree of the zero element");
  return f.leading().first.e;
}

/// d_k f = 0 on the V part for every k beyond this bound.
inline unsigned local_bound(const TensorElement& f, const TensorSpec& spec) {
  if (!spec.v) return 0;
  unsigned K = 0;
  for (const auto& [x, c] : f) K = std::max(K, local_bound(PBWVector::monomial(x.v), *spec.v));
  return K;
}

/// Leibniz action d_k(w (x) v) = d_k w (x) v + w (x) d_k v over every slot.
/// Keeps per-slot and V memo tables, so reuse one actor for many calls.
class TensorActor {
 public:
  explicit TensorActor(const TensorSpec& spec) : spec_(&spec) {
    spec.validate();
    if (spec.v) straight_.emplace(*spec.v);
  }

  const TensorSpec& spec() const { return *spec_; }

  TensorElement act(long k, const TensorMonomial& x) {
    TensorAccumulator acc;
    add_act(k, x, Rational(1), acc);
    return std::move(acc).finish();
  }

  TensorElement act(long k, const TensorElement& f) {
    TensorAccumulator acc;
    for (const auto& [x, c] : f) add_act(k, x, c, acc);
    return std::move(acc).finish();
  }

  /// c f: theta f with a V factor, zero otherwise.
  TensorElement central(const TensorElement& f) const {
    if (!spec_->v) return {};
    return f.scaled(spec_->v->theta());
  }

  void add_act(long k, const TensorMonomial& x, const Rational& c, TensorAccumulator& acc) {
    const TensorSpec& s = *spec_;
    for (std::size_t i = 0; i < s.m(); ++i) {
      const auto& img = dt_image(k, i, x.e[r_index(s, i)], x.e[p_index(s, i)]);
      for (const auto& [rp, a] : img) {
        TensorMonomial y = x;
        y.e[r_index(s, i)] = rp.first;
        y.e[p_index(s, i)] = rp.second;
        acc.add(std::move(y), a * c);
      }
    }
    for (std::size_t j = 0; j < s.n(); ++j) {
      const auto& img = d_image(k, j, x.e[rd_index(s, j)]);
      for (const auto& [r, a] : img) {
        TensorMonomial y = x;
        y.e[rd_index(s, j)] = r;
        acc.add(std::move(y), a * c);
      }
    }
    if (straight_) {
      for (const auto& [w, a] : straight_->apply(k, x.v)) {
        TensorMonomial y = x;
        y.v = w;
        acc.add(std::move(y), a * c);
      }
    }
  }

 private:
  using DTImage = std::vector<std::pair<std::pair<std::uint16_t, std::uint16_t>, Rational>>;
  using DImage = std::vector<std::pair<std::uint16_t, Rational>>;

  static std::uint64_t key(long k, std::size_t slot, unsigned r, unsigned p) {
    if (k < -32768 || k > 32767 || slot > 255 || r > 0xFFFFF || p > 0xFFFFF)
      throw precondition_error("action index out of supported range");
    return (static_cast<std::uint64_t>(k + 32768) << 48) | (static_cast<std::uint64_t>(slot) << 40) |
           (static_cast<std::uint64_t>(r) << 20) | p;
  }

  const DTImage& dt_image(long k, std::size_t i, unsigned r, unsigned p) {
    auto kk = key(k, i, r, p);
    auto it = dt_memo_.find(kk);
    if (it != dt_memo_.end()) return it->second;
    MultiPoly img = act_omega_dt(k, MultiPoly::monomial(dt_vars(), {r, p}), spec_->dt[i]);
    DTImage out;
    for (const auto& [e, c] : img.terms())
      out.push_back({{static_cast<std::uint16_t>(e[0]), static_cast<std::uint16_t>(e[1])}, c});
    return dt_memo_.emplace(kk, std::move(out)).first->second;
  }

  const DImage& d_image(long k, std::size_t j, unsigned r) {
    auto kk = key(k, j, r, 0);
    auto it = d_memo_.find(kk);
    if (it != d_memo_.end()) return it->second;
    MultiPoly img = act_omega_d(k, MultiPoly::monomial(d_vars(), {r}), spec_->d[j]);
    DImage out;
    for (const auto& [e, c] : img.terms()) out.push_back({static_cast<std::uint16_t>(e[0]), c});
    return d_memo_.emplace(kk, std::move(out)).first->second;
  }

  const TensorSpec* spec_;
  std::optional<Straightener> straight_;
  std::unordered_map<std::uint64_t, DTImage> dt_memo_;
  std::unordered_map<std::uint64_t, DImage> d_memo_;
};

inline TensorElement act(long k, const TensorElement& f, const TensorSpec& spec) {
  TensorActor a(spec);
  return a.act(k, f);
}

inline TensorElement act_central(const TensorElement& f, const TensorSpec& spec) {
  return TensorActor(spec).central(f);
}

// ---- defining relations -------------------------------------------------------

struct BracketFailure {
  long i = 0, j = 0;
  TensorElement defect;  // [d_i, d_j] x - (j-i) d_{i+j} x - central term
};

/// Checks [d_i, d_j] x = (j-i) d_{i+j} x + delta_{i,-j} (i^3-i)/12 c x for all
/// lo <= i < j <= hi (the relation is antisymmetric, so this covers every pair).
/// Monomials reached from x get local integer ids and the comparison runs on
/// dense buffers; that is what keeps full sweeps cheap.
inline std::optional<BracketFailure> check_bracket(const TensorMonomial& x, long lo, long hi, TensorActor& actor) {
  using Sparse = std::vector<std::pair<std::uint32_t, Rational>>;
  std::unordered_map<TensorMonomial, std::uint32_t, TensorMonomialHash> index;
  std::vector<TensorMonomial> mons;
  auto id = [&](const TensorMonomial& y) {
    auto [it, fresh] = index.try_emplace(y, static_cast<std::uint32_t>(mons.size()));
    if (fresh) mons.push_back(y);
    return it->second;
  };
  auto local = [&](const TensorElement& f) {
    Sparse s;
    s.reserve(f.size());
    for (const auto& [y, c] : f) s.emplace_back(id(y), c);
    return s;
  };
  const std::uint32_t x_id = id(x);
  const auto w = static_cast<std::size_t>(hi - lo + 1);
  std::vector<Sparse> once(2 * w - 1);  // d_s x for s in [2lo, 2hi]
  for (long s = 2 * lo; s <= 2 * hi; ++s) once[static_cast<std::size_t>(s - 2 * lo)] = local(actor.act(s, x));
  auto d = [&](long s) -> const Sparse& { return once[static_cast<std::size_t>(s - 2 * lo)]; };

  std::vector<std::vector<Sparse>> twice(w);  // twice[i - lo][y] = d_i y
  std::vector<char> done;
  for (long j = lo; j <= hi; ++j) {
    for (const auto& [y, c] : d(j)) {
      if (y < done.size() && done[y]) continue;
      for (long i = lo; i <= hi; ++i) {
        Sparse img = local(actor.act(i, mons[y]));
        auto& row = twice[static_cast<std::size_t>(i - lo)];
        if (row.size() <= y) row.resize(y + 1);
        row[y] = std::move(img);
      }
      if (done.size() <= y) done.resize(y + 1, 0);
      done[y] = 1;
    }
  }

  const Rational theta = actor.spec().v ? actor.spec().v->theta() : Rational();
  std::vector<Rational> buf(mons.size());
  std::vector<std::uint32_t> touched;
  std::vector<char> mark(mons.size(), 0);
  auto add = [&](std::uint32_t y, const Rational& c) {
    if (!mark[y]) {
      mark[y] = 1;
      touched.push_back(y);
    }
    buf[y] += c;
  };
  auto second = [&](long i, long j, const Rational& sign) {
    const auto& row = twice[static_cast<std::size_t>(i - lo)];
    for (const auto& [y, c] : d(j))
      for (const auto& [z, a] : row[y]) add(z, sign * c * a);
  };
  for (long i = lo; i <= hi; ++i) {
    for (long j = i + 1; j <= hi; ++j) {
      second(i, j, Rational(1));
      second(j, i, Rational(-1));
      for (const auto& [y, c] : d(i + j)) add(y, -Rational(j - i) * c);
      if (i == -j && !theta.is_zero()) add(x_id, -Rational(i * i * i - i, 12) * theta);
      std::vector<std::pair<TensorMonomial, Rational>> defect;
      for (auto y : touched) {
        if (!buf[y].is_zero()) defect.emplace_back(mons[y], buf[y]);
        buf[y] = Rational();
        mark[y] = 0;
      }
      touched.clear();
      if (!defect.empty()) return BracketFailure{i, j, TensorElement::from_terms(std::move(defect))};
    }
  }
  return std::nullopt;
}

// ---- coefficient extraction ---------------------------------------------------

enum class SlotKind { DT, D };

/// Coefficient of k^power base^k in d_k f for all k beyond the window start.
struct Component {
  SlotKind kind;
  std::size_t slot;
  Rational base;
  unsigned power;
  TensorElement value;
};

struct Extraction {
  unsigned K = 0;  // samples are k = K+1 .. K+U
  unsigned U = 0;
  std::vector<Component> components;  // nonzero ones only

  TensorElement at(SlotKind kind, std::size_t slot, unsigned power) const {
    for (const auto& c : components)
      if (c.kind == kind && c.slot == slot && c.power == power) return c.value;
    return {};
  }

  /// Sum over components of k^power base^k value.
  TensorElement evaluate(long k) const {
    TensorAccumulator acc;
    for (const auto& c : components) acc.add(c.value, pow(Rational(k), c.power) * pow(c.base, k));
    return std::move(acc).finish();
  }
};

inline unsigned max_slot_exponent(const TensorElement& f, std::size_t index) {
  unsigned r = 0;
  for (const auto& [x, c] : f) r = std::max<unsigned>(r, x.e[index]);
  return r;
}

/// Writes d_k f = sum k^s lambda_i^k g_{i,s} + sum k^l mu_j^k b_{j,l} (k > K)
/// by sampling exactly as many k as there are unknowns and inverting the
/// confluent Vandermonde system.
inline Extraction extract_components(const TensorElement& f, const TensorSpec& spec, TensorActor& actor) {
  if (f.is_zero()) throw precondition_error("extraction of the zero element");
  if (!spec.distinct()) throw precondition_error("extraction needs pairwise distinct lambda_i, mu_j");
  Extraction ex;
  ex.K = local_bound(f, spec);
  ConfluentSpec cs;
  struct Column {
    SlotKind kind;
    std::size_t slot;
    unsigned power;
  };
  std::vector<Column> columns;
  for (std::size_t i = 0; i < spec.m(); ++i) {
    unsigned mult = max_slot_exponent(f, r_index(spec, i)) + 3;
    cs.bases.push_back(spec.dt[i].lambda());
    cs.multiplicities.push_back(mult);
    for (unsigned s = 0; s < mult; ++s) columns.push_back({SlotKind::DT, i, s});
  }
  for (std::size_t j = 0; j < spec.n(); ++j) {
    unsigned mult = max_slot_exponent(f, rd_index(spec, j)) + 2;
    cs.bases.push_back(spec.d[j].mu());
    cs.multiplicities.push_back(mult);
    for (unsigned l = 0; l < mult; ++l) columns.push_back({SlotKind::D, j, l});
  }
  cs.offset = ex.K + 1;
  ex.U = static_cast<unsigned>(cs.size());
  Matrix inv = inverse(confluent_vandermonde(cs));
  std::vector<TensorElement> samples;
  samples.reserve(ex.U);
  for (unsigned row = 0; row < ex.U; ++row) samples.push_back(actor.act(static_cast<long>(ex.K + 1 + row), f));
  for (std::size_t col = 0; col < columns.size(); ++col) {
    TensorAccumulator acc;
    for (unsigned row = 0; row < ex.U; ++row) acc.add(samples[row], inv(col, row));
    TensorElement value = std::move(acc).finish();
    if (value.is_zero()) continue;
    const Column& c = columns[col];
    Rational base = c.kind == SlotKind::DT ? spec.dt[c.slot].lambda() : spec.d[c.slot].mu();
    ex.components.push_back({c.kind, c.slot, base, c.power, std::move(value)});
  }
  return ex;
}

inline Extraction extract_components(const TensorElement& f, const TensorSpec& spec) {
  TensorActor actor(spec);
  return extract_components(f, spec, actor);
}

// ---- moves ------------------------------------------------------------------

enum class MoveKind { RaiseDT, RaiseD, AlphaF, G, Beta };

struct Move {
  MoveKind kind;
  std::size_t slot;  // dt factor index for RaiseDT/AlphaF/G, d factor index for RaiseD/Beta
};

inline const char* move_name(MoveKind k) {
  switch (k) {
    case MoveKind::RaiseDT: return "raise_dt";
    case MoveKind::RaiseD: return "raise_d";
    case MoveKind::AlphaF: return "alpha_f";
    case MoveKind::G: return "g";
    case MoveKind::Beta: return "beta";
  }
  return "?";
}

/// Splits f by the exponent stored at `index` (an r slot).
inline std::map<unsigned, TensorElement> split_homogeneous(const TensorElement& f, std::size_t index) {
  std::map<unsigned, std::vector<std::pair<TensorMonomial, Rational>>> parts;
  for (const auto& [x, c] : f) parts[x.e[index]].emplace_back(x, c);
  std::map<unsigned, TensorElement> out;
  for (auto& [r, t] : parts) out.emplace(r, TensorElement::from_terms(std::move(t)));
  return out;
}

/// Multiplies the given r slot by its derivation variable.
inline TensorElement shift_slot(const TensorElement& f, std::size_t index) {
  return f.map_keys([index](const TensorMonomial& x) {
    TensorMonomial y = x;
    ++y.e[index];
    return y;
  });
}

inline unsigned homogeneous_exponent(const TensorElement& f, std::size_t index) {
  if (f.is_zero()) throw precondition_error("move on the zero element");
  unsigned r = f.begin()->first.e[index];
  for (const auto& [x, c] : f)
    if (x.e[index] != r) throw precondition_error("move needs a slot-homogeneous element; split it first");
  return r;
}

/// Output of one of the five extraction moves. Each is a normalized
/// component of d_k f:
///   RaiseDT_i : power 0 at lambda_i               -> D_i f
///   RaiseD_j  : power 0 at mu_j                   -> D_{m+j} f
///   AlphaF_i  : (-1)^{r+1} x power r+2 at lambda_i -> alpha_i F_i(t_i^p) in slot i
///   G_i       : (-1)^r x power r+1 at lambda_i minus r D_i AlphaF_i(f)
///                                                  -> G_i(t_i^p) in slot i
///   Beta_j    : (-1)^{r+1} x power r+1 at mu_j      -> beta_j in slot m+j
inline TensorElement apply_move(const TensorElement& f, Move mv, const TensorSpec& spec, TensorActor& actor) {
  const bool dt_slot = mv.kind == MoveKind::RaiseDT || mv.kind == MoveKind::AlphaF || mv.kind == MoveKind::G;
  if (dt_slot && mv.slot >= spec.m()) throw precondition_error("no such Omega(lambda, alpha, h) factor");
  if (!dt_slot && mv.slot >= spec.n()) throw precondition_error("no such Omega(mu, beta) factor");
  unsigned r = 0;
  if (mv.kind == MoveKind::AlphaF || mv.kind == MoveKind::G) r = homogeneous_exponent(f, r_index(spec, mv.slot));
  if (mv.kind == MoveKind::Beta) r = homogeneous_exponent(f, rd_index(spec, mv.slot));
  Extraction ex = extract_components(f, spec, actor);
  auto sgn = [](unsigned e) { return Rational(e % 2 ? -1 : 1); };
  switch (mv.kind) {
    case MoveKind::RaiseDT: return ex.at(SlotKind::DT, mv.slot, 0);
    case MoveKind::RaiseD: return ex.at(SlotKind::D, mv.slot, 0);
    case MoveKind::AlphaF: return ex.at(SlotKind::DT, mv.slot, r + 2).scaled(sgn(r + 1));
    case MoveKind::G: {
      TensorElement af = ex.at(SlotKind::DT, mv.slot, r + 2).scaled(sgn(r + 1));
      TensorElement g = ex.at(SlotKind::DT, mv.slot, r + 1).scaled(sgn(r));
      return TensorElement::axpy(g, Rational(-static_cast<long>(r)), shift_slot(af, r_index(spec, mv.slot)));
    }
    case MoveKind::Beta: return ex.at(SlotKind::D, mv.slot, r + 1).scaled(sgn(r + 1));
  }
  return {};
}

inline TensorElement apply_move(const TensorElement& f, Move mv, const TensorSpec& spec) {
  TensorActor actor(spec);
  return apply_move(f, mv, spec, actor);
}

// ---- omega operators ----------------------------------------------------------

/// sum_{i=0}^{s} C(s,i) (-1)^{s-i} d_{l-m-i} d_{m+i} f
inline TensorElement omega_op(unsigned s, long l, long m, const TensorElement& f, TensorActor& actor) {
  TensorAccumulator acc;
  for (unsigned i = 0; i <= s; ++i) {
    Rational c = binomial(s, i) * Rational((s - i) % 2 ? -1 : 1);
    const long ii = static_cast<long>(i);
    acc.add(actor.act(l - m - ii, actor.act(m + ii, f)), c);
  }
  return std::move(acc).finish();
}

inline TensorElement omega_op(unsigned s, long l, long m, const TensorElement& f, const TensorSpec& spec) {
  TensorActor actor(spec);
  return omega_op(s, l, m, f, actor);
}

}  // namespace virmod
