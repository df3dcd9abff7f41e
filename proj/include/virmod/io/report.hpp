#pragma once

// Verification suites over a loaded spec and the JSON report they produce.
// Randomized checks draw from one std::mt19937_64 seeded by the caller and
// map raw draws with modular arithmetic only, so reports are byte-identical
// across runs and standard libraries.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "virmod/analysis.hpp"
#include "virmod/confluent.hpp"
#include "virmod/io/element.hpp"
#include "virmod/io/spec_file.hpp"
#include "virmod/linalg.hpp"
#include "virmod/submodule.hpp"
#include "virmod/tensor.hpp"

namespace virmod {

using ojson = nlohmann::ordered_json;

enum class CheckStatus { Pass, Fail, Unknown };

inline const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Unknown: return "unknown";
  }
  return "?";
}

struct SuiteBounds {
  unsigned max_exp = 2;    // slot exponents in basis sweeps
  unsigned max_level = 2;  // V-levels in basis sweeps
  long k_max = 4;          // generators d_k with |k| <= k_max
  unsigned samples = 10;   // random elements per randomized check
  unsigned det_size = 6;
  unsigned det_offset = 4;
  unsigned det_trials = 200;
  unsigned cert_degree = 2;  // D and L handed to certify_irreducible
  unsigned cert_level = 1;

  ojson to_json() const {
    ojson j;
    j["max_exp"] = max_exp;
    j["max_level"] = max_level;
    j["k_max"] = k_max;
    j["samples"] = samples;
    j["det_size"] = det_size;
    j["det_offset"] = det_offset;
    j["det_trials"] = det_trials;
    j["cert_degree"] = cert_degree;
    j["cert_level"] = cert_level;
    return j;
  }
};

struct CheckResult {
  std::string check;
  ojson instance;
  CheckStatus status = CheckStatus::Pass;
  ojson witness;  // null when there is nothing to show
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  SuiteBounds bounds;
  ojson spec;
  std::vector<CheckResult> results;

  std::size_t count(CheckStatus s) const {
    std::size_t n = 0;
    for (const auto& r : results) n += r.status == s;
    return n;
  }
  int exit_code() const { return count(CheckStatus::Fail) ? 1 : 0; }

  ojson to_json() const {
    ojson j;
    j["tool"] = "virmod";
    j["suite"] = suite;
    j["seed"] = seed;
    j["bounds"] = bounds.to_json();
    j["spec"] = spec;
    j["results"] = ojson::array();
    for (const auto& r : results) {
      ojson e;
      e["check"] = r.check;
      e["instance"] = r.instance;
      e["status"] = status_name(r.status);
      e["witness"] = r.witness;
      j["results"].push_back(std::move(e));
    }
    j["summary"] = {{"pass", count(CheckStatus::Pass)},
                    {"fail", count(CheckStatus::Fail)},
                    {"unknown", count(CheckStatus::Unknown)}};
    return j;
  }
  std::string dump() const { return to_json().dump(2) + "\n"; }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"bracket", "determinant", "submodule", "quotient", "extraction",
                                              "rank",    "irreducible", "omega",     "classify-self"};
  return names;
}

namespace suites {

using Rng = std::mt19937_64;

inline std::uint64_t draw(Rng& rng, std::uint64_t n) { return rng() % n; }

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

/// p/q with q in 1..4 and |p/q| <= bound, never zero.
inline Rational nonzero_rational(Rng& rng, long bound) {
  for (;;) {
    long q = 1 + static_cast<long>(draw(rng, 4));
    long p = static_cast<long>(draw(rng, static_cast<std::uint64_t>(2 * bound * q + 1))) - bound * q;
    if (p != 0) return Rational(p, q);
  }
}

/// Tails of N visited by sweeps: v_h alone for Verma, the first few basis vectors otherwise.
inline std::uint32_t tail_count(const TensorSpec& spec) {
  if (!spec.v || spec.v->is_verma()) return 1;
  auto size = spec.v->induced().basis_size();
  return size ? std::min<std::uint32_t>(*size, 3) : 3;
}

/// Every monomial with slot exponents <= max_exp and V-level <= max_level.
inline std::vector<TensorMonomial> sweep_basis(const TensorSpec& spec, unsigned max_exp, unsigned max_level) {
  std::vector<PBWMonomial> vs;
  if (spec.v) {
    for (std::uint32_t b = 0; b < tail_count(spec); ++b)
      for (unsigned l = 0; l <= max_level; ++l)
        for (auto& w : verma_basis(l, b)) vs.push_back(w);
  } else {
    vs.emplace_back();
  }
  std::vector<TensorMonomial> out;
  std::vector<std::uint16_t> e(spec.slot_count(), 0);
  for (;;) {
    for (const auto& w : vs) {
      TensorMonomial x;
      x.e.assign(e.begin(), e.end());
      x.v = w;
      out.push_back(std::move(x));
    }
    std::size_t i = 0;
    while (i < e.size() && e[i] == max_exp) e[i++] = 0;
    if (i == e.size()) break;
    ++e[i];
  }
  return out;
}

inline TensorElement random_element(Rng& rng, const TensorSpec& spec, unsigned max_deg, unsigned max_level) {
  for (;;) {
    std::vector<std::pair<TensorMonomial, Rational>> t;
    auto terms = 1 + draw(rng, 3);
    for (std::uint64_t it = 0; it < terms; ++it) {
      TensorMonomial x;
      x.e.resize(spec.slot_count(), 0);
      auto budget = draw(rng, max_deg + 1);
      while (budget--) ++x.e[draw(rng, spec.slot_count())];
      if (spec.v) {
        auto level = static_cast<unsigned>(draw(rng, max_level + 1));
        auto tail = static_cast<std::uint32_t>(draw(rng, tail_count(spec)));
        auto basis = verma_basis(level, tail);
        x.v = basis[draw(rng, basis.size())];
      }
      t.emplace_back(std::move(x), nonzero_rational(rng, 4));
    }
    auto f = TensorElement::from_terms(std::move(t));
    if (!f.is_zero()) return f;
  }
}

inline ojson range(long lo, long hi) { return ojson::array({lo, hi}); }

inline CheckResult result(std::string check, ojson instance) {
  return CheckResult{std::move(check), std::move(instance), CheckStatus::Pass, nullptr};
}

inline CheckResult unknown(std::string check, const std::string& why) {
  return CheckResult{std::move(check), ojson::object(), CheckStatus::Unknown, {{"reason", why}}};
}

inline void bracket(const TensorSpec& spec, const SuiteBounds& b, Report& rep) {
  TensorActor actor(spec);
  auto basis = sweep_basis(spec, b.max_exp, b.max_level);
  auto r = result("bracket", {{"monomials", basis.size()},
                              {"max_exp", b.max_exp},
                              {"max_level", b.max_level},
                              {"i_j_range", range(-b.k_max, b.k_max)}});
  for (const auto& x : basis) {
    if (auto f = check_bracket(x, -b.k_max, b.k_max, actor)) {
      r.status = CheckStatus::Fail;
      r.witness = {{"basis_vector", format_monomial(x, spec)},
                   {"i", f->i},
                   {"j", f->j},
                   {"defect", format_element(f->defect, spec)}};
      break;
    }
  }
  rep.results.push_back(std::move(r));
}

inline void determinant(Rng& rng, const SuiteBounds& b, Report& rep) {
  auto r = result("confluent_determinant",
                  {{"trials", b.det_trials}, {"max_size", b.det_size}, {"max_offset", b.det_offset}});
  for (unsigned t = 0; t < b.det_trials; ++t) {
    ConfluentSpec cs;
    cs.offset = static_cast<unsigned>(draw(rng, b.det_offset + 1));
    const auto total = 1 + draw(rng, b.det_size);
    while (cs.size() < total) {
      Rational base;
      bool fresh = false;
      while (!fresh) {
        base = nonzero_rational(rng, 5);
        fresh = std::find(cs.bases.begin(), cs.bases.end(), base) == cs.bases.end();
      }
      cs.bases.push_back(base);
      cs.multiplicities.push_back(static_cast<unsigned>(1 + draw(rng, total - cs.size())));
    }
    Rational formula = confluent_det_formula(cs);
    Rational direct = virmod::determinant(confluent_vandermonde(cs));
    if (formula != direct) {
      ojson bases = ojson::array();
      for (const auto& x : cs.bases) bases.push_back(x.to_string());
      r.status = CheckStatus::Fail;
      r.witness = {{"bases", bases},
                   {"multiplicities", cs.multiplicities},
                   {"offset", cs.offset},
                   {"formula", formula.to_string()},
                   {"determinant", direct.to_string()}};
      break;
    }
  }
  rep.results.push_back(std::move(r));
}

/// Omega(lambda, alpha, h) (x) Omega(lambda, beta) built from the first factor of
/// each family of the spec, with mu replaced by lambda.
inline std::optional<TensorSpec> same_pair(const TensorSpec& spec) {
  if (spec.m() == 0 || spec.n() == 0) return std::nullopt;
  return TensorSpec{{spec.dt[0]}, {OmegaDSpec(spec.dt[0].lambda(), spec.d[0].beta())}, std::nullopt};
}

inline ojson pair_instance(const TensorSpec& pair) {
  return {{"lambda", pair.dt[0].lambda().to_string()},
          {"alpha", pair.dt[0].alpha().to_string()},
          {"h", pair.dt[0].h().to_string()},
          {"beta", pair.d[0].beta().to_string()}};
}

inline const char* case_name(SubmoduleCase c) {
  return c == SubmoduleCase::DTCarriesD1 ? "dt_carries_d1" : "dt_carries_d2";
}

inline void submodule(const TensorSpec& spec, const SuiteBounds& b, Report& rep, bool quotient) {
  const char* name = quotient ? "quotient_intertwines" : "wm_invariant";
  auto pair = same_pair(spec);
  if (!pair) {
    rep.results.push_back(unknown(name, "needs at least one factor of each Omega family"));
    return;
  }
  TensorActor actor(*pair);
  for (auto c : {SubmoduleCase::DTCarriesD1, SubmoduleCase::DTCarriesD2}) {
    ojson inst = pair_instance(*pair);
    inst["case"] = case_name(c);
    inst["m_range"] = range(0, 2);
    inst["max_exp"] = b.max_exp;
    inst["k_range"] = range(-b.k_max, b.k_max);
    auto r = result(name, inst);
    for (unsigned m = 0; m <= 2 && r.status == CheckStatus::Pass; ++m) {
      OmegaDTSpec target = quotient_target(*pair, m);
      for (unsigned l = quotient ? m : 0; l <= m && r.status == CheckStatus::Pass; ++l)
        for (unsigned n = 0; n <= b.max_exp && r.status == CheckStatus::Pass; ++n)
          for (unsigned p = 0; p <= b.max_exp && r.status == CheckStatus::Pass; ++p) {
            MultiPoly x = from_u_basis(MultiPoly::monomial(u_vars(), {l, n, p}));
            TensorElement f = from_plain(x, *pair, c);
            for (long k = -b.k_max; k <= b.k_max; ++k) {
              MultiPoly img = to_plain(actor.act(k, f), *pair, c);
              bool ok = wm_member(img, m);
              if (ok && quotient) ok = quotient_phi(img, m) == act_omega_dt(k, quotient_phi(x, m), target);
              if (!ok) {
                r.status = CheckStatus::Fail;
                r.witness = {{"m", m}, {"k", k}, {"element", x.to_string()}, {"image", img.to_string()}};
                break;
              }
            }
          }
    }
    rep.results.push_back(std::move(r));
  }
}

inline void extraction(const TensorSpec& spec, Rng& rng, const SuiteBounds& b, Report& rep) {
  if (!spec.distinct()) {
    rep.results.push_back(unknown("extraction_reconstruction", "lambda_i, mu_j are not pairwise distinct"));
    return;
  }
  TensorActor actor(spec);
  auto r = result("extraction_reconstruction",
                  {{"samples", b.samples}, {"max_degree", b.max_exp}, {"max_level", b.max_level}, {"k_values", 5}});
  for (unsigned s = 0; s < b.samples && r.status == CheckStatus::Pass; ++s) {
    TensorElement f = random_element(rng, spec, b.max_exp, b.max_level);
    Extraction ex = extract_components(f, spec, actor);
    for (unsigned off = 1; off <= 5; ++off) {
      long k = static_cast<long>(ex.K + ex.U + off);
      if (ex.evaluate(k) != actor.act(k, f)) {
        r.status = CheckStatus::Fail;
        r.witness = {{"element", format_element(f, spec)}, {"k", k}};
        break;
      }
    }
  }
  rep.results.push_back(std::move(r));
}

inline void rank(const TensorSpec& spec, Rng& rng, const SuiteBounds& b, Report& rep) {
  if (!spec.distinct()) {
    rep.results.push_back(unknown("rank_vacuum", "lambda_i, mu_j are not pairwise distinct"));
    return;
  }
  TensorActor actor(spec);
  const std::size_t bound = 2 * spec.m() + spec.n() + 1;
  auto vac = rank_invariant(vacuum(spec), spec, actor);
  auto r = result("rank_vacuum", {{"expected", bound}});
  r.witness = {{"rank", vac.value}, {"K", vac.K}, {"samples", vac.samples}, {"stabilized", vac.stabilized}};
  if (vac.value != bound || !vac.stabilized) r.status = CheckStatus::Fail;
  rep.results.push_back(std::move(r));

  auto basis = sweep_basis(spec, b.max_exp, b.max_level);
  // 1 (x) ... (x) 1 (x) w is a vacuum vector for every w in V
  std::erase_if(basis, [](const TensorMonomial& x) {
    return std::all_of(x.e.begin(), x.e.end(), [](std::uint16_t a) { return a == 0; });
  });
  auto q = result("rank_non_vacuum_exceeds", {{"samples", b.samples}, {"bound", bound}});
  for (unsigned s = 0; s < b.samples && !basis.empty(); ++s) {
    const auto& x = basis[draw(rng, basis.size())];
    auto rr = rank_invariant(TensorElement::monomial(x), spec, actor);
    if (rr.value <= bound || !rr.stabilized) {
      q.status = CheckStatus::Fail;
      q.witness = {{"basis_vector", format_monomial(x, spec)}, {"rank", rr.value}, {"stabilized", rr.stabilized}};
      break;
    }
  }
  rep.results.push_back(std::move(q));
}

inline void irreducible(const TensorSpec& spec, Rng& rng, const SuiteBounds& b, Report& rep) {
  try {
    require_certifiable(spec);
    if (spec.v && !verma_is_generic(spec.v->verma(), b.cert_level))
      throw precondition_error("Verma module has a singular vector at a low level");
  } catch (const precondition_error& e) {
    rep.results.push_back(unknown("irreducible_certificate", e.what()));
    return;
  }
  auto r = result("irreducible_certificate",
                  {{"samples", b.samples}, {"degree_bound", b.cert_degree}, {"level_bound", b.cert_level}});
  std::size_t steps = 0;
  for (unsigned s = 0; s < b.samples && r.status == CheckStatus::Pass; ++s) {
    TensorElement f = random_element(rng, spec, b.cert_degree, b.cert_level);
    try {
      auto cert = certify_irreducible(spec, f, b.cert_degree, b.cert_level);
      auto rp = replay_certificate(cert, spec, f);
      steps += cert.trace.size();
      if (!rp.ok) {
        r.status = CheckStatus::Fail;
        r.witness = {{"element", format_element(f, spec)}, {"replay", rp.failure}};
      }
    } catch (const certification_error& e) {
      r.status = CheckStatus::Fail;
      r.witness = {{"element", format_element(f, spec)}, {"error", e.what()}, {"stuck", format_element(e.stuck(), spec)}};
    }
  }
  if (r.status == CheckStatus::Pass) r.witness = {{"trace_steps", steps}};
  rep.results.push_back(std::move(r));
}

inline void omega(const TensorSpec& spec, const SuiteBounds&, Report& rep) {
  {
    auto r = result("binomial_vanishing", {{"r_range", range(1, 10)}});
    for (unsigned rr = 1; rr <= 10 && r.status == CheckStatus::Pass; ++rr)
      for (unsigned j = 0; j <= rr; ++j) {
        Rational v = binomial_vanishing(rr, j);
        if ((j < rr) != v.is_zero()) {
          r.status = CheckStatus::Fail;
          r.witness = {{"r", rr}, {"j", j}, {"value", v.to_string()}};
          break;
        }
      }
    rep.results.push_back(std::move(r));
  }
  {
    const bool expect_zero = !spec.v && spec.m() + spec.n() == 1;
    if (!expect_zero && !(spec.v && spec.v->is_verma())) {
      rep.results.push_back(unknown("omega5_vacuum", "prediction only for a single Omega factor or a Verma V factor"));
    } else {
      TensorActor actor(spec);
      auto r = result("omega5_vacuum", {{"l", ojson::array({8, 9})}, {"m", -7}, {"expect", expect_zero ? "zero" : "nonzero"}});
      for (long l : {8L, 9L}) {
        TensorElement w = omega_op(5, l, -7, vacuum(spec), actor);
        if (w.is_zero() != expect_zero) {
          r.status = CheckStatus::Fail;
          r.witness = {{"l", l}, {"value", format_element(w, spec)}};
          break;
        }
      }
      rep.results.push_back(std::move(r));
    }
  }
  {
    auto r = result("non_local_finiteness", {{"n", 1}, {"count_range", range(1, 5)}});
    for (unsigned count = 1; count <= 5; ++count) {
      auto w = non_local_finiteness_witness(spec, 1, count);
      if (w.rank != count) {
        r.status = CheckStatus::Fail;
        r.witness = {{"count", count}, {"rank", w.rank}};
        break;
      }
    }
    rep.results.push_back(std::move(r));
  }
  // N(M, beta) on the bundled k = 1 module; independent of the spec.
  const NMData d = bundled_nm_data();
  auto vanish = result("nm_omega_vanishes_above_2k_plus_2", {{"k", 1}, {"r_range", range(5, 7)}});
  auto top = result("nm_omega_top_is_6_dbar_squared", {{"k", 1}, {"r", 4}});
  auto closed = result("nm_omega_top_closed_form", {{"k", 1}, {"r", 4}, {"coefficient", "(2k+2)!(-1)^(k+1) = 24"}});
  for (std::uint32_t bi = 0; bi < 3; ++bi)
    for (long n = -2; n <= 2; ++n) {
      NMElement x = NMElement::monomial({bi, n});
      for (long l = -2; l <= 2; ++l)
        for (long m = -2; m <= 2; ++m) {
          for (unsigned rr = 5; rr <= 7; ++rr)
            if (vanish.status == CheckStatus::Pass && !nm_omega(rr, l, m, x, d).is_zero()) {
              vanish.status = CheckStatus::Fail;
              vanish.witness = {{"r", rr}, {"l", l}, {"m", m}, {"b", bi}, {"t_power", n}};
            }
          NMElement w = nm_omega(4, l, m, x, d);
          NMElement sq = nm_top_square(x, d, l);
          if (top.status == CheckStatus::Pass && w != sq.scaled(Rational(6))) {
            top.status = CheckStatus::Fail;
            top.witness = {{"l", l}, {"m", m}, {"b", bi}, {"t_power", n}};
          }
          if (closed.status == CheckStatus::Pass && w != sq.scaled(Rational(24))) {
            closed.status = CheckStatus::Fail;
            Rational ratio = sq.is_zero() ? Rational() : w.begin()->second / sq.coeff(w.begin()->first);
            closed.witness = {{"l", l}, {"m", m}, {"b", bi}, {"t_power", n}, {"observed_coefficient", ratio.to_string()}};
          }
        }
    }
  rep.results.push_back(std::move(vanish));
  rep.results.push_back(std::move(top));
  rep.results.push_back(std::move(closed));
}

inline void classify_self(const TensorSpec& spec, const SuiteBounds& b, Report& rep) {
  try {
    detail::require_classifiable(spec);
  } catch (const precondition_error& e) {
    rep.results.push_back(unknown("classify_self", e.what()));
    return;
  }
  auto expect = [&](const std::string& what, const TensorSpec& other, IsoVerdict want) {
    auto got = specs_isomorphic(spec, other);
    auto r = result("classify_" + what, {{"expect", verdict_name(want)}});
    r.witness = {{"verdict", verdict_name(got.verdict)}, {"reason", got.reason}};
    if (got.verdict != want) r.status = CheckStatus::Fail;
    rep.results.push_back(std::move(r));
  };
  expect("self", spec, IsoVerdict::Isomorphic);
  TensorSpec rev = spec;
  std::reverse(rev.dt.begin(), rev.dt.end());
  std::reverse(rev.d.begin(), rev.d.end());
  expect("reversed_factors", rev, IsoVerdict::Isomorphic);
  expect("canonical_representative", canonical_representative(spec), IsoVerdict::Isomorphic);

  // a bump that keeps the spec classifiable: no collision with another base
  auto fresh = [&](const Rational& x) {
    auto bases = spec.bases();
    Rational y = x + Rational(1, 7);
    while (std::find(bases.begin(), bases.end(), y) != bases.end() || y.is_zero()) y += Rational(1, 7);
    return y;
  };
  auto bump = [](const Rational& x, const Rational& avoid) {
    Rational y = x + Rational(1, 7);
    while (y.is_zero() || y == avoid) y += Rational(1, 7);
    return y;
  };
  for (std::size_t i = 0; i < spec.m(); ++i) {
    const auto& w = spec.dt[i];
    TensorSpec p = spec;
    p.dt[i] = OmegaDTSpec::linear(fresh(w.lambda()), w.alpha(), w.xi(), w.eta());
    expect("perturb_lambda_" + std::to_string(i + 1), p, IsoVerdict::NotIsomorphic);
    p = spec;
    p.dt[i] = OmegaDTSpec::linear(w.lambda(), bump(w.alpha(), Rational()), w.xi(), w.eta());
    expect("perturb_alpha_xi_" + std::to_string(i + 1), p, IsoVerdict::NotIsomorphic);
  }
  for (std::size_t j = 0; j < spec.n(); ++j) {
    const auto& w = spec.d[j];
    TensorSpec p = spec;
    p.d[j] = OmegaDSpec(fresh(w.mu()), w.beta());
    expect("perturb_mu_" + std::to_string(spec.m() + j + 1), p, IsoVerdict::NotIsomorphic);
    p = spec;
    p.d[j] = OmegaDSpec(w.mu(), bump(w.beta(), Rational()));
    expect("perturb_beta_" + std::to_string(spec.m() + j + 1), p, IsoVerdict::NotIsomorphic);
  }
  if (spec.v) {
    TensorSpec p = spec;
    if (spec.v->is_verma()) {
      p.v = VFactorSpec::make_verma(spec.v->theta() + Rational(1, 7), spec.v->verma().h);
      expect("perturb_theta", p, IsoVerdict::NotIsomorphic);
      p.v = VFactorSpec::make_verma(spec.v->theta(), spec.v->verma().h + Rational(1, 7));
      expect("perturb_h", p, IsoVerdict::NotIsomorphic);
    } else {
      InducedData d = spec.v->induced();
      d.theta += Rational(1, 7);
      p.v = VFactorSpec::make_induced(d);
      expect("perturb_theta", p, IsoVerdict::NotIsomorphic);
    }
  }
  // the map behind h-canonicalization commutes with the action
  for (std::size_t i = 0; i < spec.m(); ++i) {
    const auto& w = spec.dt[i];
    OmegaDTSpec target = OmegaDTSpec::linear(w.lambda(), w.alpha() * w.xi(), Rational(1), Rational(0));
    auto psi = canonical_intertwiner(w, b.max_exp + 2);
    auto r = result("canonical_intertwiner_" + std::to_string(i + 1),
                    {{"max_exp", b.max_exp}, {"k_range", range(-b.k_max, b.k_max)}});
    for (unsigned rr = 0; rr <= b.max_exp && r.status == CheckStatus::Pass; ++rr)
      for (unsigned p = 0; p <= b.max_exp && r.status == CheckStatus::Pass; ++p)
        for (long k = -b.k_max; k <= b.k_max; ++k) {
          MultiPoly x = MultiPoly::monomial(dt_vars(), {rr, p});
          if (apply_intertwiner(psi, act_omega_dt(k, x, w)) != act_omega_dt(k, apply_intertwiner(psi, x), target)) {
            r.status = CheckStatus::Fail;
            r.witness = {{"element", x.to_string()}, {"k", k}};
            break;
          }
        }
    rep.results.push_back(std::move(r));
  }
}

}  // namespace suites

/// Runs one suite (or "all") on a spec. Unknown suite names are a precondition error.
inline Report run_suite(const TensorSpec& spec, const std::string& suite, std::uint64_t seed,
                        const SuiteBounds& bounds = {}) {
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw precondition_error("unknown suite '" + suite + "'");
  Report rep;
  rep.suite = suite;
  rep.seed = seed;
  rep.bounds = bounds;
  rep.spec = spec_to_json(spec);
  for (const auto& name : names) {
    if (suite != "all" && suite != name) continue;
    // each suite gets its own stream so that "all" and single runs agree
    suites::Rng rng(seed ^ suites::fnv1a(name));
    if (name == "bracket") suites::bracket(spec, bounds, rep);
    else if (name == "determinant") suites::determinant(rng, bounds, rep);
    else if (name == "submodule") suites::submodule(spec, bounds, rep, false);
    else if (name == "quotient") suites::submodule(spec, bounds, rep, true);
    else if (name == "extraction") suites::extraction(spec, rng, bounds, rep);
    else if (name == "rank") suites::rank(spec, rng, bounds, rep);
    else if (name == "irreducible") suites::irreducible(spec, rng, bounds, rep);
    else if (name == "omega") suites::omega(spec, bounds, rep);
    else if (name == "classify-self") suites::classify_self(spec, bounds, rep);
  }
  return rep;
}

inline Report run_suite(const std::string& spec_path, const std::string& suite, std::uint64_t seed,
                        const SuiteBounds& bounds = {}) {
  return run_suite(load_spec(spec_path), suite, seed, bounds);
}

}  // namespace virmod
