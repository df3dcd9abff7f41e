#pragma once

// Spec files: one JSON document. Rationals are strings ("3", "-2/5"); JSON
// integers are accepted too, floats are rejected because they are not exact.
//
// {
//   "m": 1, "n": 1,
//   "dt_factors": [{"lambda": "2", "alpha": "1", "xi": "1", "eta": "0"}],
//   "d_factors":  [{"mu": "3", "beta": "2"}],
//   "v": {"type": "verma", "theta": "1/2", "h": "1/3"}
// }
//
// A dt factor may give "h_coeffs" (constant term first) instead of xi, eta.
// An induced V is {"type": "induced", "theta", "k", "rule": "shift", "d0_offset"}
// or {"type": "induced", "theta", "k", "basis_size", "action": [{"i", "b", "image": {"idx": coeff}}]}
// where unlisted d_i b are zero.

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "virmod/enveloping.hpp"
#include "virmod/error.hpp"
#include "virmod/omega.hpp"
#include "virmod/rational.hpp"
#include "virmod/tensor.hpp"

namespace virmod {

/// A spec document is unreadable or violates a field constraint; `where` is a
/// JSON path such as "dt_factors[0].alpha".
class spec_error : public error {
 public:
  spec_error(const std::string& where, const std::string& what)
      : error((where.empty() ? "" : where + ": ") + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

namespace detail {

using json = nlohmann::json;

inline void only_keys(const json& j, const std::string& where, std::set<std::string> allowed) {
  if (!j.is_object()) throw spec_error(where, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw spec_error(where, "unknown field '" + k + "'");
}

inline const json& field(const json& j, const std::string& where, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw spec_error(where, "missing field '" + key + "'");
  return *it;
}

inline std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

inline Rational rational_at(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) throw spec_error(where, "floating point value; write the rational as a string");
  if (!j.is_string()) throw spec_error(where, "expected a rational string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const parse_error& e) {
    throw spec_error(where, e.what());
  }
}

inline Rational rational_field(const json& j, const std::string& where, const std::string& key) {
  return rational_at(field(j, where, key), join(where, key));
}

inline Rational nonzero_field(const json& j, const std::string& where, const std::string& key) {
  Rational r = rational_field(j, where, key);
  if (r.is_zero()) throw spec_error(join(where, key), "must be nonzero");
  return r;
}

inline std::uint64_t count_field(const json& j, const std::string& where, const std::string& key) {
  const json& v = field(j, where, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw spec_error(join(where, key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline OmegaDTSpec dt_factor(const json& j, const std::string& where) {
  only_keys(j, where, {"lambda", "alpha", "xi", "eta", "h_coeffs"});
  Rational lambda = nonzero_field(j, where, "lambda");
  Rational alpha = nonzero_field(j, where, "alpha");
  if (j.contains("h_coeffs")) {
    if (j.contains("xi") || j.contains("eta")) throw spec_error(where, "give either xi, eta or h_coeffs");
    const json& c = j["h_coeffs"];
    if (!c.is_array()) throw spec_error(join(where, "h_coeffs"), "expected a list, constant term first");
    std::vector<std::pair<Exponents, Rational>> t;
    for (std::size_t e = 0; e < c.size(); ++e)
      t.emplace_back(Exponents{static_cast<std::uint32_t>(e)},
                     rational_at(c[e], join(where, "h_coeffs") + "[" + std::to_string(e) + "]"));
    MultiPoly h(t_vars(), MultiPoly::Terms::from_terms(std::move(t)));
    return OmegaDTSpec(std::move(lambda), std::move(alpha), std::move(h));
  }
  return OmegaDTSpec::linear(std::move(lambda), std::move(alpha), rational_field(j, where, "xi"),
                             rational_field(j, where, "eta"));
}

inline OmegaDSpec d_factor(const json& j, const std::string& where) {
  only_keys(j, where, {"mu", "beta"});
  return OmegaDSpec(nonzero_field(j, where, "mu"), nonzero_field(j, where, "beta"));
}

inline VFactorSpec v_factor(const json& j, const std::string& where) {
  const json& type = field(j, where, "type");
  if (type == "verma") {
    only_keys(j, where, {"type", "theta", "h"});
    return VFactorSpec::make_verma(rational_field(j, where, "theta"), rational_field(j, where, "h"));
  }
  if (type != "induced") throw spec_error(join(where, "type"), "expected \"verma\" or \"induced\"");
  InducedData d;
  d.theta = rational_field(j, where, "theta");
  d.k = static_cast<unsigned>(count_field(j, where, "k"));
  if (j.contains("rule")) {
    only_keys(j, where, {"type", "theta", "k", "rule", "d0_offset"});
    if (j["rule"] != "shift") throw spec_error(join(where, "rule"), "the only rule is \"shift\"");
    d.action = ShiftAction{rational_field(j, where, "d0_offset")};
  } else {
    only_keys(j, where, {"type", "theta", "k", "basis_size", "action"});
    FiniteAction f;
    auto size = count_field(j, where, "basis_size");
    if (size == 0 || size > 10000) throw spec_error(join(where, "basis_size"), "must be in 1..10000");
    f.basis_size = static_cast<std::uint32_t>(size);
    std::vector<std::vector<std::vector<std::pair<std::uint32_t, Rational>>>> raw(
        d.k + 1, std::vector<std::vector<std::pair<std::uint32_t, Rational>>>(f.basis_size));
    const json& entries = field(j, where, "action");
    if (!entries.is_array()) throw spec_error(join(where, "action"), "expected a list");
    for (std::size_t e = 0; e < entries.size(); ++e) {
      std::string w = join(where, "action") + "[" + std::to_string(e) + "]";
      only_keys(entries[e], w, {"i", "b", "image"});
      auto i = count_field(entries[e], w, "i");
      auto b = count_field(entries[e], w, "b");
      if (i > d.k) throw spec_error(join(w, "i"), "must be at most k");
      if (b >= f.basis_size) throw spec_error(join(w, "b"), "outside the basis");
      const json& img = field(entries[e], w, "image");
      if (!img.is_object()) throw spec_error(join(w, "image"), "expected {\"index\": coefficient}");
      for (const auto& [key, val] : img.items()) {
        std::string wk = join(w, "image") + "." + key;
        std::size_t used = 0;
        unsigned long idx = 0;
        try {
          idx = std::stoul(key, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != key.size() || idx >= f.basis_size) throw spec_error(wk, "not a basis index");
        raw[i][b].emplace_back(static_cast<std::uint32_t>(idx), rational_at(val, wk));
      }
    }
    f.table.resize(d.k + 1);
    for (unsigned i = 0; i <= d.k; ++i)
      for (auto& t : raw[i]) f.table[i].push_back(LinComb<std::uint32_t>::from_terms(std::move(t)));
    d.action = std::move(f);
  }
  try {
    VFactorSpec v = VFactorSpec::make_induced(std::move(d));
    check_conditions_ab(v, 8);
    return v;
  } catch (const precondition_error& e) {
    throw spec_error(where, e.what());
  }
}

}  // namespace detail

inline TensorSpec spec_from_json(const nlohmann::json& j) {
  using detail::field;
  detail::only_keys(j, "", {"m", "n", "dt_factors", "d_factors", "v"});
  auto m = detail::count_field(j, "", "m");
  auto n = detail::count_field(j, "", "n");
  TensorSpec spec;
  auto list = [&](const char* key, std::uint64_t expected, auto&& parse_one) {
    if (!j.contains(key)) {
      if (expected) throw spec_error(key, "missing, expected " + std::to_string(expected) + " entries");
      return;
    }
    const auto& a = j[key];
    if (!a.is_array()) throw spec_error(key, "expected a list");
    if (a.size() != expected)
      throw spec_error(key, "has " + std::to_string(a.size()) + " entries but the count field says " +
                                std::to_string(expected));
    for (std::size_t i = 0; i < a.size(); ++i) parse_one(a[i], std::string(key) + "[" + std::to_string(i) + "]");
  };
  list("dt_factors", m, [&](const auto& e, const std::string& w) { spec.dt.push_back(detail::dt_factor(e, w)); });
  list("d_factors", n, [&](const auto& e, const std::string& w) { spec.d.push_back(detail::d_factor(e, w)); });
  if (j.contains("v") && !j["v"].is_null()) spec.v = detail::v_factor(j["v"], "v");
  if (spec.m() + spec.n() == 0) throw spec_error("", "needs at least one Omega factor (m + n > 0)");
  return spec;
}

inline TensorSpec spec_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw spec_error("", std::string("malformed JSON: ") + e.what());
  }
  return spec_from_json(j);
}

inline TensorSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("", "cannot open spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return spec_from_text(buf.str());
}

/// Inverse of spec_from_json up to the choice of xi/eta versus h_coeffs.
inline nlohmann::ordered_json spec_to_json(const TensorSpec& spec) {
  nlohmann::ordered_json j;
  j["m"] = spec.m();
  j["n"] = spec.n();
  j["dt_factors"] = nlohmann::ordered_json::array();
  for (const auto& w : spec.dt) {
    nlohmann::ordered_json f;
    f["lambda"] = w.lambda().to_string();
    f["alpha"] = w.alpha().to_string();
    if (w.degree_h() == 1) {
      f["xi"] = w.xi().to_string();
      f["eta"] = w.eta().to_string();
    } else {
      auto c = nlohmann::ordered_json::array();
      for (long e = 0; e <= std::max(0L, w.degree_h()); ++e)
        c.push_back(w.h().coeff(Exponents{static_cast<std::uint32_t>(e)}).to_string());
      f["h_coeffs"] = c;
    }
    j["dt_factors"].push_back(f);
  }
  j["d_factors"] = nlohmann::ordered_json::array();
  for (const auto& w : spec.d) j["d_factors"].push_back({{"mu", w.mu().to_string()}, {"beta", w.beta().to_string()}});
  if (spec.v) {
    nlohmann::ordered_json v;
    if (spec.v->is_verma()) {
      v["type"] = "verma";
      v["theta"] = spec.v->verma().theta.to_string();
      v["h"] = spec.v->verma().h.to_string();
    } else {
      const auto& d = spec.v->induced();
      v["type"] = "induced";
      v["theta"] = d.theta.to_string();
      v["k"] = d.k;
      if (const auto* s = std::get_if<ShiftAction>(&d.action)) {
        v["rule"] = "shift";
        v["d0_offset"] = s->d0_offset.to_string();
      } else {
        const auto& f = std::get<FiniteAction>(d.action);
        v["basis_size"] = f.basis_size;
        auto entries = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < f.table.size(); ++i)
          for (std::uint32_t b = 0; b < f.basis_size; ++b) {
            if (f.table[i][b].is_zero()) continue;
            nlohmann::ordered_json img = nlohmann::ordered_json::object();
            for (const auto& [x, c] : f.table[i][b]) img[std::to_string(x)] = c.to_string();
            entries.push_back({{"i", i}, {"b", b}, {"image", img}});
          }
        v["action"] = entries;
      }
    }
    j["v"] = v;
  }
  return j;
}

}  // namespace virmod
