// Command-line front end. Exit codes: 0 all checks pass, 1 a check failed,
// 2 usage, spec or element errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "virmod/analysis.hpp"
#include "virmod/confluent.hpp"
#include "virmod/io/element.hpp"
#include "virmod/io/report.hpp"
#include "virmod/io/spec_file.hpp"

using namespace virmod;

namespace {

struct Options {
  std::string spec_path, other_path, element, suite = "all", report_path, bases, mults;
  std::uint64_t seed = 1;
  long k = 1, l = 0, m = 0;
  unsigned s = 5, degree = 2, level = 1, r = 0;
  SuiteBounds bounds;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

void print(const Report& rep) {
  for (const auto& r : rep.results) {
    std::cout << status_name(r.status) << "  " << r.check;
    if (!r.instance.empty()) std::cout << "  " << r.instance.dump();
    std::cout << "\n";
    if (!r.witness.is_null()) std::cout << "      " << r.witness.dump() << "\n";
  }
  std::cout << "summary: " << rep.count(CheckStatus::Pass) << " pass, " << rep.count(CheckStatus::Fail) << " fail, "
            << rep.count(CheckStatus::Unknown) << " unknown\n";
}

int finish(const Report& rep, const Options& o) {
  print(rep);
  if (!o.report_path.empty()) {
    std::ofstream out(o.report_path);
    if (!out) throw spec_error("", "cannot write report '" + o.report_path + "'");
    out << rep.dump();
  }
  return rep.exit_code();
}

Report single(const std::string& suite, const Options& o, const TensorSpec* spec) {
  Report rep;
  rep.suite = suite;
  rep.seed = o.seed;
  rep.bounds = o.bounds;
  rep.spec = spec ? ojson(spec_to_json(*spec)) : ojson(nullptr);
  return rep;
}

CheckResult computed(std::string check, ojson instance, ojson witness) {
  return CheckResult{std::move(check), std::move(instance), CheckStatus::Pass, std::move(witness)};
}

int cmd_check(const Options& o) {
  return finish(run_suite(load_spec(o.spec_path), o.suite, o.seed, o.bounds), o);
}

int cmd_act(const Options& o) {
  TensorSpec spec = load_spec(o.spec_path);
  TensorElement f = parse_element(o.element, spec);
  Report rep = single("act", o, &spec);
  rep.results.push_back(computed("act", {{"k", o.k}, {"element", format_element(f, spec)}},
                                 {{"value", format_element(act(o.k, f, spec), spec)}}));
  return finish(rep, o);
}

int cmd_omega(const Options& o) {
  TensorSpec spec = load_spec(o.spec_path);
  TensorElement f = parse_element(o.element, spec);
  Report rep = single("omega", o, &spec);
  rep.results.push_back(computed("omega", {{"s", o.s}, {"l", o.l}, {"m", o.m}, {"element", format_element(f, spec)}},
                                 {{"value", format_element(omega_op(o.s, o.l, o.m, f, spec), spec)}}));
  return finish(rep, o);
}

int cmd_rank(const Options& o) {
  TensorSpec spec = load_spec(o.spec_path);
  TensorElement f = parse_element(o.element, spec);
  auto rr = rank_invariant(f, spec);
  Report rep = single("rank", o, &spec);
  CheckResult c{"rank",
                {{"element", format_element(f, spec)}},
                rr.stabilized ? CheckStatus::Pass : CheckStatus::Unknown,
                {{"rank", rr.value},
                 {"K", rr.K},
                 {"samples", rr.samples},
                 {"stabilized", rr.stabilized},
                 {"vacuum_rank", 2 * spec.m() + spec.n() + 1}}};
  rep.results.push_back(std::move(c));
  return finish(rep, o);
}

int cmd_certify(const Options& o) {
  TensorSpec spec = load_spec(o.spec_path);
  TensorElement f = parse_element(o.element, spec);
  Report rep = single("certify", o, &spec);
  CheckResult c{"irreducible_certificate",
                {{"element", format_element(f, spec)}, {"degree_bound", o.degree}, {"level_bound", o.level}},
                CheckStatus::Pass,
                nullptr};
  try {
    auto cert = certify_irreducible(spec, f, o.degree, o.level);
    auto rp = replay_certificate(cert, spec, f);
    ojson trace = ojson::array();
    for (const auto& s : cert.trace)
      if (!s.note.empty() && (trace.empty() || trace.back() != s.note)) trace.push_back(s.note);
    c.witness = {{"trace_steps", cert.trace.size()},
                 {"spanning_monomials", cert.spanning.size()},
                 {"replay", rp.ok ? "ok" : rp.failure},
                 {"stage_notes", trace}};
    if (!rp.ok) c.status = CheckStatus::Fail;
  } catch (const certification_error& e) {
    c.status = CheckStatus::Fail;
    c.witness = {{"error", e.what()}, {"stuck", format_element(e.stuck(), spec)}};
  }
  rep.results.push_back(std::move(c));
  return finish(rep, o);
}

int cmd_classify(const Options& o) {
  TensorSpec a = load_spec(o.spec_path);
  TensorSpec b = load_spec(o.other_path);
  auto res = specs_isomorphic(a, b);
  Report rep = single("classify", o, &a);
  ojson w{{"verdict", verdict_name(res.verdict)}, {"reason", res.reason}};
  if (res.verdict == IsoVerdict::Isomorphic) {
    w["dt_permutation"] = res.dt_perm;
    w["d_permutation"] = res.d_perm;
  }
  rep.results.push_back(computed("classify", {{"other", spec_to_json(b)}}, std::move(w)));
  return finish(rep, o);
}

int cmd_det(const Options& o) {
  ConfluentSpec cs;
  for (const auto& b : split_list(o.bases)) cs.bases.push_back(Rational::parse(b));
  for (const auto& m : split_list(o.mults)) {
    int v = std::stoi(m);
    if (v <= 0) throw precondition_error("multiplicities must be positive");
    cs.multiplicities.push_back(static_cast<unsigned>(v));
  }
  cs.offset = o.r;
  Rational formula = confluent_det_formula(cs);
  Rational direct = determinant(confluent_vandermonde(cs));
  Report rep = single("det", o, nullptr);
  ojson bases = ojson::array();
  for (const auto& x : cs.bases) bases.push_back(x.to_string());
  CheckResult c{"confluent_determinant",
                {{"bases", bases}, {"multiplicities", cs.multiplicities}, {"offset", cs.offset}},
                formula == direct ? CheckStatus::Pass : CheckStatus::Fail,
                {{"formula", formula.to_string()}, {"determinant", direct.to_string()}}};
  rep.results.push_back(std::move(c));
  return finish(rep, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with tensor products of non-weight Virasoro modules"};
  app.require_subcommand(1);
  Options o;

  auto spec_opt = [&](CLI::App* c) { c->add_option("--spec", o.spec_path, "spec file (JSON)")->required(); };
  auto elem_opt = [&](CLI::App* c) { c->add_option("--element", o.element, "element, e.g. \"D1*T1 : V[1]\"")->required(); };
  auto report_opt = [&](CLI::App* c) { c->add_option("--report", o.report_path, "write the JSON report here"); };

  auto* check = app.add_subcommand("check", "run a verification suite");
  spec_opt(check);
  check->add_option("--suite", o.suite, "suite name or \"all\"");
  check->add_option("--seed", o.seed, "seed for randomized checks");
  check->add_option("--max-exp", o.bounds.max_exp, "slot exponent bound for sweeps");
  check->add_option("--max-level", o.bounds.max_level, "V-level bound for sweeps");
  check->add_option("--k-max", o.bounds.k_max, "sweep d_k for |k| <= this");
  check->add_option("--samples", o.bounds.samples, "random elements per randomized check");
  report_opt(check);

  auto* actc = app.add_subcommand("act", "apply d_k to an element");
  spec_opt(actc);
  elem_opt(actc);
  actc->add_option("--k", o.k, "generator index")->required();
  report_opt(actc);

  auto* omegac = app.add_subcommand("omega", "apply omega^(s)_{l,m} to an element");
  spec_opt(omegac);
  elem_opt(omegac);
  omegac->add_option("--s", o.s)->required();
  omegac->add_option("--l", o.l)->required();
  omegac->add_option("--m", o.m)->required();
  report_opt(omegac);

  auto* rankc = app.add_subcommand("rank", "stabilized rank of {d_k f : k > K}");
  spec_opt(rankc);
  elem_opt(rankc);
  report_opt(rankc);

  auto* certc = app.add_subcommand("certify", "irreducibility certificate from an element, with replay");
  spec_opt(certc);
  elem_opt(certc);
  certc->add_option("--degree", o.degree, "regenerate monomials with exponents up to this");
  certc->add_option("--level", o.level, "and V-level up to this");
  report_opt(certc);

  auto* classc = app.add_subcommand("classify", "decide isomorphism of two tensor modules");
  spec_opt(classc);
  classc->add_option("--other", o.other_path, "second spec file")->required();
  report_opt(classc);

  auto* detc = app.add_subcommand("det", "confluent Vandermonde determinant: closed form against elimination");
  detc->add_option("--bases", o.bases, "comma-separated rationals")->required();
  detc->add_option("--mults", o.mults, "comma-separated multiplicities")->required();
  detc->add_option("--r", o.r, "row offset");
  report_opt(detc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return cmd_check(o);
    if (*actc) return cmd_act(o);
    if (*omegac) return cmd_omega(o);
    if (*rankc) return cmd_rank(o);
    if (*certc) return cmd_certify(o);
    if (*classc) return cmd_classify(o);
    if (*detc) return cmd_det(o);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!o.element.empty()) std::cerr << "  " << o.element << "\n  " << std::string(e.position(), ' ') << "^\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
