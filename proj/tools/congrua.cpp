// congrua: batch front end. Every command writes one JSON document with
// "schema": 1. Exit codes: 0 success, 1 failure, 2 refusal (a standing
// hypothesis does not hold), 3 usage.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "congrua/formalism.hpp"
#include "congrua/lfunc.hpp"
#include "congrua/modsym.hpp"
#include "congrua/qcache.hpp"
#include "json.hpp"

using namespace congrua;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kRefused = 2, kUsage = 3 };

struct RunConfig {
  std::string command;
  long level = 0;
  int weight = 2;
  std::vector<unsigned long> primes;
  std::vector<long> discs;
  std::string form;
  double precision = 1e-10;
  std::uint64_t seed = 1;
  std::size_t count = 200;
  std::size_t budget = 400000;
  std::string out;
  std::string cache;
};

// A hypothesis that does not hold, named as a formula.
struct Refusal {
  std::string kind;
  std::string hypothesis;
  std::string detail;
};

json to_json(const Refusal& r) { return {{"kind", r.kind}, {"hypothesis", r.hypothesis}, {"detail", r.detail}}; }

json error_json(const Error& e) { return {{"kind", std::string(to_string(e.kind()))}, {"detail", e.what()}}; }

json rational_json(const std::optional<std::pair<long, long>>& r) {
  if (!r) return nullptr;
  return json::array({r->first, r->second});
}

json valuations_json(const std::map<unsigned long, int>& v) {
  json j = json::object();
  for (const auto& [p, e] : v) j[std::to_string(p)] = e;
  return j;
}

std::optional<Refusal> check_space(const RunConfig& c) {
  if (c.level < 1) return Refusal{"PreconditionFailed", "N >= 1", "level " + std::to_string(c.level)};
  if (c.weight < 2 || c.weight % 2 != 0)
    return Refusal{"PreconditionFailed", "k even and k >= 2", "weight " + std::to_string(c.weight)};
  return std::nullopt;
}

// p odd, p ∤ N, p > k − 2.
std::optional<Refusal> check_prime(const RunConfig& c, unsigned long p) {
  const std::string ps = std::to_string(p);
  if (!is_prime(static_cast<long>(p)) || p == 2) return Refusal{"PreconditionFailed", "p odd prime", "p = " + ps};
  if (c.level % static_cast<long>(p) == 0)
    return Refusal{"PreconditionFailed", "p does not divide N", "p = " + ps + ", N = " + std::to_string(c.level)};
  if (static_cast<long>(p) <= c.weight - 2)
    return Refusal{"PreconditionFailed", "p > k - 2", "p = " + ps + ", k = " + std::to_string(c.weight)};
  return std::nullopt;
}

std::optional<Refusal> check_squarefree(const RunConfig& c) {
  for (long q = 2; q * q <= c.level; ++q)
    if (c.level % (q * q) == 0)
      return Refusal{"UnsupportedLocalType", "N squarefree",
                     std::to_string(q) + "^2 divides N = " + std::to_string(c.level)};
  return std::nullopt;
}

std::optional<Refusal> check_disc(const RunConfig& c, long d) {
  if (d != 1 && !is_fundamental_discriminant(d))
    return Refusal{"NotPrimitive", "D = 1 or a fundamental discriminant", "D = " + std::to_string(d)};
  if (std::gcd(d, c.level) != 1)
    return Refusal{"PreconditionFailed", "gcd(D, N) = 1", "D = " + std::to_string(d) + ", N = " + std::to_string(c.level)};
  return std::nullopt;
}

json envelope(const RunConfig& c) {
  json j;
  j["schema"] = 1;
  j["command"] = c.command;
  return j;
}

json refused(const RunConfig& c, const Refusal& r) {
  json j = envelope(c);
  j["status"] = "refused";
  j["refusal"] = to_json(r);
  return j;
}

// The rational newforms the command runs over: all of them, or --form.
std::vector<const EigenformData*> select_forms(const RunConfig& c, const RationalEigensystems& es,
                                               std::optional<Refusal>& refusal) {
  std::vector<const EigenformData*> out;
  for (const auto& f : es.forms)
    if (f.newform() && (c.form.empty() || f.label == c.form)) out.push_back(&f);
  if (out.empty())
    refusal = Refusal{"BlockNotFound", "a rational newform of level N and weight k",
                      c.form.empty() ? "none in this space" : c.form + " is not one"};
  return out;
}

// ---------------------------------------------------------------- commands

int cmd_verify_formalism(const RunConfig& c, json& out) {
  if (c.primes.size() > 1) {
    out = refused(c, {"InvalidArgument", "a single prime", "verify-formalism takes one --prime"});
    return kRefused;
  }
  FormalismOptions o;
  o.seed = c.seed;
  o.count = c.count;
  if (!c.primes.empty()) o.p = c.primes[0];
  if (!is_prime(static_cast<long>(o.p))) {
    out = refused(c, {"PreconditionFailed", "p prime", "p = " + std::to_string(o.p)});
    return kRefused;
  }
  const auto report = run_formalism_suites(o);
  out = envelope(c);
  out["status"] = report.ok() ? "ok" : "failed";
  out["report"] = to_json(report);
  return report.ok() ? kOk : kFailed;
}

int cmd_congruence_number(const RunConfig& c, json& out) {
  std::optional<Refusal> r = check_space(c);
  if (!r && c.primes.size() != 1) r = Refusal{"InvalidArgument", "a single prime", "pass exactly one --prime"};
  if (!r) r = check_prime(c, c.primes[0]);
  if (r) {
    out = refused(c, *r);
    return kRefused;
  }
  const unsigned long p = c.primes[0];
  const auto es = rational_eigensystems(build_space(c.level, c.weight));
  const auto forms = select_forms(c, es, r);
  if (r) {
    out = refused(c, *r);
    return kRefused;
  }
  json list = json::array();
  std::size_t refusals = 0;
  for (const auto* f : forms) {
    json e;
    e["form"] = f->label;
    try {
      const auto l = localize_at_eigenform(es, *f, p);
      e["eta_valuation"] = congruence_number(l).valuation();
      e["eta_coh_valuation"] = cohomological_congruence_number(l).valuation();
      e["freeness_verified"] = verify_freeness(l);
      e["block"] = l.members;
      // The q-expansion oracle is exact for blocks of one or two eigensystems.
      if (l.members.size() == 1) {
        e["oracle_valuation"] = 0;
      } else if (l.members.size() == 2) {
        const auto& g = l.members[0] == f->label ? l.members[1] : l.members[0];
        const EigenformData* other = nullptr;
        for (const auto& h : es.forms)
          if (h.label == g) other = &h;
        e["oracle_valuation"] = sturm_congruence_exponent(*f, *other, p);
      } else {
        e["oracle_valuation"] = nullptr;
      }
      e["status"] = "ok";
    } catch (const Error& err) {
      Refusal why{std::string(to_string(err.kind())), "", err.what()};
      switch (err.kind()) {
        case ErrorKind::EisensteinIdeal:
          why.hypothesis = "the residual representation of f mod p is irreducible (not Eisenstein)";
          break;
        case ErrorKind::Unsupported:
          why.hypothesis = "every eigensystem congruent to f mod p is rational";
          break;
        case ErrorKind::PairingDegenerate:
          why.hypothesis = "H^+ and H^- in perfect Hecke-equivariant duality";
          break;
        default:
          throw;
      }
      ++refusals;
      e["status"] = "refused";
      e["refusal"] = to_json(why);
    }
    list.push_back(e);
  }
  out = envelope(c);
  out["level"] = c.level;
  out["weight"] = c.weight;
  out["p"] = p;
  out["forms"] = list;
  const bool all_refused = refusals == forms.size();
  out["status"] = all_refused ? "refused" : (refusals ? "partial" : "ok");
  if (all_refused && forms.size() == 1) out["refusal"] = list[0]["refusal"];
  return all_refused ? kRefused : kOk;
}

json lvalue_json(const LValueResult& r, const QuadraticCharacter& alpha, const LValueOptions& o) {
  json j;
  j["disc"] = alpha.discriminant();
  j["normalization"] = alpha.even() ? "periods" : "unavailable";
  j["rational"] = rational_json(r.rational);
  j["valuations"] = valuations_json(r.valuations);
  if (alpha.discriminant() == 1) {
    j["classical_rational"] = rational_json(r.classical_rational);
    j["classical_valuations"] = valuations_json(r.classical_valuations);
  }
  j["error_bound"] = r.error;
  j["terms"] = r.terms;
  j["sign"] = r.sign;
  j["sign_residual"] = r.sign_residual;
  j["provenance"] = {{"budget", o.budget},
                     {"target_error", o.target_error},
                     {"max_denominator", o.max_denominator},
                     {"detection_error", o.detection_error}};
  j["diagnostics"] = {{"value", r.value},
                      {"completed", r.completed},
                      {"normalized", r.normalized},
                      {"classical", r.classical},
                      {"conductor", r.conductor},
                      {"omega_plus", r.periods.plus.real()},
                      {"omega_minus", r.periods.minus.imag()},
                      {"period_residual", r.periods.residual},
                      {"period_error", r.periods.error}};
  return j;
}

LValueOptions lvalue_options(const RunConfig& c) {
  LValueOptions o;
  o.target_error = c.precision;
  o.budget = c.budget;
  o.primes = c.primes;
  return o;
}

int cmd_adjoint_lvalue(const RunConfig& c, json& out) {
  std::optional<Refusal> r = check_space(c);
  if (!r) r = check_squarefree(c);
  if (!r && c.discs.size() > 1) r = Refusal{"InvalidArgument", "a single discriminant", "pass one --disc"};
  const long d = c.discs.empty() ? 1 : c.discs[0];
  if (!r) r = check_disc(c, d);
  for (unsigned long p : c.primes)
    if (!r) r = check_prime(c, p);
  if (r) {
    out = refused(c, *r);
    return kRefused;
  }
  const auto space = build_space(c.level, c.weight);
  const auto es = rational_eigensystems(space);
  const auto forms = select_forms(c, es, r);
  if (r) {
    out = refused(c, *r);
    return kRefused;
  }
  QExpansionCache cache(resolve_cache_path(c.cache));
  const QuadraticCharacter alpha(d);
  const auto o = lvalue_options(c);
  json list = json::array();
  bool failed = false;
  for (const auto* f : forms) {
    auto a = cache.load(c.level, c.weight, *f);
    LValueOptions fo = o;
    fo.coefficients = &a;
    json e;
    try {
      e = lvalue_json(adjoint_l_value(*space, *f, alpha, fo), alpha, fo);
      e["status"] = "ok";
    } catch (const Error& err) {
      e["status"] = "failed";
      e["error"] = error_json(err);
      failed = true;
    }
    cache.store(c.level, c.weight, f->label, a);
    json item = {{"form", f->label}};
    item.update(e);
    list.push_back(item);
  }
  out = envelope(c);
  out["level"] = c.level;
  out["weight"] = c.weight;
  out["forms"] = list;
  out["status"] = failed ? "failed" : "ok";
  return failed ? kFailed : kOk;
}

int cmd_base_change_report(const RunConfig& c, json& out) {
  std::optional<Refusal> r = check_space(c);
  if (!r) r = check_squarefree(c);
  if (!r && c.discs.empty()) r = Refusal{"InvalidArgument", "at least one discriminant", "pass --disc"};
  if (!r && c.primes.empty()) r = Refusal{"InvalidArgument", "at least one prime", "pass --prime"};
  if (r) {
    out = refused(c, *r);
    return kRefused;
  }
  const auto space = build_space(c.level, c.weight);
  const auto es = rational_eigensystems(space);
  const auto forms = select_forms(c, es, r);
  if (r) {
    out = refused(c, *r);
    return kRefused;
  }
  QExpansionCache cache(resolve_cache_path(c.cache));
  auto o = lvalue_options(c);
  json list = json::array();
  bool failed = false;
  for (const auto* f : forms) {
    auto a = cache.load(c.level, c.weight, *f);
    o.coefficients = &a;
    const auto rep = congruence_prime_report(*space, *f, c.discs, c.primes, o);
    cache.store(c.level, c.weight, f->label, a);
    json entries = json::array();
    json predicted = json::array();
    for (const auto& e : rep.entries) {
      entries.push_back({{"disc", e.discriminant},
                         {"p", e.p},
                         {"flag", to_string(e.flag)},
                         {"valuation", e.valuation},
                         {"note", e.note}});
      if (e.flag == PredictionFlag::Predicted) predicted.push_back({{"disc", e.discriminant}, {"p", e.p}});
      if (e.flag == PredictionFlag::Failed) failed = true;
    }
    json values = json::array();
    for (const auto& [d, v] : rep.values) values.push_back(lvalue_json(v, QuadraticCharacter(d), o));
    list.push_back({{"form", f->label}, {"entries", entries}, {"predicted", predicted}, {"values", values}});
  }
  out = envelope(c);
  out["level"] = c.level;
  out["weight"] = c.weight;
  out["forms"] = list;
  out["status"] = failed ? "failed" : "ok";
  return failed ? kFailed : kOk;
}

int emit(const RunConfig& c, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (c.out.empty() || c.out == "-") {
    std::cout << text << std::flush;
    return kOk;
  }
  std::ofstream f(c.out, std::ios::binary);
  f << text;
  if (!f) {
    std::cerr << "congrua: cannot write " << c.out << "\n";
    return kFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Congruence modules, Hecke algebras from modular symbols, and adjoint L-values"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* sub) { sub->add_option("--out", c.out, "output path (default stdout)"); };
  auto space = [&](CLI::App* sub) {
    sub->add_option("--level", c.level, "level N")->required();
    sub->add_option("--weight", c.weight, "even weight k")->capture_default_str();
    sub->add_option("--form", c.form, "restrict to one newform label, e.g. 37.2.b");
  };
  auto analytic = [&](CLI::App* sub) {
    sub->add_option("--budget", c.budget, "largest Fourier coefficient index")->capture_default_str();
    sub->add_option("--precision", c.precision, "relative target error")->capture_default_str();
    sub->add_option("--cache", c.cache, "q-expansion cache (JSON lines); CONGRUA_CACHE overrides");
  };

  auto* vf = app.add_subcommand("verify-formalism", "randomized property suites for congruence modules");
  vf->add_option("--seed", c.seed)->capture_default_str();
  vf->add_option("--count", c.count, "instances per family")->capture_default_str();
  vf->add_option("--prime", c.primes, "residue characteristic (default 3)");
  common(vf);

  auto* cn = app.add_subcommand("congruence-number", "eta_f, eta_f^coh and the q-expansion oracle at p");
  space(cn);
  cn->add_option("--prime", c.primes)->required();
  common(cn);

  auto* lv = app.add_subcommand("adjoint-lvalue", "L(Ad f x alpha_D, 1) with rational detection");
  space(lv);
  lv->add_option("--disc", c.discs, "fundamental discriminant (default 1)");
  lv->add_option("--prime", c.primes, "primes for valuations")->delimiter(',');
  analytic(lv);
  common(lv);

  auto* bc = app.add_subcommand("base-change-report", "predicted non-base-change congruence primes");
  space(bc);
  bc->add_option("--disc", c.discs)->required()->delimiter(',');
  bc->add_option("--prime", c.primes)->required()->delimiter(',');
  analytic(bc);
  common(bc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  json out;
  int code = kOk;
  try {
    if (vf->parsed()) {
      c.command = "verify-formalism";
      code = cmd_verify_formalism(c, out);
    } else if (cn->parsed()) {
      c.command = "congruence-number";
      code = cmd_congruence_number(c, out);
    } else if (lv->parsed()) {
      c.command = "adjoint-lvalue";
      code = cmd_adjoint_lvalue(c, out);
    } else {
      c.command = "base-change-report";
      code = cmd_base_change_report(c, out);
    }
  } catch (const Error& e) {
    out = envelope(c);
    out["status"] = "failed";
    out["error"] = error_json(e);
    code = kFailed;
  }
  const int written = emit(c, out);
  return code != kOk ? code : written;
}
