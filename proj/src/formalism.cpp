#include "congrua/formalism.hpp"

#include "congrua/cotangent.hpp"

namespace congrua {

namespace {

struct Check {
  bool ok = false;
  std::string detail;
};

using SuiteFn = Check (*)(const RandomInstance&);

Check congruence_factorization(const RandomInstance& inst) {
  const auto reg = regular_module(inst.datum.source);
  const auto a = check_bc_factorization(inst.datum, reg);
  const auto b = check_bc_factorization(inst.datum, direct_sum(reg, dual_module(reg)));
  return {a.holds() && b.holds(), "η_λ′(M) = η_λ(M_T)·η♯_λ(M)"};
}

Check duality(const RandomInstance& inst) {
  const auto& t = inst.algebra;
  const auto reg = regular_module(t);
  const PerfectPairing pr{reg, dual_module(reg), Matrix::identity(t.rank())};
  validate_pairing(t, pr);
  const auto r = duality_transfer(t, pr, inst.lambda);
  // The λ-parts here are rank one, so all three ideals must agree.
  return {r.holds() && r.left == eta(t, inst.lambda), "Fitt C0(M) = Fitt C0(M*) = ([δ, δ*])"};
}

Check lci_inclusion(const RandomInstance& inst) {
  const auto r = lci_criterion(inst.algebra, inst.lambda);
  return {r.fitting_c1.valuation() >= r.eta.valuation(), "v(Fitt C1) ≥ v(η)"};
}

Check hida_factorization(const RandomInstance& inst) {
  const auto r = check_hida_factorization(inst.datum);
  return {r.holds(), r.equality_expected ? "η_λ′ = η_λ·η♯ (Gorenstein, θ onto)" : "η_λ·η♯ | η_λ′"};
}

Check c1_sequence(const RandomInstance& inst) {
  const auto r = check_c1_exact_sequence(inst.datum);
  return {r.holds(), r.target_is_ci ? "Fitt C1(T′) = Fitt C1(T)·Fitt C1♯" : "target not CI"};
}

Check linear_base_change(const RandomInstance& inst) {
  const auto& d = inst.datum;
  const auto reg = regular_module(d.source);
  const auto delta = lambda_part(d.source, reg, d.lambda_prime());
  if (delta.size() != 1) return {false, "λ′-part is not a line"};
  const Matrix e_theta = dual_module(reg).action_of(theta_idempotent(d));
  const auto phis = saturate(e_theta.columns(), d.source.rank(), d.source.prime());
  // Every basis vector of the θ-part of M*, and their sum.
  Vector sum(d.source.rank());
  for (const auto& phi : phis) {
    if (!check_linear_bc(d, reg, phi, delta[0]).holds()) return {false, "basis functional"};
    sum = add(sum, phi);
  }
  return {check_linear_bc(d, reg, sum, delta[0]).holds(), "Φ(δ) ∈ η♯_λ(M*)"};
}

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> table{
      {"congruence_factorization", congruence_factorization},
      {"duality_transfer", duality},
      {"lci_inclusion", lci_inclusion},
      {"hida_factorization", hida_factorization},
      {"c1_exact_sequence", c1_sequence},
      {"linear_base_change", linear_base_change},
  };
  return table;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::size_t FormalismReport::failures() const {
  std::size_t n = 0;
  for (const auto& [suite, fams] : suites)
    for (const auto& [fam, c] : fams) n += c.failed;
  return n;
}

const std::vector<std::string>& formalism_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : suite_table()) out.push_back(name);
    return out;
  }();
  return names;
}

std::uint64_t instance_seed(std::uint64_t seed, AlgebraFamily family, std::size_t i) {
  return splitmix(splitmix(seed) ^ (static_cast<std::uint64_t>(family) << 40) ^ i);
}

FormalismReport run_formalism_suites(const FormalismOptions& options) {
  FormalismReport report;
  report.seed = options.seed;
  report.count = options.count;
  report.p = options.p;
  for (const auto& [name, fn] : suite_table())
    for (auto family : kAllFamilies) report.suites[name][std::string(to_string(family))];
  for (auto family : kAllFamilies) {
    const std::string fam(to_string(family));
    for (std::size_t i = 0; i < options.count; ++i) {
      const std::uint64_t s = instance_seed(options.seed, family, i);
      auto inst = random_algebra({family, options.p, 4, 2}, s);
      if (options.tamper) options.tamper(inst);
      for (const auto& [name, fn] : suite_table()) {
        Check c;
        try {
          c = fn(inst);
        } catch (const Error& e) {
          c = {false, e.what()};
        }
        auto& counts = report.suites[name][fam];
        if (c.ok) {
          ++counts.passed;
          continue;
        }
        ++counts.failed;
        nlohmann::json j;
        j["suite"] = name;
        j["family"] = fam;
        j["instance_seed"] = s;
        j["detail"] = c.detail;
        try {
          j["datum"] = to_json(inst.datum);
        } catch (const Error&) {
          j["datum"] = nullptr;
        }
        report.counterexamples.push_back(std::move(j));
      }
    }
  }
  return report;
}

nlohmann::json to_json(const FormalismReport& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["count"] = r.count;
  j["p"] = r.p;
  nlohmann::json suites = nlohmann::json::object();
  for (const auto& [name, fams] : r.suites) {
    nlohmann::json s = nlohmann::json::object();
    std::size_t passed = 0, failed = 0;
    for (const auto& [fam, c] : fams) {
      s[fam] = {{"passed", c.passed}, {"failed", c.failed}};
      passed += c.passed;
      failed += c.failed;
    }
    suites[name] = {{"families", s}, {"passed", passed}, {"failed", failed}};
  }
  j["suites"] = suites;
  j["failures"] = r.failures();
  j["counterexamples"] = r.counterexamples;
  return j;
}

}  // namespace congrua
