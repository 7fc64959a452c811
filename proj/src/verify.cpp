#include "khess/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "khess/energy.hpp"
#include "khess/serialize.hpp"
#include "khess/symfun.hpp"

namespace khess {

using nlohmann::json;

namespace {

// --- deterministic per-case streams ------------------------------------------

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t case_seed(uint64_t master, uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 1));
}

// --- suite layout -------------------------------------------------------------

bool is_dual_space(const std::string& suite) {
  return suite == "cauchy_schwarz" || suite == "symmetry";
}

bool uses_complex_scheme(const std::string& suite) {
  return suite == "hoelder" || suite == "convexity" || suite == "cauchy_schwarz" ||
         suite == "poincare_complex" || suite == "symmetry";
}

bool uses_real_scheme(const std::string& suite) {
  return suite == "cauchy_schwarz" || suite == "poincare_real" ||
         suite == "symmetry";
}

bool uses_quadrature(const std::string& suite) {
  return uses_complex_scheme(suite) || uses_real_scheme(suite);
}

bool uses_m(const std::string& suite) {
  return suite == "convexity" || suite == "poincare_complex" ||
         suite == "poincare_real" || suite == "garding";
}

QuadratureSpec effective_quadrature(const SuiteConfig& cfg) {
  QuadratureSpec spec = cfg.quadrature;
  if (spec.kind.empty())
    spec.kind = cfg.richness == Richness::Perturbed ? "grid" : "radial_gauss";
  return spec;
}

struct Schemes {
  bool has_c = false;
  bool has_r = false;
  QuadratureScheme cx;
  QuadratureScheme re;
};

Schemes build_schemes(const SuiteConfig& cfg) {
  Schemes s;
  if (!uses_quadrature(cfg.suite)) return s;
  const QuadratureSpec spec = effective_quadrature(cfg);
  if (uses_complex_scheme(cfg.suite)) {
    s.cx = make_scheme(spec, 2 * cfg.n);
    s.has_c = true;
  }
  if (uses_real_scheme(cfg.suite)) {
    s.re = make_scheme(spec, cfg.n);
    s.has_r = true;
  }
  return s;
}

// Step for the divergence suite's central differences.
constexpr double kFdStep = 1e-2;

double base_tau(const SuiteConfig& cfg, const Schemes& schemes) {
  if (cfg.tolerance > 0.0) return cfg.tolerance;
  if (cfg.suite == "garding") return 1e-10;
  if (cfg.suite == "divergence") {
    const double h = kFdStep / 2;  // residual is gated at the finer step
    return 100.0 * h * h;
  }
  return schemes.has_c ? schemes.cx.tau : schemes.re.tau;
}

// --- samplers -----------------------------------------------------------------

json specs_to_json_array(const std::vector<FunctionSpec>& specs) {
  json arr = json::array();
  for (const auto& s : specs) arr.push_back(spec_to_json(s));
  return arr;
}

std::vector<FunctionSpec> specs_from_json_array(const json& arr, size_t expect,
                                                const char* what) {
  if (!arr.is_array() || arr.size() != expect)
    throw InvalidInputError(std::string("replay: ") + what + " has the wrong arity");
  std::vector<FunctionSpec> specs;
  specs.reserve(arr.size());
  for (const auto& js : arr) specs.push_back(spec_from_json(js));
  return specs;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json sample_hoelder(const SuiteConfig& cfg, std::mt19937_64& g) {
  std::vector<FunctionSpec> specs;
  for (int j = 0; j <= cfg.k; ++j)
    specs.push_back(random_admissible(g(), complex_space(cfg.n), cfg.k, cfg.richness));
  return json{{"specs", specs_to_json_array(specs)}};
}

json sample_convexity(const SuiteConfig& cfg, std::mt19937_64& g) {
  const Space sp = complex_space(cfg.n);
  json j;
  j["u"] = spec_to_json(random_admissible(g(), sp, cfg.k, cfg.richness));
  j["v"] = spec_to_json(random_admissible(g(), sp, cfg.k, cfg.richness));
  json lower = json::array();
  for (int i = 0; i < cfg.m; ++i)
    lower.push_back(spec_to_json(random_cone_function(g(), sp, cfg.k)));
  j["lower"] = std::move(lower);
  return j;
}

json sample_cauchy_schwarz(const SuiteConfig& cfg, SpaceKind kind,
                           std::mt19937_64& g) {
  const Space sp = kind == SpaceKind::Complex ? complex_space(cfg.n)
                                              : real_space(cfg.n);
  json j;
  j["u0"] = spec_to_json(random_admissible(g(), sp, cfg.k, cfg.richness));
  j["u1"] = spec_to_json(random_admissible(g(), sp, cfg.k, cfg.richness));
  json lower = json::array();
  for (int i = 0; i < cfg.k - 1; ++i)
    lower.push_back(spec_to_json(random_cone_function(g(), sp, cfg.k)));
  j["lower"] = std::move(lower);
  return j;
}

json sample_poincare(const SuiteConfig& cfg, SpaceKind kind, std::mt19937_64& g) {
  const Space sp = kind == SpaceKind::Complex ? complex_space(cfg.n)
                                              : real_space(cfg.n);
  return json{{"u", spec_to_json(random_admissible(g(), sp, cfg.k, cfg.richness))}};
}

json sample_divergence(const SuiteConfig& cfg, std::mt19937_64& g) {
  const int n = cfg.n;
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  std::vector<FunctionSpec> specs;
  for (int l = 0; l + 1 < cfg.k; ++l) {
    Eigen::MatrixXd q(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c) q(r, c) = q(c, r) = nd(g);
    const FunctionSpec base =
        make_quadratic(real_space(n), q.cast<Complex>(), 0.0);
    // bump degree 0/1/2 makes the function quadratic/cubic/quartic
    const int deg = static_cast<int>(g() % 3);
    const Polynomial bump = random_bump(g, n, deg);
    specs.push_back(make_perturbed(base, bump, 0.5 * nd(g)));
  }
  Eigen::VectorXd dir(n);
  for (int i = 0; i < n; ++i) dir[i] = nd(g);
  if (dir.norm() == 0.0) dir[0] = 1.0;
  const Eigen::VectorXd x =
      0.9 * std::pow(un(g), 1.0 / n) * dir.normalized();
  json j;
  j["specs"] = specs_to_json_array(specs);
  j["point"] = vector_to_json(x);
  return j;
}

json sample_symmetry(const SuiteConfig& cfg, SpaceKind kind, std::mt19937_64& g) {
  const Space sp = kind == SpaceKind::Complex ? complex_space(cfg.n)
                                              : real_space(cfg.n);
  std::vector<FunctionSpec> specs;
  for (int j = 0; j <= cfg.k; ++j)
    specs.push_back(random_admissible(g(), sp, cfg.k, cfg.richness));
  std::vector<int> perm(specs.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  for (size_t i = perm.size() - 1; i > 0; --i)
    std::swap(perm[i], perm[g() % (i + 1)]);
  json j;
  j["specs"] = specs_to_json_array(specs);
  j["permutation"] = perm;
  return j;
}

Eigen::VectorXd sample_cone_vector(std::mt19937_64& g, int n, int k) {
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> un(0.0, 1.5);
  for (int tries = 0; tries < 64; ++tries) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = ex(g) + 0.05;
    v.array() -= un(g) * v.minCoeff();
    if (in_garding_cone(v, k)) return v;
  }
  Eigen::VectorXd v(n);  // positive orthant, always a member
  for (int i = 0; i < n; ++i) v[i] = ex(g) + 0.05;
  return v;
}

json sample_garding(const SuiteConfig& cfg, std::mt19937_64& g) {
  json j;
  j["lambda"] = vector_to_json(sample_cone_vector(g, cfg.n, cfg.k));
  j["a"] = vector_to_json(sample_cone_vector(g, cfg.n, cfg.k));
  j["b"] = vector_to_json(sample_cone_vector(g, cfg.n, cfg.k));
  return j;
}

json sample_case(const SuiteConfig& cfg, SpaceKind kind, std::mt19937_64& g) {
  if (cfg.suite == "hoelder") return sample_hoelder(cfg, g);
  if (cfg.suite == "convexity") return sample_convexity(cfg, g);
  if (cfg.suite == "cauchy_schwarz") return sample_cauchy_schwarz(cfg, kind, g);
  if (cfg.suite == "poincare_complex")
    return sample_poincare(cfg, SpaceKind::Complex, g);
  if (cfg.suite == "poincare_real") return sample_poincare(cfg, SpaceKind::Real, g);
  if (cfg.suite == "divergence") return sample_divergence(cfg, g);
  if (cfg.suite == "symmetry") return sample_symmetry(cfg, kind, g);
  return sample_garding(cfg, g);
}

// --- evaluators ---------------------------------------------------------------

struct CaseOutcome {
  double margin = 0.0;
  double tolerance = 0.0;
  double ratio = 0.0;
};

const QuadratureScheme& scheme_for(const Schemes& schemes, SpaceKind kind) {
  if (kind == SpaceKind::Complex) {
    if (!schemes.has_c) throw InvalidInputError("replay: no complex scheme here");
    return schemes.cx;
  }
  if (!schemes.has_r) throw InvalidInputError("replay: no real scheme here");
  return schemes.re;
}

CaseOutcome eval_hoelder(const SuiteConfig& cfg, const Schemes& schemes,
                         const json& input) {
  const std::vector<FunctionSpec> specs = specs_from_json_array(
      input.at("specs"), static_cast<size_t>(cfg.k) + 1, "specs");
  const int k = cfg.k;
  std::vector<const FunctionSpec*> pool;
  for (const auto& s : specs) pool.push_back(&s);
  std::vector<EnergyRequest> reqs;
  reqs.push_back({0, {}});
  for (int s = 1; s <= k; ++s) reqs.back().slots.push_back(s);
  for (int j = 0; j <= k; ++j)
    reqs.push_back({j, std::vector<int>(static_cast<size_t>(k), j)});
  const auto vals = mixed_energy_batch(pool, reqs, scheme_for(schemes, specs[0].space.kind));
  const double mixed = vals[0].value;
  double prod = 1.0;
  for (int j = 0; j <= k; ++j) prod *= clamped_root(vals[static_cast<size_t>(j) + 1].value, k + 1);
  CaseOutcome out;
  out.margin = prod - mixed;
  out.tolerance =
      base_tau(cfg, schemes) * std::max({1.0, std::abs(prod), std::abs(mixed)});
  return out;
}

CaseOutcome eval_convexity(const SuiteConfig& cfg, const Schemes& schemes,
                           const json& input) {
  const FunctionSpec u = spec_from_json(input.at("u"));
  const FunctionSpec v = spec_from_json(input.at("v"));
  const std::vector<FunctionSpec> lower = specs_from_json_array(
      input.at("lower"), static_cast<size_t>(cfg.m), "lower");
  const FunctionSpec sum = add_specs(u, v);

  std::vector<const FunctionSpec*> pool{&u, &v, &sum};
  for (const auto& w : lower) pool.push_back(&w);
  auto request = [&](int diag) {
    EnergyRequest r{diag, std::vector<int>(static_cast<size_t>(cfg.k - cfg.m), diag)};
    for (size_t i = 0; i < lower.size(); ++i) r.slots.push_back(static_cast<int>(3 + i));
    return r;
  };
  const std::vector<EnergyRequest> reqs{request(0), request(1), request(2)};
  const auto vals = mixed_energy_batch(pool, reqs, scheme_for(schemes, u.space.kind));

  const int p = cfg.k - cfg.m + 1;
  const double ru = clamped_root(vals[0].value, p);
  const double rv = clamped_root(vals[1].value, p);
  const double ruv = clamped_root(vals[2].value, p);
  CaseOutcome out;
  out.margin = ru + rv - ruv;
  out.tolerance = base_tau(cfg, schemes) * std::max({1.0, ru, rv, ruv});
  return out;
}

CaseOutcome eval_cauchy_schwarz(const SuiteConfig& cfg, const Schemes& schemes,
                                const json& input) {
  const FunctionSpec u0 = spec_from_json(input.at("u0"));
  const FunctionSpec u1 = spec_from_json(input.at("u1"));
  const std::vector<FunctionSpec> lower = specs_from_json_array(
      input.at("lower"), static_cast<size_t>(cfg.k) - 1, "lower");

  std::vector<const FunctionSpec*> pool{&u0, &u1};
  for (const auto& w : lower) pool.push_back(&w);
  auto request = [&](int weight, int first) {
    EnergyRequest r{weight, {first}};
    for (size_t i = 0; i < lower.size(); ++i) r.slots.push_back(static_cast<int>(2 + i));
    return r;
  };
  const std::vector<EnergyRequest> reqs{request(0, 0), request(1, 1), request(0, 1)};
  const auto vals = mixed_energy_batch(pool, reqs, scheme_for(schemes, u0.space.kind));

  const double f00 = vals[0].value;
  const double f11 = vals[1].value;
  const double f01 = vals[2].value;
  CaseOutcome out;
  out.margin = f00 * f11 - f01 * f01;
  out.tolerance = base_tau(cfg, schemes) *
                  std::max({1.0, std::abs(f00 * f11), f01 * f01});
  return out;
}

CaseOutcome eval_poincare(const SuiteConfig& cfg, const Schemes& schemes,
                          const json& input, SpaceKind kind) {
  const FunctionSpec u = spec_from_json(input.at("u"));
  if (u.space.kind != kind)
    throw InvalidInputError("replay: sample space does not match the suite");
  // reference cone function with unit Hessian: |z|^2 - 1 resp. (|x|^2 - 1)/2
  Eigen::VectorXd vc(1);
  vc[0] = kind == SpaceKind::Complex ? 1.0 : 0.5;
  const FunctionSpec v = make_radial(u.space, vc);

  const int k = cfg.k;
  const int m = cfg.m;
  std::vector<const FunctionSpec*> pool{&u, &v};
  std::vector<EnergyRequest> reqs;
  reqs.push_back({0, std::vector<int>(static_cast<size_t>(m), 0)});  // I_m[u]
  EnergyRequest chain{0, std::vector<int>(static_cast<size_t>(m), 0)};
  for (int s = m; s < k; ++s) chain.slots.push_back(1);  // F[u^(m+1), v^(k-m)]
  reqs.push_back(std::move(chain));
  reqs.push_back({0, std::vector<int>(static_cast<size_t>(k), 0)});  // I_k[u]
  reqs.push_back({1, std::vector<int>(static_cast<size_t>(k), 1)});  // I_k[v]
  const auto vals = mixed_energy_batch(pool, reqs, scheme_for(schemes, kind));

  const double im = vals[0].value;
  const double mixed = vals[1].value;
  const double iku = vals[2].value;
  const double ikv = vals[3].value;
  const double rhs =
      std::pow(std::max(iku, 0.0), static_cast<double>(m + 1) / (k + 1)) *
      std::pow(std::max(ikv, 0.0), static_cast<double>(k - m) / (k + 1));
  CaseOutcome out;
  out.margin = std::min(mixed - im, rhs - im);
  out.tolerance = base_tau(cfg, schemes) *
                  std::max({1.0, std::abs(im), std::abs(mixed), rhs});
  const double den = clamped_root(iku, k + 1);
  out.ratio = den > 1e-12 ? clamped_root(im, m + 1) / den : 0.0;
  return out;
}

CaseOutcome eval_divergence(const SuiteConfig& cfg, const json& input) {
  const std::vector<FunctionSpec> specs = specs_from_json_array(
      input.at("specs"), static_cast<size_t>(cfg.k) - 1, "specs");
  const Eigen::VectorXd x = field::vector(input.at("point"), "input.point");
  const int n = cfg.n;
  if (x.size() != n) throw InvalidInputError("replay: point dimension mismatch");

  std::vector<Eigen::MatrixXd> hs(specs.size());
  auto tensor_at = [&](const Eigen::VectorXd& y) {
    for (size_t l = 0; l < specs.size(); ++l) hs[l] = real_hessian(specs[l], y);
    return newton_tensor(std::span<const Eigen::MatrixXd>(hs), n);
  };

  double scale = 1.0;
  auto residual = [&](double h) {
    Eigen::VectorXd div = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd xp = x;
      Eigen::VectorXd xm = x;
      xp[j] += h;
      xm[j] -= h;
      const Eigen::MatrixXd tp = tensor_at(xp);
      const Eigen::MatrixXd tm = tensor_at(xm);
      scale = std::max({scale, tp.cwiseAbs().maxCoeff(), tm.cwiseAbs().maxCoeff(),
                        ((tp - tm) / (2 * h)).cwiseAbs().maxCoeff()});
      div += (tp.col(j) - tm.col(j)) / (2 * h);
    }
    return div.cwiseAbs().maxCoeff();
  };

  const double res_h = residual(kFdStep);
  const double res_half = residual(kFdStep / 2);
  CaseOutcome out;
  out.margin = -res_half;
  out.tolerance = (cfg.tolerance > 0.0 ? cfg.tolerance : 100.0 * (kFdStep / 2) * (kFdStep / 2)) * scale;
  out.ratio = res_half > 1e-12 * scale ? res_h / res_half : 0.0;
  return out;
}

CaseOutcome eval_symmetry(const SuiteConfig& cfg, const Schemes& schemes,
                          const json& input) {
  const std::vector<FunctionSpec> specs = specs_from_json_array(
      input.at("specs"), static_cast<size_t>(cfg.k) + 1, "specs");
  const json& jp = input.at("permutation");
  if (!jp.is_array() || jp.size() != specs.size())
    throw InvalidInputError("replay: permutation has the wrong arity");
  std::vector<int> perm;
  for (const auto& e : jp) perm.push_back(e.get<int>());
  const double res =
      symmetry_residual(specs, scheme_for(schemes, specs[0].space.kind), perm);
  CaseOutcome out;
  out.margin = -res;
  out.tolerance = base_tau(cfg, schemes);  // residual is already relative
  return out;
}

CaseOutcome eval_garding(const SuiteConfig& cfg, const json& input) {
  const Eigen::VectorXd lambda = field::vector(input.at("lambda"), "input.lambda");
  const Eigen::VectorXd a = field::vector(input.at("a"), "input.a");
  const Eigen::VectorXd b = field::vector(input.at("b"), "input.b");
  const double superadd =
      garding_superadditivity_margin(lambda, a, b, cfg.m, cfg.k);
  const LemmaMkResult lemma = lemma_mk_check(lambda, a + b, cfg.m, cfg.k);
  const double lhs = s_k(lambda, cfg.m);
  const double fab =
      clamped_root(polarized_s_k_repeated(lambda, cfg.m, a + b, cfg.k - cfg.m),
                   cfg.k - cfg.m);
  CaseOutcome out;
  out.margin = std::min(superadd, lemma.margin);
  out.tolerance = (cfg.tolerance > 0.0 ? cfg.tolerance : 1e-10) *
                  std::max({1.0, fab, std::abs(lhs), std::abs(lemma.margin + lhs)});
  return out;
}

CaseOutcome eval_case(const SuiteConfig& cfg, const Schemes& schemes,
                      const json& input) {
  if (cfg.suite == "hoelder") return eval_hoelder(cfg, schemes, input);
  if (cfg.suite == "convexity") return eval_convexity(cfg, schemes, input);
  if (cfg.suite == "cauchy_schwarz") return eval_cauchy_schwarz(cfg, schemes, input);
  if (cfg.suite == "poincare_complex")
    return eval_poincare(cfg, schemes, input, SpaceKind::Complex);
  if (cfg.suite == "poincare_real")
    return eval_poincare(cfg, schemes, input, SpaceKind::Real);
  if (cfg.suite == "divergence") return eval_divergence(cfg, input);
  if (cfg.suite == "symmetry") return eval_symmetry(cfg, schemes, input);
  return eval_garding(cfg, input);
}

// --- case runner ----------------------------------------------------------------

struct RowPlan {
  std::string id;
  SpaceKind kind = SpaceKind::Complex;
};

std::vector<RowPlan> plan_rows(const SuiteConfig& cfg) {
  std::vector<RowPlan> plans;
  if (is_dual_space(cfg.suite)) {
    for (int i = 0; i < cfg.samples; ++i) {
      plans.push_back({cfg.suite + ":c:" + std::to_string(i), SpaceKind::Complex});
      plans.push_back({cfg.suite + ":r:" + std::to_string(i), SpaceKind::Real});
    }
  } else {
    const SpaceKind kind = uses_real_scheme(cfg.suite) || cfg.suite == "divergence"
                               ? SpaceKind::Real
                               : SpaceKind::Complex;
    for (int i = 0; i < cfg.samples; ++i)
      plans.push_back({cfg.suite + ":" + std::to_string(i), kind});
  }
  return plans;
}

constexpr int kMaxRegenerations = 100;

CaseRow run_one(const SuiteConfig& cfg, const Schemes& schemes,
                const RowPlan& plan, size_t row_index) {
  CaseRow row;
  row.id = plan.id;
  std::mt19937_64 g(case_seed(cfg.seed, row_index));
  for (int attempt = 0; attempt < kMaxRegenerations; ++attempt) {
    json input = sample_case(cfg, plan.kind, g);
    try {
      const CaseOutcome out = eval_case(cfg, schemes, input);
      row.margin = out.margin;
      row.tolerance = out.tolerance;
      row.ratio = out.ratio;
      row.status = out.margin < -out.tolerance ? "violation" : "pass";
      row.digest = hex64(fnv1a64(canonical_dump(input)));
      row.input = std::move(input);
      return row;
    } catch (const DegenerateMuError&) {
      row.status = "skip";
      row.digest = hex64(fnv1a64(canonical_dump(input)));
      row.input = std::move(input);
      return row;
    } catch (const ConfigError&) {
      throw;  // malformed serialization is a bug, not a sampling miss
    } catch (const Error&) {
      ++row.regenerated;
    }
  }
  row.status = "aborted";
  return row;
}

}  // namespace

// --- configuration ------------------------------------------------------------

void validate_config(const SuiteConfig& cfg, const std::string& path) {
  static const char* names[] = {"hoelder",          "convexity",
                                "cauchy_schwarz",   "poincare_complex",
                                "poincare_real",    "divergence",
                                "symmetry",         "garding"};
  if (std::find(std::begin(names), std::end(names), cfg.suite) == std::end(names))
    field::fail(path + ".suite", "unknown suite \"" + cfg.suite + "\"");
  if (cfg.n < 1) field::fail(path + ".n", "n must be >= 1");
  if (cfg.k < 1) field::fail(path + ".k", "k must be >= 1");
  if (cfg.k > cfg.n) field::fail(path + ".k", "k must not exceed n");
  if (uses_m(cfg.suite)) {
    if (cfg.m < 0 || cfg.m >= cfg.k)
      field::fail(path + ".m", "m must lie in [0, k)");
  } else if (cfg.m != 0) {
    field::fail(path + ".m", "m is not used by this suite");
  }
  if (cfg.samples < 1) field::fail(path + ".samples", "samples must be >= 1");
  if (cfg.tolerance == 0.0)
    field::fail(path + ".tolerance", "tolerance override must be positive");
  if (cfg.suite == "divergence" && cfg.n > 6)
    field::fail(path + ".n", "divergence checks are limited to n <= 6");
  if (cfg.quadrature.param < 0)
    field::fail(path + ".quadrature", "negative scheme parameter");
  if (uses_quadrature(cfg.suite)) {
    const std::string kind = effective_quadrature(cfg).kind;
    if (kind != "radial_gauss" && kind != "grid")
      field::fail(path + ".quadrature.kind", "unknown scheme kind \"" + kind + "\"");
    if (cfg.richness == Richness::Perturbed && kind == "radial_gauss")
      field::fail(path + ".quadrature.kind",
                  "perturbed sampling needs the grid scheme");
  }
}

SuiteConfig suite_config_from_json(const json& j, const std::string& path) {
  SuiteConfig cfg;
  cfg.suite = field::text(field::require(j, "suite", path), path + ".suite");
  cfg.n = field::integer(field::require(j, "n", path), path + ".n");
  cfg.k = field::integer(field::require(j, "k", path), path + ".k");
  if (j.contains("m")) cfg.m = field::integer(j["m"], path + ".m");
  cfg.samples = field::integer(field::require(j, "samples", path), path + ".samples");
  if (j.contains("seed")) cfg.seed = field::unsigned64(j["seed"], path + ".seed");
  if (j.contains("richness")) {
    const std::string r = field::text(j["richness"], path + ".richness");
    if (r == "radial")
      cfg.richness = Richness::Radial;
    else if (r == "perturbed")
      cfg.richness = Richness::Perturbed;
    else
      field::fail(path + ".richness", "expected \"radial\" or \"perturbed\"");
  }
  if (j.contains("quadrature"))
    cfg.quadrature = quadrature_from_json(j["quadrature"], path + ".quadrature");
  if (j.contains("tolerance")) {
    cfg.tolerance = field::number(j["tolerance"], path + ".tolerance");
    if (cfg.tolerance <= 0.0)
      field::fail(path + ".tolerance", "tolerance override must be positive");
  }
  validate_config(cfg, path);
  return cfg;
}

nlohmann::json suite_config_to_json(const SuiteConfig& cfg) {
  json j;
  j["suite"] = cfg.suite;
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["m"] = cfg.m;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["richness"] = cfg.richness == Richness::Perturbed ? "perturbed" : "radial";
  if (uses_quadrature(cfg.suite))
    j["quadrature"] = quadrature_to_json(effective_quadrature(cfg));
  if (cfg.tolerance > 0.0) j["tolerance"] = cfg.tolerance;
  return j;
}

// --- runner ---------------------------------------------------------------------

SuiteReport run_suite(const SuiteConfig& cfg, int jobs) {
  validate_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const Schemes schemes = build_schemes(cfg);
  const std::vector<RowPlan> plans = plan_rows(cfg);

  std::vector<CaseRow> rows(plans.size());
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const size_t r = next.fetch_add(1);
      if (r >= plans.size()) return;
      rows[r] = run_one(cfg, schemes, plans[r], r);
    }
  };
  const int workers = std::max(1, jobs);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SuiteReport rep;
  rep.config = cfg;
  rep.tolerance = base_tau(cfg, schemes);
  std::vector<double> margins;
  size_t worst = rows.size();
  for (size_t r = 0; r < rows.size(); ++r) {
    const CaseRow& row = rows[r];
    rep.regenerated += row.regenerated;
    if (row.status == "skip") {
      ++rep.skips;
    } else if (row.status == "aborted") {
      ++rep.aborted;
    } else {
      if (row.status == "violation") ++rep.violations;
      margins.push_back(row.margin);
      rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
      if (worst == rows.size() || row.margin < rows[worst].margin) worst = r;
    }
  }
  if (!margins.empty()) {
    std::sort(margins.begin(), margins.end());
    rep.min_margin = margins.front();
    const size_t mid = margins.size() / 2;
    rep.median_margin = margins.size() % 2 == 1
                            ? margins[mid]
                            : 0.5 * (margins[mid - 1] + margins[mid]);
    rep.worst_input = rows[worst].input;
  }
  rep.rows = std::move(rows);
  rep.passed = rep.violations == 0 && rep.aborted == 0;
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

double replay_case(const SuiteConfig& cfg, const nlohmann::json& input) {
  validate_config(cfg);
  const Schemes schemes = build_schemes(cfg);
  return eval_case(cfg, schemes, input).margin;
}

nlohmann::json report_to_json(const SuiteReport& report) {
  json j;
  j["config"] = suite_config_to_json(report.config);
  j["cases"] = report.rows.size();
  j["violations"] = report.violations;
  j["skips"] = report.skips;
  j["aborted"] = report.aborted;
  j["regenerated"] = report.regenerated;
  j["min_margin"] = report.min_margin;
  j["median_margin"] = report.median_margin;
  j["sup_ratio"] = report.sup_ratio;
  j["tolerance"] = report.tolerance;
  j["elapsed_seconds"] = report.elapsed_seconds;
  j["worst_input"] = report.worst_input;
  j["passed"] = report.passed;
  return j;
}

std::string report_csv(const SuiteReport& report) {
  std::string csv = "case_id,margin,tolerance,status,spec_digest\n";
  for (const CaseRow& row : report.rows) {
    csv += row.id;
    csv += ',';
    csv += format_double(row.margin);
    csv += ',';
    csv += format_double(row.tolerance);
    csv += ',';
    csv += row.status;
    csv += ',';
    csv += row.digest;
    csv += '\n';
  }
  return csv;
}

}  // namespace khess
