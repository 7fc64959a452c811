// Acceptance gate: exercises the library end to end and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "khess/energy.hpp"
#include "khess/funcspace.hpp"
#include "khess/quadrature.hpp"
#include "khess/serialize.hpp"
#include "khess/symfun.hpp"
#include "khess/verify.hpp"

using namespace khess;
using nlohmann::json;

namespace {

int failures = 0;

template <typename F>
void gate(const char* name, double time_limit, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("threw: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (time_limit > 0 && secs > time_limit) {
    ok = false;
    detail += " [over time budget]";
  }
  std::printf("[%s] %-42s %6.2fs  %s\n", ok ? "PASS" : "FAIL", name, secs,
              detail.c_str());
  if (!ok) ++failures;
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

std::string fmt(const char* pattern, double x) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

Eigen::MatrixXcd random_hermitian(std::mt19937_64& g, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(nd(g), nd(g));
  return (m + m.adjoint()).eval() / 2;
}

Eigen::MatrixXd random_symmetric(std::mt19937_64& g, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = nd(g);
  return (m + m.transpose()).eval() / 2;
}

Eigen::VectorXd random_ball_point(std::mt19937_64& g, int n, double radius) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  Eigen::VectorXd dir(n);
  for (int i = 0; i < n; ++i) dir[i] = nd(g);
  if (dir.norm() == 0.0) dir[0] = 1.0;
  return radius * std::pow(un(g), 1.0 / n) * dir.normalized();
}

double divergence_residual(const std::vector<FunctionSpec>& specs,
                           const Eigen::VectorXd& x, double h) {
  const int n = static_cast<int>(x.size());
  std::vector<Eigen::MatrixXd> hs(specs.size());
  auto tensor = [&](const Eigen::VectorXd& y) {
    for (size_t i = 0; i < specs.size(); ++i) hs[i] = real_hessian(specs[i], y);
    return newton_tensor(std::span<const Eigen::MatrixXd>(hs), n);
  };
  Eigen::VectorXd div = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp[j] += h;
    xm[j] -= h;
    div += (tensor(xp).col(j) - tensor(xm).col(j)) / (2 * h);
  }
  return div.cwiseAbs().maxCoeff();
}

bool suite_clean(const SuiteReport& rep) {
  return rep.violations == 0 && rep.aborted == 0;
}

// ---------------------------------------------------------------------------

bool closed_form_energies(std::string& detail) {
  double worst = 0.0;
  const double pi = std::acos(-1.0);
  Eigen::VectorXd one(1);
  one[0] = 1.0;
  for (int n = 1; n <= 4; ++n) {
    const QuadratureScheme scheme = radial_gauss(2 * n, 64);
    const FunctionSpec u = make_radial(complex_space(n), one);
    double expect = std::pow(pi, n);
    for (int j = 2; j <= n + 1; ++j) expect /= j;
    for (int k = 0; k <= n; ++k)
      worst = std::max(worst,
                       std::abs(energy_Ik(u, k, scheme).value - expect) /
                           expect);
  }
  detail = fmt("max rel err %.2e", worst);
  return worst <= 1e-8;
}

bool polarization_routes(std::string& detail) {
  std::mt19937_64 g(2026);
  double worst = 0.0;
  double worst_diag = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(g() % 5);
    const int k = 1 + static_cast<int>(g() % n);
    std::vector<Eigen::MatrixXcd> args;
    for (int j = 0; j < k; ++j) args.push_back(random_hermitian(g, n));
    const std::span<const Eigen::MatrixXcd> view(args);
    worst = std::max(
        worst, rel(polarized_s_k(view), polarized_s_k_kronecker(view)));
    const std::vector<Eigen::MatrixXcd> diag(static_cast<size_t>(k), args[0]);
    worst_diag = std::max(
        worst_diag,
        rel(polarized_s_k(std::span<const Eigen::MatrixXcd>(diag)),
            s_k_matrix(args[0], k)));
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(g() % 5);
    const int k = 1 + static_cast<int>(g() % n);
    std::vector<Eigen::MatrixXd> args;
    for (int j = 0; j < k; ++j) args.push_back(random_symmetric(g, n));
    const std::span<const Eigen::MatrixXd> view(args);
    worst = std::max(
        worst, rel(polarized_s_k(view), polarized_s_k_kronecker(view)));
    const std::vector<Eigen::MatrixXd> diag(static_cast<size_t>(k), args[0]);
    worst_diag = std::max(
        worst_diag, rel(polarized_s_k(std::span<const Eigen::MatrixXd>(diag)),
                        s_k_matrix(args[0], k)));
  }
  detail = fmt("routes %.2e, ", worst) + fmt("diagonal %.2e", worst_diag);
  return worst <= 1e-10 && worst_diag <= 1e-12;
}

bool hoelder_suites(std::string& detail) {
  int rows_radial = 0;
  int rows_perturbed = 0;
  bool clean = true;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= n; ++k) {
      SuiteConfig cfg;
      cfg.suite = "hoelder";
      cfg.n = n;
      cfg.k = k;
      cfg.samples = 84;
      cfg.seed = static_cast<uint64_t>(300 + 10 * n + k);
      const SuiteReport radial = run_suite(cfg, 4);
      clean = clean && suite_clean(radial);
      rows_radial += static_cast<int>(radial.rows.size());

      cfg.richness = Richness::Perturbed;
      cfg.samples = 17;
      cfg.quadrature = QuadratureSpec{"grid", n == 3 ? 8 : 0};
      const SuiteReport perturbed = run_suite(cfg, 4);
      clean = clean && suite_clean(perturbed);
      rows_perturbed += static_cast<int>(perturbed.rows.size());
    }
  }

  SuiteConfig eq;
  eq.suite = "hoelder";
  eq.n = 2;
  eq.k = 2;
  eq.samples = 1;
  const FunctionSpec u =
      random_admissible(11, complex_space(2), 2, Richness::Radial);
  json all_equal;
  all_equal["specs"] =
      json::array({spec_to_json(u), spec_to_json(u), spec_to_json(u)});
  const double m_eq = replay_case(eq, all_equal);
  json prop;
  prop["specs"] = json::array({spec_to_json(scale_spec(u, 1.0)),
                               spec_to_json(scale_spec(u, 0.7)),
                               spec_to_json(scale_spec(u, 2.3))});
  const double m_prop = replay_case(eq, prop);

  const FunctionSpec v0 =
      random_admissible(21, complex_space(2), 2, Richness::Radial);
  const FunctionSpec v1 =
      random_admissible(22, complex_space(2), 2, Richness::Radial);
  const FunctionSpec v2 =
      random_admissible(23, complex_space(2), 2, Richness::Radial);
  json base;
  base["specs"] = json::array(
      {spec_to_json(v0), spec_to_json(v1), spec_to_json(v2)});
  json scaled;
  const double c = 1.3;
  scaled["specs"] = json::array({spec_to_json(scale_spec(v0, c)),
                                 spec_to_json(scale_spec(v1, c)),
                                 spec_to_json(scale_spec(v2, c))});
  const double m1 = replay_case(eq, base);
  const double m2 = replay_case(eq, scaled);
  const double scale_err =
      std::abs(m2 - std::pow(c, 3) * m1) /
      std::max(1.0, std::abs(std::pow(c, 3) * m1));

  detail = "cases " + std::to_string(rows_radial) + "+" +
           std::to_string(rows_perturbed) + fmt(", equality %.1e", m_eq) +
           fmt("/%.1e", m_prop) + fmt(", rescale %.1e", scale_err);
  return clean && rows_radial >= 500 && rows_perturbed >= 100 &&
         std::abs(m_eq) <= 1e-9 && std::abs(m_prop) <= 1e-9 &&
         scale_err <= 1e-9;
}

bool convexity_suite(std::string& detail) {
  int rows = 0;
  bool clean = true;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= n; ++k) {
      for (int m = 0; m < k; ++m) {
        SuiteConfig cfg;
        cfg.suite = "convexity";
        cfg.n = n;
        cfg.k = k;
        cfg.m = m;
        cfg.samples = 30;
        cfg.seed = static_cast<uint64_t>(400 + 100 * n + 10 * k + m);
        const SuiteReport rep = run_suite(cfg, 4);
        clean = clean && suite_clean(rep);
        rows += static_cast<int>(rep.rows.size());
      }
    }
  }

  SuiteConfig eq;
  eq.suite = "convexity";
  eq.n = 2;
  eq.k = 2;
  eq.m = 1;
  eq.samples = 1;
  const Space sp = complex_space(2);
  const FunctionSpec u = random_admissible(31, sp, 2, Richness::Radial);
  const FunctionSpec w = random_cone_function(32, sp, 2);
  json same;
  same["u"] = spec_to_json(u);
  same["v"] = spec_to_json(u);
  same["lower"] = json::array({spec_to_json(w)});
  const double m_same = replay_case(eq, same);
  json zero;
  zero["u"] = spec_to_json(u);
  zero["v"] = spec_to_json(make_radial(sp, Eigen::VectorXd()));
  zero["lower"] = json::array({spec_to_json(w)});
  const double m_zero = replay_case(eq, zero);

  detail = "cases " + std::to_string(rows) + fmt(", u=v %.1e", m_same) +
           fmt(", v=0 %.1e", m_zero);
  return clean && rows == 300 && std::abs(m_same) <= 1e-9 &&
         std::abs(m_zero) <= 1e-9;
}

bool cauchy_schwarz_suites(std::string& detail) {
  const int dims[3][2] = {{1, 1}, {2, 2}, {3, 2}};
  int rows = 0;
  bool clean = true;
  for (const auto& nk : dims) {
    SuiteConfig cfg;
    cfg.suite = "cauchy_schwarz";
    cfg.n = nk[0];
    cfg.k = nk[1];
    cfg.samples = 100;
    cfg.seed = static_cast<uint64_t>(500 + 10 * nk[0] + nk[1]);
    const SuiteReport rep = run_suite(cfg, 4);
    clean = clean && suite_clean(rep);
    rows += static_cast<int>(rep.rows.size());
  }

  SuiteConfig eq;
  eq.suite = "cauchy_schwarz";
  eq.n = 2;
  eq.k = 2;
  eq.samples = 1;
  double worst_eq = 0.0;
  for (const Space sp : {complex_space(2), real_space(2)}) {
    const FunctionSpec u = random_admissible(41, sp, 2, Richness::Radial);
    const FunctionSpec w = random_cone_function(42, sp, 2);
    json in;
    in["u0"] = spec_to_json(u);
    in["u1"] = spec_to_json(scale_spec(u, 0.6));
    in["lower"] = json::array({spec_to_json(w)});
    worst_eq = std::max(worst_eq, std::abs(replay_case(eq, in)));
  }
  detail = "cases " + std::to_string(rows) + fmt(", equality %.1e", worst_eq);
  return clean && rows == 600 && worst_eq <= 1e-9;
}

bool divergence_orders(std::string& detail) {
  std::mt19937_64 g(99);
  const int n = 3;

  double worst_quadratic = 0.0;
  {
    std::vector<FunctionSpec> specs;
    for (int i = 0; i < 2; ++i)
      specs.push_back(make_quadratic(real_space(n),
                                     random_symmetric(g, n).cast<Complex>(),
                                     0.1));
    for (int t = 0; t < 20; ++t)
      worst_quadratic =
          std::max(worst_quadratic,
                   divergence_residual(specs, random_ball_point(g, n, 0.9),
                                       1e-2));
  }

  double worst_cubic = 0.0;
  {
    Polynomial p(n);
    p.add_term(0.5, {0, 0, 0});
    p.add_term(0.4, {1, 0, 0});
    p.add_term(-0.3, {0, 1, 0});
    p.add_term(0.25, {0, 0, 1});
    const std::vector<FunctionSpec> specs{make_perturbed(
        make_quadratic(real_space(n), random_symmetric(g, n).cast<Complex>(),
                       0.0),
        p, 0.7)};
    for (int t = 0; t < 20; ++t)
      worst_cubic = std::max(
          worst_cubic,
          divergence_residual(specs, random_ball_point(g, n, 0.9), 1e-2));
  }

  std::vector<double> ratios;
  {
    auto quartic = [&](double a0, double a1, double a2) {
      Polynomial p(n);
      p.add_term(a0, {2, 0, 0});
      p.add_term(a1, {1, 1, 0});
      p.add_term(a2, {0, 0, 2});
      p.add_term(0.2, {0, 1, 0});
      return make_perturbed(
          make_quadratic(real_space(n), random_symmetric(g, n).cast<Complex>(),
                         0.0),
          p, 0.8);
    };
    const std::vector<FunctionSpec> specs{quartic(0.6, -0.45, 0.3),
                                          quartic(-0.25, 0.5, 0.35)};
    for (int t = 0; t < 100; ++t) {
      const Eigen::VectorXd x = random_ball_point(g, n, 0.9);
      const double r1 = divergence_residual(specs, x, 1e-2);
      const double r2 = divergence_residual(specs, x, 0.5e-2);
      if (r2 > 1e-13) ratios.push_back(r1 / r2);
    }
  }
  std::sort(ratios.begin(), ratios.end());
  const double median =
      ratios.empty() ? 0.0 : ratios[ratios.size() / 2];

  detail = fmt("quadratic %.1e", worst_quadratic) +
           fmt(", cubic %.1e", worst_cubic) +
           fmt(", refinement ratio %.2f", median);
  return worst_quadratic <= 1e-12 && worst_cubic <= 1e-10 &&
         ratios.size() >= 90 && median >= 3.5 && median <= 4.5;
}

bool poincare_chains(std::string& detail) {
  bool clean = true;
  int rows = 0;
  for (const char* suite : {"poincare_complex", "poincare_real"}) {
    for (int n = 1; n <= 3; ++n) {
      for (int k = 1; k <= n; ++k) {
        for (int m = 0; m < k; ++m) {
          SuiteConfig cfg;
          cfg.suite = suite;
          cfg.n = n;
          cfg.k = k;
          cfg.m = m;
          cfg.samples = 20;
          cfg.seed = static_cast<uint64_t>(700 + 100 * n + 10 * k + m);
          const SuiteReport rep = run_suite(cfg, 4);
          clean = clean && suite_clean(rep);
          rows += static_cast<int>(rep.rows.size());
        }
      }
    }
  }

  const double pi = std::acos(-1.0);
  Eigen::VectorXd one(1);
  one[0] = 1.0;
  const FunctionSpec uc = make_radial(complex_space(1), one);
  const QuadratureScheme sc = radial_gauss(2, 64);
  const double i0 = energy_Ik(uc, 0, sc).value;
  const double i1 = energy_Ik(uc, 1, sc).value;
  const double disc_err =
      std::max(std::abs(i0 - pi / 2),
               std::abs(std::sqrt(i1) * std::sqrt(i1) - pi / 2));

  Eigen::VectorXd half(1);
  half[0] = 0.5;
  const FunctionSpec ur = make_radial(real_space(1), half);
  const QuadratureScheme sr = radial_gauss(1, 64);
  const double j0 = energy_Jk(ur, 0, sr).value;
  const double j1 = energy_Jk(ur, 1, sr).value;
  const double seg_err = std::max(std::abs(j0 - 2.0 / 3),
                                  std::abs(std::sqrt(j1) * std::sqrt(j1) -
                                           2.0 / 3));

  SuiteConfig eqc;
  eqc.suite = "poincare_complex";
  eqc.n = 1;
  eqc.k = 1;
  eqc.m = 0;
  eqc.samples = 1;
  json jc;
  jc["u"] = spec_to_json(uc);
  const double m_c = replay_case(eqc, jc);
  SuiteConfig eqr = eqc;
  eqr.suite = "poincare_real";
  json jr;
  jr["u"] = spec_to_json(ur);
  const double m_r = replay_case(eqr, jr);

  detail = "cases " + std::to_string(rows) + fmt(", disc %.1e", disc_err) +
           fmt(", segment %.1e", seg_err) +
           fmt(", equal margins %.1e", std::max(std::abs(m_c), std::abs(m_r)));
  return clean && rows == 400 && disc_err <= 1e-10 && seg_err <= 1e-10 &&
         std::abs(m_c) <= 1e-10 && std::abs(m_r) <= 1e-10;
}

bool symmetry_suites(std::string& detail) {
  SuiteConfig cfg;
  cfg.suite = "symmetry";
  cfg.n = 2;
  cfg.k = 2;
  cfg.samples = 45;
  cfg.seed = 800;
  const SuiteReport radial = run_suite(cfg, 4);

  SuiteConfig grid_cfg;
  grid_cfg.suite = "symmetry";
  grid_cfg.n = 1;
  grid_cfg.k = 1;
  grid_cfg.samples = 5;
  grid_cfg.seed = 801;
  grid_cfg.richness = Richness::Perturbed;
  const SuiteReport grid = run_suite(grid_cfg, 4);

  const int rows =
      static_cast<int>(radial.rows.size() + grid.rows.size());
  detail = "cases " + std::to_string(rows) +
           fmt(", radial residual %.1e", -radial.min_margin) +
           fmt(", grid residual %.1e", -grid.min_margin);
  return suite_clean(radial) && suite_clean(grid) && rows == 100 &&
         radial.min_margin >= -1e-9;
}

bool garding_suite(std::string& detail) {
  int rows = 0;
  bool clean = true;
  double min_margin = 0.0;
  for (int n = 1; n <= 4; ++n) {
    for (int k = 1; k <= n; ++k) {
      for (int m = 0; m < k; ++m) {
        SuiteConfig cfg;
        cfg.suite = "garding";
        cfg.n = n;
        cfg.k = k;
        cfg.m = m;
        cfg.samples = 50;
        cfg.seed = static_cast<uint64_t>(900 + 100 * n + 10 * k + m);
        const SuiteReport rep = run_suite(cfg, 4);
        clean = clean && suite_clean(rep);
        rows += static_cast<int>(rep.rows.size());
        min_margin = std::min(min_margin, rep.min_margin);
      }
    }
  }
  detail = "cases " + std::to_string(rows) + fmt(", min margin %.1e", min_margin);
  return clean && rows == 1000 && min_margin >= -1e-10;
}

bool deterministic_reports(std::string& detail) {
  SuiteConfig a;
  a.suite = "hoelder";
  a.n = 2;
  a.k = 2;
  a.samples = 50;
  a.seed = 31337;
  SuiteConfig b;
  b.suite = "garding";
  b.n = 4;
  b.k = 3;
  b.m = 1;
  b.samples = 200;
  b.seed = 64;
  bool same = true;
  for (const SuiteConfig& cfg : {a, b})
    same = same && report_csv(run_suite(cfg, 1)) == report_csv(run_suite(cfg, 8));
  detail = same ? "csv bytes identical at 1 and 8 jobs" : "csv bytes differ";
  return same;
}

}  // namespace

int main() {
  gate("closed-form energies on the unit ball", 1.0, closed_form_energies);
  gate("polarization routes agree", 10.0, polarization_routes);
  gate("hoelder suites, radial and perturbed", 120.0, hoelder_suites);
  gate("convexity suite", 0.0, convexity_suite);
  gate("cauchy-schwarz suites in both spaces", 0.0, cauchy_schwarz_suites);
  gate("newton tensor divergence orders", 0.0, divergence_orders);
  gate("poincare chains and reference constants", 0.0, poincare_chains);
  gate("permutation symmetry of mixed energies", 0.0, symmetry_suites);
  gate("cone superadditivity and lower bounds", 0.0, garding_suite);
  gate("bytewise deterministic reports", 0.0, deterministic_reports);
  std::printf("%s\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL");
  return failures;
}
