#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "khess/energy.hpp"
#include "khess/funcspace.hpp"
#include "khess/quadrature.hpp"

using std::numbers::pi;

namespace {

Eigen::VectorXd coeffs(std::initializer_list<double> v) {
  Eigen::VectorXd c(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) c[i++] = x;
  return c;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("I_k of the standard potential hits the closed form") {
  // u = |z|^2 - 1 has identity complex Hessian, so I_k[u] is the volume
  // integral of 1 - |z|^2: pi^n / (n+1)! for every k.
  for (int n = 1; n <= 4; ++n) {
    const auto u = khess::make_radial(khess::complex_space(n), coeffs({1.0}));
    const auto scheme = khess::radial_gauss(2 * n, 64);
    const double expect = std::pow(pi, n) / factorial(n + 1);
    for (int k = 0; k <= n; ++k) {
      const auto e = khess::energy_Ik(u, k, scheme);
      CHECK(std::abs(e.value - expect) <= 1e-10 * expect);
    }
  }
  const auto disc = khess::make_radial(khess::complex_space(1), coeffs({1.0}));
  const auto e = khess::energy_Ik(disc, 1, khess::radial_gauss(2, 64));
  CHECK(e.value == doctest::Approx(pi / 2.0).epsilon(1e-12));
}

TEST_CASE("J_k of the standard real potential hits the closed form") {
  for (int n = 1; n <= 4; ++n) {
    const auto u = khess::make_radial(khess::real_space(n), coeffs({1.0}));
    const auto scheme = khess::radial_gauss(n, 64);
    for (int k = 0; k <= n; ++k) {
      const double expect =
          std::pow(2.0, k) * khess::ball_volume(n) * 2.0 / (n + 2);
      const auto e = khess::energy_Jk(u, k, scheme);
      CHECK(std::abs(e.value - expect) <= 1e-10 * expect);
    }
  }
}

TEST_CASE("homogeneity of degree k+1 in the diagonal argument") {
  const auto sp = khess::complex_space(3);
  const auto u = khess::make_radial(sp, coeffs({0.7, 0.4, 0.1}));
  const auto cu = khess::scale_spec(u, 1.7);
  const auto scheme = khess::radial_gauss(6, 64);
  for (int k = 1; k <= 3; ++k) {
    const double base = khess::energy_Ik(u, k, scheme).value;
    const double scaled = khess::energy_Ik(cu, k, scheme).value;
    CHECK(scaled == doctest::Approx(std::pow(1.7, k + 1) * base).epsilon(1e-10));
  }
}

TEST_CASE("multilinearity and scaling covariance of the mixed energy") {
  const auto sp = khess::complex_space(2);
  const auto scheme = khess::radial_gauss(4, 64);
  const auto u0 = khess::make_radial(sp, coeffs({1.0, 0.2}));
  const auto a = khess::make_radial(sp, coeffs({0.5, 0.7}));
  const auto b = khess::make_radial(sp, coeffs({1.1}));
  const auto c = khess::make_radial(sp, coeffs({0.3, 0.0, 0.4}));

  const double alpha = 0.6, beta = 2.3;
  const auto combo = khess::make_combination({alpha, beta}, {a, b});
  const double lhs = khess::mixed_energy_complex({u0, combo, c}, scheme).value;
  const double rhs = alpha * khess::mixed_energy_complex({u0, a, c}, scheme).value +
                     beta * khess::mixed_energy_complex({u0, b, c}, scheme).value;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));

  // scaling each argument multiplies the value by the product of factors
  const double c0 = 0.9, c1 = 1.4, c2 = 2.2;
  const double scaled =
      khess::mixed_energy_complex(
          {khess::scale_spec(u0, c0), khess::scale_spec(a, c1),
           khess::scale_spec(c, c2)},
          scheme)
          .value;
  const double plain = khess::mixed_energy_complex({u0, a, c}, scheme).value;
  CHECK(scaled == doctest::Approx(c0 * c1 * c2 * plain).epsilon(1e-10));
}

TEST_CASE("a zero-Hessian slot annihilates the energy") {
  const auto sp = khess::complex_space(2);
  const auto u0 = khess::make_radial(sp, coeffs({1.0}));
  const auto zero = khess::make_radial(sp, Eigen::VectorXd());
  const auto radial = khess::radial_gauss(4, 48);
  CHECK(khess::mixed_energy_complex({u0, u0, zero}, radial).value == 0.0);

  const auto constant = khess::make_quadratic(sp, Eigen::MatrixXcd::Zero(2, 2), -0.3);
  const auto grid4 = khess::grid(4, 12);
  CHECK(khess::mixed_energy_complex({u0, u0, constant}, grid4).value == 0.0);
}

TEST_CASE("grid and radial paths agree for radial inputs") {
  const auto sp = khess::complex_space(2);
  const auto u = khess::make_radial(sp, coeffs({0.8, 0.6}));
  const auto radial = khess::radial_gauss(4, 64);
  const auto grid4 = khess::grid(4, khess::default_grid_resolution(4));
  for (int k = 1; k <= 2; ++k) {
    const double a = khess::energy_Ik(u, k, radial).value;
    const double b = khess::energy_Ik(u, k, grid4).value;
    CHECK(std::abs(a - b) <= grid4.tau * std::abs(a));
  }
}

TEST_CASE("mixed lower energy layout") {
  const auto sp = khess::complex_space(3);
  const auto scheme = khess::radial_gauss(6, 64);
  const auto u = khess::make_radial(sp, coeffs({0.9, 0.3}));
  const auto v = khess::make_radial(sp, coeffs({0.5}), /*vanishing=*/false);

  // m = 0 falls back to the diagonal energy
  CHECK(khess::mixed_lower_energy(u, {}, 2, scheme).value ==
        khess::energy_Ik(u, 2, scheme).value);

  // explicit slot layout: weight u, k-m copies of u, m copies of v
  const double direct = khess::mixed_energy_complex({u, u, v, v}, scheme).value;
  const double lower = khess::mixed_lower_energy(u, {v, v}, 3, scheme).value;
  CHECK(lower == doctest::Approx(direct).epsilon(1e-14));

  // homogeneity in u of degree k - m + 1
  const double scaled =
      khess::mixed_lower_energy(khess::scale_spec(u, 2.0), {v, v}, 3, scheme).value;
  CHECK(scaled == doctest::Approx(std::pow(2.0, 2) * lower).epsilon(1e-10));

  CHECK_THROWS_AS(khess::mixed_lower_energy(u, {v, v}, 2, scheme),
                  khess::OrderRangeError);
}

TEST_CASE("positivity of the energy on admissible tuples") {
  const auto sp = khess::complex_space(2);
  const auto scheme = khess::radial_gauss(4, 64);
  for (uint64_t seed = 0; seed < 25; ++seed) {
    std::vector<khess::FunctionSpec> args;
    for (int j = 0; j < 3; ++j)
      args.push_back(
          khess::random_admissible(97 * seed + j, sp, 2, khess::Richness::Radial));
    const auto e = khess::mixed_energy_complex(args, scheme);
    CHECK(e.value >= -e.tau);
  }
}

TEST_CASE("symmetry residual behavior") {
  const auto sp = khess::complex_space(2);
  const auto scheme = khess::radial_gauss(4, 64);
  const auto u = khess::make_radial(sp, coeffs({1.0, 0.4}));
  const auto v = khess::make_radial(sp, coeffs({0.6}));
  const auto w = khess::make_radial(sp, coeffs({0.2, 0.0, 0.3}));

  CHECK(khess::symmetry_residual({u, v, w}, scheme, {0, 1, 2}) == 0.0);
  CHECK(khess::symmetry_residual({u, u, u}, scheme, {2, 0, 1}) == 0.0);

  const double swapped = khess::symmetry_residual({u, v, w}, scheme, {1, 0, 2});
  CHECK(swapped <= scheme.tau);

  const auto bad = khess::make_radial(sp, coeffs({1.0}), /*vanishing=*/false);
  CHECK_THROWS_AS(khess::symmetry_residual({u, bad, w}, scheme, {1, 0, 2}),
                  khess::PreconditionError);
  CHECK_THROWS_AS(khess::symmetry_residual({u, v, w}, scheme, {0, 0, 2}),
                  khess::InvalidInputError);
}

TEST_CASE("symmetry residual on the grid path with a perturbed argument") {
  std::mt19937_64 g(2024);
  const auto sp = khess::complex_space(2);
  const auto base = khess::make_radial(sp, coeffs({1.0, 0.5}));
  const auto pert = khess::make_perturbed(base, khess::random_bump(g, 4, 2), 0.02);
  const auto v = khess::make_radial(sp, coeffs({0.7}));
  const auto scheme = khess::grid(4, khess::default_grid_resolution(4));
  const double res = khess::symmetry_residual({pert, v, pert}, scheme, {1, 0, 2});
  CHECK(res <= scheme.tau);
}

TEST_CASE("batched evaluation matches per-request calls exactly") {
  const auto sp = khess::complex_space(2);
  const auto u = khess::make_radial(sp, coeffs({1.0, 0.4}));
  const auto v = khess::make_radial(sp, coeffs({0.6}));
  const auto w = khess::make_radial(sp, coeffs({0.2, 0.0, 0.3}));
  const std::vector<const khess::FunctionSpec*> pool{&u, &v, &w};
  const std::vector<khess::EnergyRequest> reqs{
      {0, {1, 2}},  // F[u; v, w]
      {0, {0, 0}},  // I_2[u]
      {1, {1, 1}},  // I_2[v]
      {2, {0, 1}},  // F[w; u, v]
  };

  for (const auto& scheme :
       {khess::radial_gauss(4, 64), khess::grid(4, khess::default_grid_resolution(4))}) {
    const auto batch = khess::mixed_energy_batch(pool, reqs, scheme);
    REQUIRE(batch.size() == reqs.size());
    for (size_t r = 0; r < reqs.size(); ++r) {
      std::vector<const khess::FunctionSpec*> slots;
      for (int s : reqs[r].slots) slots.push_back(pool[static_cast<size_t>(s)]);
      const auto single = khess::mixed_energy(pool[static_cast<size_t>(reqs[r].weight)],
                                              slots, scheme);
      CHECK(batch[r].value == single.value);
    }
  }

  CHECK_THROWS_AS(
      khess::mixed_energy_batch(pool, std::vector<khess::EnergyRequest>{{3, {}}},
                                khess::radial_gauss(4, 32)),
      khess::InvalidInputError);
  CHECK_THROWS_AS(
      khess::mixed_energy_batch(pool, std::vector<khess::EnergyRequest>{{0, {0, 1, 2}}},
                                khess::radial_gauss(4, 32)),
      khess::OrderRangeError);
}

TEST_CASE("scheme and space mismatches are rejected") {
  const auto csp = khess::complex_space(2);
  const auto rsp = khess::real_space(2);
  const auto u = khess::make_radial(csp, coeffs({1.0}));
  const auto r = khess::make_radial(rsp, coeffs({1.0}));
  const auto scheme = khess::radial_gauss(4, 32);

  CHECK_THROWS_AS(khess::mixed_energy_complex({u, u, u, u}, scheme),
                  khess::OrderRangeError);  // k = 3 > n = 2
  CHECK_THROWS_AS(khess::mixed_energy_complex({u, r}, scheme),
                  khess::InvalidInputError);
  CHECK_THROWS_AS(khess::energy_Ik(r, 1, scheme), khess::InvalidInputError);
  CHECK_THROWS_AS(khess::energy_Jk(u, 1, scheme), khess::InvalidInputError);

  std::mt19937_64 g(5);
  const auto pert = khess::make_perturbed(u, khess::random_bump(g, 4, 1), 0.1);
  CHECK_THROWS_AS(khess::energy_Ik(pert, 1, scheme), khess::InvalidInputError);
  const auto grid2 = khess::grid(2, 16);  // wrong dimension for n = 2 complex
  CHECK_THROWS_AS(khess::energy_Ik(u, 1, grid2), khess::InvalidInputError);

  const auto e = khess::energy_Ik(u, 1, khess::radial_gauss(4, 48));
  CHECK(e.scheme_kind == "radial_gauss");
  CHECK(e.scheme_param == 48);
  CHECK(e.tau == 1e-10);
}
