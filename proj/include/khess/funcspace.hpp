#pragma once

#include <memory>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "khess/errors.hpp"
#include "khess/quadrature.hpp"
#include "khess/types.hpp"

// Globally smooth test functions on the unit ball of C^n or R^n, with
// analytic Hessians, cone-membership and boundary-vanishing checks, and
// seeded random generators of admissible samples.
//
// Complex points are stored as stacked real coordinates
// (x_1..x_n, y_1..y_n) with z_j = p[j] + i p[n+j]; t denotes |z|^2 or
// |x|^2 throughout.

namespace khess {

// ---------------------------------------------------------------------------
// Polynomials in d real variables, kept as explicit monomial lists. Backbone
// of the perturbation machinery: derivatives stay exact and cheap.

struct Monomial {
  double coef = 0.0;
  std::vector<int> expo;  // one exponent per variable
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int dim) : dim_(dim) {}

  static Polynomial constant(int dim, double c);
  static Polynomial variable(int dim, int i);
  /// |x|^2 - 1 in d variables.
  static Polynomial radius_sq_minus_one(int dim);

  void add_term(double coef, std::vector<int> expo);
  /// Merges duplicate exponent patterns and drops zero terms.
  void compress();

  double eval(const Eigen::VectorXd& x) const;
  Polynomial derivative(int var) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial& operator+=(const Polynomial& o);

  int dim() const { return dim_; }
  int degree() const;
  const std::vector<Monomial>& terms() const { return terms_; }

 private:
  int dim_ = 0;
  std::vector<Monomial> terms_;
};

// ---------------------------------------------------------------------------
// Radial profiles phi(t), polynomial in t = r^2.

struct RadialProfile {
  Eigen::VectorXd coeffs;  // phi(t) = sum_m coeffs[m] t^m, m from 0

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
};

// ---------------------------------------------------------------------------
// FunctionSpec variants.

/// phi(t) = sum_{m>=1} b_m (t^m - 1) when vanishing (zero on the unit
/// sphere), else sum_{m>=1} b_m t^m. Nonnegative coefficients give a
/// convex/psh function, hence k-admissible for every k.
struct RadialPoly {
  Eigen::VectorXd coeffs;  // b_1..b_M
  bool vanishing = true;
};

/// Complex space: u(z) = sum_jk Q_jk z_j conj(z_k) + shift, Hermitian Q,
/// complex Hessian exactly Q. Real space: u(x) = x^T Q x / 2 + shift,
/// symmetric real Q, Hessian exactly Q.
struct QuadraticForm {
  Eigen::MatrixXcd q;
  double shift = 0.0;
};

struct FunctionSpec;

namespace detail {
struct PerturbCache;  // precomputed second partials of the bump term
}

/// u = base + amplitude * p(x) * (t - 1). The (t - 1) factor keeps the
/// boundary values of the base intact.
struct Perturbed {
  std::shared_ptr<const FunctionSpec> base;
  Polynomial bump;
  double amplitude = 0.0;
  std::shared_ptr<const detail::PerturbCache> cache;
};

/// Nonnegative weights; admissibility and boundary vanishing are preserved
/// under such combinations.
struct LinearCombination {
  std::vector<double> weights;
  std::vector<std::shared_ptr<const FunctionSpec>> parts;
};

struct FunctionSpec {
  Space space;
  std::variant<RadialPoly, QuadraticForm, Perturbed, LinearCombination> variant;
};

// ---------------------------------------------------------------------------
// Construction. Factories validate and normalize (Hermitize Q, build
// perturbation caches) so evaluation never re-checks.

FunctionSpec make_radial(const Space& space, const Eigen::VectorXd& coeffs,
                         bool vanishing = true);
FunctionSpec make_quadratic(const Space& space, const Eigen::MatrixXcd& q,
                            double shift = 0.0);
FunctionSpec make_perturbed(const FunctionSpec& base, const Polynomial& bump,
                            double amplitude);
FunctionSpec make_combination(const std::vector<double>& weights,
                              const std::vector<FunctionSpec>& parts);

/// c * u for c >= 0, as a one-part combination.
FunctionSpec scale_spec(const FunctionSpec& u, double c);
/// u + v (unit weights).
FunctionSpec add_specs(const FunctionSpec& u, const FunctionSpec& v);

// ---------------------------------------------------------------------------
// Evaluation.

double eval(const FunctionSpec& u, const Eigen::VectorXd& point);

/// Analytic complex Hessian (d^2 u / dz_j dconj(z_k)); exactly Hermitian.
Eigen::MatrixXcd complex_hessian(const FunctionSpec& u,
                                 const Eigen::VectorXd& point);

/// Analytic real Hessian; exactly symmetric.
Eigen::MatrixXd real_hessian(const FunctionSpec& u,
                             const Eigen::VectorXd& point);

/// Central-difference cross-checks of the analytic routes (O(h^2)).
Eigen::MatrixXcd fd_complex_hessian(const FunctionSpec& u,
                                    const Eigen::VectorXd& point,
                                    double h = 1e-4);
Eigen::MatrixXd fd_real_hessian(const FunctionSpec& u,
                                const Eigen::VectorXd& point, double h = 1e-4);

// ---------------------------------------------------------------------------
// Radial structure.

bool is_radial(const FunctionSpec& u);

/// Profile phi with u = phi(t); throws PreconditionError when not radial.
RadialProfile radial_profile(const FunctionSpec& u);

/// Hessian spectrum of a radial function at radius-squared t, tangential
/// eigenvalues first, radial eigenvalue last. Complex space:
/// (phi', .., phi', phi' + t phi''); real space: (2phi', .., 2phi' + 4t phi'').
Eigen::VectorXd radial_spectrum(const FunctionSpec& u, double t);
Eigen::VectorXd radial_spectrum(const RadialProfile& profile,
                                const Space& space, double t);

// ---------------------------------------------------------------------------
// Admissibility.

/// Scans the sampler's nodes; min_slack is the least normalized S_j of the
/// Hessian spectrum over nodes and 1 <= j <= k. Requires a grid sampler for
/// non-radial specs.
MembershipReport check_membership(const FunctionSpec& u, int k,
                                  const QuadratureScheme& sampler,
                                  double tol = 1e-9);

/// Samples the unit sphere (axes, corners and seeded random directions,
/// >= 1000 points) and checks |u| <= tol everywhere.
bool check_boundary_vanishing(const FunctionSpec& u, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Seeded generators. Identical seeds yield identical specs.

enum class Richness { Radial, Perturbed };

/// Member of P0_k: vanishes on the sphere, Hessian spectrum in Gamma_k on
/// the closed ball. Radial draws nonnegative coefficients; perturbed adds a
/// random bump with amplitude backtracking until membership passes, falling
/// back to the radial base if the amplitude collapses below 1e-6.
FunctionSpec random_admissible(uint64_t seed, const Space& space, int k,
                               Richness richness);

/// Member of P_k without the boundary constraint (radial, nonvanishing).
FunctionSpec random_cone_function(uint64_t seed, const Space& space, int k);

/// Random polynomial with N(0,1) coefficients, full monomial basis up to
/// max_degree.
Polynomial random_bump(std::mt19937_64& rng, int dim, int max_degree);

/// Grid sampler used for membership checks, sized by dimension.
QuadratureScheme membership_sampler(int real_dim);

}  // namespace khess
