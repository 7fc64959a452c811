#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "khess/errors.hpp"
#include "khess/types.hpp"

// Normalized elementary symmetric functions S_k on vectors and matrices,
// their complete polarizations, generalized Kronecker deltas, Newton
// tensors and the algebraic cone lemmas built on top of them.
//
// Normalization: S_k(lambda) = k!(n-k)!/n! * e_k(lambda), so S_k(1,..,1) = 1
// for every k. All polarized quantities below agree with S_k on the
// diagonal under the same normalization.

namespace khess {

namespace detail {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double b = 1.0;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

inline double real_of(double x) { return x; }
inline double real_of(const Complex& x) { return x.real(); }

/// Advances c to the next k-combination of {0..n-1} in lexicographic order.
/// Returns false once the last combination has been visited.
inline bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::vector<int> first_combination(int k) {
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  return c;
}

struct Permutation {
  std::array<int8_t, 8> idx{};
  int sign = 1;
};

/// All permutations of {0..k-1} with their parities, cached per k.
inline const std::vector<Permutation>& perm_table(int k) {
  static std::array<std::vector<Permutation>, 9> tables;
  if (k < 0 || k > 8) throw CapacityError("permutation table supports k <= 8");
  auto& tab = tables[static_cast<size_t>(k)];
  if (tab.empty()) {
    std::vector<int> p(k);
    for (int i = 0; i < k; ++i) p[i] = i;
    do {
      Permutation perm;
      int inversions = 0;
      for (int a = 0; a < k; ++a) {
        perm.idx[static_cast<size_t>(a)] = static_cast<int8_t>(p[a]);
        for (int b = a + 1; b < k; ++b)
          if (p[a] > p[b]) ++inversions;
      }
      perm.sign = (inversions % 2 == 0) ? 1 : -1;
      tab.push_back(perm);
    } while (std::next_permutation(p.begin(), p.end()));
    if (tab.empty()) tab.push_back(Permutation{});  // k == 0
  }
  return tab;
}

}  // namespace detail

/// Normalized k-th elementary symmetric function of a real vector.
/// S_0 = 1 by convention; throws OrderRangeError for k outside [0, n].
template <typename Derived>
double s_k(const Eigen::MatrixBase<Derived>& lambda, int k) {
  static_assert(std::is_floating_point_v<typename Derived::Scalar>);
  const int n = static_cast<int>(lambda.size());
  if (k < 0 || k > n)
    throw OrderRangeError("s_k: order k must lie in [0, n]");
  if (k == 0) return 1.0;
  // e_j coefficients of prod (1 + lambda_i x), truncated at degree k.
  std::vector<double> e(static_cast<size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    const double li = lambda[i];
    for (int j = std::min(k, i + 1); j >= 1; --j)
      e[static_cast<size_t>(j)] += li * e[static_cast<size_t>(j) - 1];
  }
  return e[static_cast<size_t>(k)] / detail::binomial(n, k);
}

/// All of S_0(lambda) .. S_j(lambda) for j = min(k_max, n), in one pass.
template <typename Derived>
Eigen::VectorXd s_all(const Eigen::MatrixBase<Derived>& lambda, int k_max) {
  const int n = static_cast<int>(lambda.size());
  const int k = std::min(k_max, n);
  if (k < 0) throw OrderRangeError("s_all: negative order");
  std::vector<double> e(static_cast<size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    const double li = lambda[i];
    for (int j = std::min(k, i + 1); j >= 1; --j)
      e[static_cast<size_t>(j)] += li * e[static_cast<size_t>(j) - 1];
  }
  Eigen::VectorXd s(k + 1);
  for (int j = 0; j <= k; ++j)
    s[j] = e[static_cast<size_t>(j)] / detail::binomial(n, j);
  return s;
}

/// S_k of a Hermitian or real symmetric matrix, computed as the sum of all
/// k-by-k principal minors divided by C(n, k). Eigenvalue-free, hence exact
/// for polynomial entries up to roundoff; agrees with s_k of the spectrum.
template <typename Derived>
double s_k_matrix(const Eigen::MatrixBase<Derived>& a, int k) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat A = a;
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw InvalidInputError("s_k_matrix: matrix not square");
  if (!A.allFinite()) throw InvalidInputError("s_k_matrix: non-finite entries");
  if (k < 0 || k > n)
    throw OrderRangeError("s_k_matrix: order k must lie in [0, n]");
  if (k == 0) return 1.0;
  if (k == n) return detail::real_of(Scalar(A.determinant()));
  double acc = 0.0;
  auto comb = detail::first_combination(k);
  Mat sub(k, k);
  do {
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) sub(r, c) = A(comb[static_cast<size_t>(r)], comb[static_cast<size_t>(c)]);
    acc += detail::real_of(Scalar(sub.determinant()));
  } while (detail::next_combination(comb, n));
  return acc / detail::binomial(n, k);
}

/// Cross-check route for s_k_matrix through the eigenvalue decomposition.
template <typename Derived>
double s_k_matrix_eig(const Eigen::MatrixBase<Derived>& a, int k) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat A = a;
  Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
  return s_k(es.eigenvalues(), k);
}

namespace detail {

// Complete polarization by the subset inclusion-exclusion identity:
//   P~(A_1..A_k) = (1/k!) sum_{T subset of {1..k}} (-1)^{k-|T|} P(sum_{i in T} A_i).
// The unique symmetric multilinear form agreeing with P on the diagonal.
template <typename Arg, typename Eval>
double polarize_subsets(std::span<const Arg> args, Eval&& p_of) {
  const int k = static_cast<int>(args.size());
  double acc = 0.0;
  for (uint32_t mask = 1; mask < (1u << k); ++mask) {
    Arg sum = args[0] * 0.0;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) sum += args[static_cast<size_t>(i)];
    const int sign = ((k - std::popcount(mask)) % 2 == 0) ? 1 : -1;
    acc += sign * p_of(sum);
  }
  return acc / factorial(k);
}

template <typename Scalar>
double polarized_matrix_impl(
    std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> args) {
  const int k = static_cast<int>(args.size());
  if (k == 0) throw OrderRangeError("polarized_s_k: needs at least one argument");
  const int n = static_cast<int>(args[0].rows());
  for (const auto& m : args)
    if (m.rows() != n || m.cols() != n)
      throw InvalidInputError("polarized_s_k: mismatched matrix dimensions");
  if (k > n) throw OrderRangeError("polarized_s_k: k exceeds dimension n");
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return polarize_subsets<Mat>(args, [k](const Mat& m) { return s_k_matrix(m, k); });
}

}  // namespace detail

/// Complete polarization S~_k(A_1,..,A_k) of S_k over k Hermitian matrices.
/// Symmetric, multilinear, and equal to S_k(A) when all arguments coincide.
inline double polarized_s_k(std::span<const Eigen::MatrixXcd> args) {
  return detail::polarized_matrix_impl<Complex>(args);
}

/// Real symmetric overload.
inline double polarized_s_k(std::span<const Eigen::MatrixXd> args) {
  return detail::polarized_matrix_impl<double>(args);
}

/// Vector overload: polarization of S_k on R^n, i.e. of diagonal matrices.
inline double polarized_s_k(std::span<const Eigen::VectorXd> spectra) {
  const int k = static_cast<int>(spectra.size());
  if (k == 0) throw OrderRangeError("polarized_s_k: needs at least one argument");
  const int n = static_cast<int>(spectra[0].size());
  for (const auto& v : spectra)
    if (v.size() != n) throw InvalidInputError("polarized_s_k: mismatched vector sizes");
  if (k > n) throw OrderRangeError("polarized_s_k: k exceeds dimension n");
  return detail::polarize_subsets<Eigen::VectorXd>(
      spectra, [k](const Eigen::VectorXd& v) { return s_k(v, k); });
}

/// S~_k with argument a repeated ma times and b repeated mb times,
/// evaluated through the same subset formula (k = ma + mb).
inline double polarized_s_k_repeated(const Eigen::VectorXd& a, int ma,
                                     const Eigen::VectorXd& b, int mb) {
  std::vector<Eigen::VectorXd> args;
  args.reserve(static_cast<size_t>(ma + mb));
  for (int i = 0; i < ma; ++i) args.push_back(a);
  for (int i = 0; i < mb; ++i) args.push_back(b);
  return polarized_s_k(std::span<const Eigen::VectorXd>(args));
}

/// Generalized Kronecker delta d^{upper}_{lower}: 0 when either multi-index
/// repeats an entry or lower fails to be a permutation of upper, otherwise
/// the sign of the permutation taking upper to lower.
inline int generalized_kronecker_delta(std::span<const int> upper,
                                       std::span<const int> lower) {
  const int k = static_cast<int>(upper.size());
  if (static_cast<int>(lower.size()) != k)
    throw InvalidInputError("generalized_kronecker_delta: length mismatch");
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (upper[static_cast<size_t>(a)] == upper[static_cast<size_t>(b)]) return 0;
  std::array<bool, 16> used{};
  std::array<int, 16> perm{};
  if (k > 16) throw CapacityError("generalized_kronecker_delta: k > 16");
  for (int a = 0; a < k; ++a) {
    int pos = -1;
    for (int b = 0; b < k; ++b) {
      if (!used[static_cast<size_t>(b)] &&
          lower[static_cast<size_t>(b)] == upper[static_cast<size_t>(a)]) {
        pos = b;
        break;
      }
    }
    if (pos < 0) return 0;
    used[static_cast<size_t>(pos)] = true;
    perm[static_cast<size_t>(a)] = pos;
  }
  int inversions = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (perm[static_cast<size_t>(a)] > perm[static_cast<size_t>(b)]) ++inversions;
  return (inversions % 2 == 0) ? 1 : -1;
}

namespace detail {

// Delta-weighted polarization sum
//   (1/k!) sum delta^{i_1..i_k}_{j_1..j_k} A^(1)_{i_1 j_1} .. A^(k)_{i_k j_k},
// enumerated over the tuples where the delta is nonzero: distinct upper
// indices and lower tuples that permute them. Returns the raw (possibly
// complex) accumulator before symmetric-function normalization.
template <typename Scalar>
Scalar polarized_kronecker_raw(
    std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> args) {
  const int k = static_cast<int>(args.size());
  const int n = static_cast<int>(args[0].rows());
  const auto& perms = perm_table(k);
  Scalar acc = Scalar(0);
  auto comb = first_combination(k);
  do {
    for (const auto& pa : perms) {
      for (const auto& pb : perms) {
        Scalar term = Scalar(pa.sign * pb.sign);
        for (int m = 0; m < k; ++m)
          term *= args[static_cast<size_t>(m)](
              comb[static_cast<size_t>(pa.idx[static_cast<size_t>(m)])],
              comb[static_cast<size_t>(pb.idx[static_cast<size_t>(m)])]);
        acc += term;
      }
    }
  } while (next_combination(comb, n));
  return acc / Scalar(factorial(k));
}

template <typename Scalar>
double polarized_kronecker_impl(
    std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> args) {
  const int k = static_cast<int>(args.size());
  if (k == 0) throw OrderRangeError("polarized_s_k_kronecker: needs arguments");
  const int n = static_cast<int>(args[0].rows());
  if (n > 6)
    throw CapacityError("polarized_s_k_kronecker: restricted to n <= 6");
  for (const auto& m : args)
    if (m.rows() != n || m.cols() != n)
      throw InvalidInputError("polarized_s_k_kronecker: dimension mismatch");
  if (k > n) throw OrderRangeError("polarized_s_k_kronecker: k exceeds n");
  const Scalar raw = polarized_kronecker_raw<Scalar>(args);
  // The delta sum polarizes the plain e_k; rescale to the normalized S_k.
  return real_of(raw) / binomial(n, k);
}

}  // namespace detail

/// Polarized S_k through the generalized Kronecker delta sum. Cross-check
/// route for polarized_s_k; size-guarded to n <= 6.
inline double polarized_s_k_kronecker(std::span<const Eigen::MatrixXd> args) {
  return detail::polarized_kronecker_impl<double>(args);
}

inline double polarized_s_k_kronecker(std::span<const Eigen::MatrixXcd> args) {
  return detail::polarized_kronecker_impl<Complex>(args);
}

/// Newton tensor entry S~^{ij}_{k-1}(A_1..A_{k-1}): the derivative of the
/// polarized S~_k with respect to entry (i, j) of a k-th matrix slot.
/// Satisfies sum_{ij} B_ij S~^{ij}_{k-1} = S~_k(A_1..A_{k-1}, B).
inline double newton_tensor_entry(std::span<const Eigen::MatrixXd> args, int n,
                                  int i, int j) {
  const int k = static_cast<int>(args.size()) + 1;
  if (n > 6) throw CapacityError("newton_tensor: restricted to n <= 6");
  if (k > n) throw OrderRangeError("newton_tensor: k exceeds n");
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw InvalidInputError("newton_tensor: index out of range");
  for (const auto& m : args)
    if (m.rows() != n || m.cols() != n)
      throw InvalidInputError("newton_tensor: dimension mismatch");
  if (k == 1) return (i == j) ? 1.0 / n : 0.0;

  const auto& perms = detail::perm_table(k - 1);
  // Upper prefix runs over (k-1)-subsets avoiding i; the lower prefix must
  // permute (S u {i}) \ {j}, so j has to belong to S u {i}.
  std::vector<int> pool;
  pool.reserve(static_cast<size_t>(n - 1));
  for (int v = 0; v < n; ++v)
    if (v != i) pool.push_back(v);
  double acc = 0.0;
  std::vector<int> upper(static_cast<size_t>(k)), lower(static_cast<size_t>(k));
  upper[static_cast<size_t>(k - 1)] = i;
  lower[static_cast<size_t>(k - 1)] = j;
  if (k - 1 > static_cast<int>(pool.size())) return 0.0;
  auto comb = detail::first_combination(k - 1);
  do {
    bool contains_j = (j == i);
    std::vector<int> subset(static_cast<size_t>(k - 1));
    for (int m = 0; m < k - 1; ++m) {
      subset[static_cast<size_t>(m)] = pool[static_cast<size_t>(comb[static_cast<size_t>(m)])];
      if (subset[static_cast<size_t>(m)] == j) contains_j = true;
    }
    if (!contains_j) continue;
    std::vector<int> lower_set;
    lower_set.reserve(static_cast<size_t>(k - 1));
    for (int v : subset)
      if (v != j) lower_set.push_back(v);
    if (j != i) lower_set.push_back(i);
    std::sort(lower_set.begin(), lower_set.end());
    for (const auto& pa : perms) {
      for (int m = 0; m < k - 1; ++m)
        upper[static_cast<size_t>(m)] = subset[static_cast<size_t>(pa.idx[static_cast<size_t>(m)])];
      for (const auto& pb : perms) {
        for (int m = 0; m < k - 1; ++m)
          lower[static_cast<size_t>(m)] = lower_set[static_cast<size_t>(pb.idx[static_cast<size_t>(m)])];
        const int delta = generalized_kronecker_delta(upper, lower);
        if (delta == 0) continue;
        double term = delta;
        for (int m = 0; m < k - 1; ++m)
          term *= args[static_cast<size_t>(m)](upper[static_cast<size_t>(m)],
                                               lower[static_cast<size_t>(m)]);
        acc += term;
      }
    }
  } while (detail::next_combination(comb, n - 1));
  // 1/k! from the delta sum times the k!(n-k)!/n! normalization.
  return acc * detail::factorial(n - k) / detail::factorial(n);
}

/// Full Newton tensor matrix (all entries i, j).
inline Eigen::MatrixXd newton_tensor(std::span<const Eigen::MatrixXd> args, int n) {
  Eigen::MatrixXd t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = newton_tensor_entry(args, n, i, j);
  return t;
}

/// Closed-cone membership: mu in Gamma_k iff S_j(mu) >= 0 for j = 1..k.
inline bool in_garding_cone(const Eigen::VectorXd& mu, int k) {
  const Eigen::VectorXd s = s_all(mu, k);
  for (int j = 1; j < s.size(); ++j)
    if (s[j] < 0.0) return false;
  return true;
}

/// Membership plus slack: the largest eps with mu - eps*(1,..,1) in Gamma_k,
/// found by bisection (membership is monotone in eps) to 1e-12 absolute.
inline ConeSlack cone_check(const Eigen::VectorXd& mu, int k) {
  const int n = static_cast<int>(mu.size());
  if (k < 1 || k > n) throw OrderRangeError("cone_check: order k must lie in [1, n]");
  if (!mu.allFinite()) throw InvalidInputError("cone_check: non-finite entries");
  ConeSlack result{k, in_garding_cone(mu, k), 0.0};
  if (!result.member) return result;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  double hi = mu.maxCoeff();
  if (hi <= 0.0) return result;  // only mu = 0 reaches here within the cone
  if (in_garding_cone(mu - hi * ones, k)) {
    result.slack = hi;
    return result;
  }
  double lo = 0.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (in_garding_cone(mu - mid * ones, k))
      lo = mid;
    else
      hi = mid;
  }
  result.slack = lo;
  return result;
}

/// x -> sign(x) * |x|^(1/p); keeps tiny negative inputs tiny and negative.
inline double signed_root(double x, int p) {
  if (p == 1) return x;
  return std::copysign(std::pow(std::abs(x), 1.0 / p), x);
}

/// p-th root with negative inputs treated as zero. Used on quantities that
/// are nonnegative in exact arithmetic but may carry quadrature noise.
inline double clamped_root(double x, int p) {
  if (x <= 0.0) return 0.0;
  return p == 1 ? x : std::pow(x, 1.0 / p);
}

struct LemmaMkResult {
  double bound_constant = 0.0;
  bool holds = false;
  double margin = 0.0;  // C * S~_k(lambda^m, mu^(k-m)) - S_m(lambda)
};

/// Cone-slack bound S_m(lambda) <= eps^-(k-m) S~_k(lambda,..,lambda,mu,..,mu)
/// with lambda repeated m times and mu repeated k-m times; eps is the cone
/// slack of mu. Requires an interior mu (slack > 0).
inline LemmaMkResult lemma_mk_check(const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& mu, int m, int k,
                                    double tol = 1e-10) {
  const int n = static_cast<int>(lambda.size());
  if (mu.size() != n) throw InvalidInputError("lemma_mk_check: size mismatch");
  if (m < 0 || m >= k || k > n)
    throw OrderRangeError("lemma_mk_check: need 0 <= m < k <= n");
  if (!in_garding_cone(lambda, k) || !in_garding_cone(mu, k))
    throw PreconditionError("lemma_mk_check: arguments must lie in Gamma_k");
  const ConeSlack cs = cone_check(mu, k);
  if (cs.slack <= 0.0)
    throw DegenerateMuError("lemma_mk_check: mu has zero cone slack");
  LemmaMkResult r;
  r.bound_constant = std::pow(cs.slack, -(k - m));
  const double lhs = s_k(lambda, m);
  const double rhs = r.bound_constant * polarized_s_k_repeated(lambda, m, mu, k - m);
  r.margin = rhs - lhs;
  r.holds = r.margin >= -tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return r;
}

/// Superadditivity margin of the hyperbolic-polynomial root
///   x -> S~_k(lambda^m, x^(k-m))^(1/(k-m))
/// at (a, b): f(a+b) - f(a) - f(b). Nonnegative on Gamma_k.
inline double garding_superadditivity_margin(const Eigen::VectorXd& lambda,
                                             const Eigen::VectorXd& a,
                                             const Eigen::VectorXd& b, int m,
                                             int k) {
  const int n = static_cast<int>(lambda.size());
  if (a.size() != n || b.size() != n)
    throw InvalidInputError("garding_superadditivity: size mismatch");
  if (m < 0 || m >= k || k > n)
    throw OrderRangeError("garding_superadditivity: need 0 <= m < k <= n");
  if (!in_garding_cone(lambda, k) || !in_garding_cone(a, k) || !in_garding_cone(b, k))
    throw PreconditionError(
        "garding_superadditivity: arguments must lie in Gamma_k");
  const int p = k - m;
  auto f = [&](const Eigen::VectorXd& x) {
    return clamped_root(polarized_s_k_repeated(lambda, m, x, p), p);
  };
  return f(a + b) - f(a) - f(b);
}

struct AlgebraicLemmaMargins {
  double hoelder = 0.0;    // prod_j f(x_j,..,x_j)^(1/k) - f(x_1,..,x_k)
  double minkowski = 0.0;  // f(x..)^(1/k) + f(y..)^(1/k) - f(x+y,..)^(1/k)
};

/// Checks the two conclusions of the algebraic lemma for a non-negative
/// symmetric k-ary function f that satisfies the two-slot Cauchy-Schwarz
/// hypothesis. f is a black box evaluated on argument vectors; X must
/// support addition. Throws HypothesisViolationError if f dips below
/// -hypothesis_tol anywhere it is evaluated.
template <typename X, typename F>
AlgebraicLemmaMargins algebraic_lemma_check(F&& f, std::span<const X> points,
                                            const X& x, const X& y,
                                            double hypothesis_tol = 1e-12) {
  const int k = static_cast<int>(points.size());
  if (k < 1) throw OrderRangeError("algebraic_lemma_check: k >= 1 required");
  auto eval = [&](const std::vector<X>& args) {
    const double v = f(args);
    if (v < -hypothesis_tol)
      throw HypothesisViolationError(
          "algebraic_lemma_check: functional returned a negative value");
    return v;
  };
  auto diagonal = [&](const X& p) {
    std::vector<X> args(static_cast<size_t>(k), p);
    return eval(args);
  };
  AlgebraicLemmaMargins out;
  double prod = 1.0;
  for (const X& p : points) prod *= clamped_root(diagonal(p), k);
  out.hoelder = prod - eval(std::vector<X>(points.begin(), points.end()));
  out.minkowski = clamped_root(diagonal(x), k) + clamped_root(diagonal(y), k) -
                  clamped_root(diagonal(x + y), k);
  return out;
}

}  // namespace khess
