#include "khess/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "khess/symfun.hpp"

namespace khess {

// --- Polynomial -------------------------------------------------------------

Polynomial Polynomial::constant(int dim, double c) {
  Polynomial p(dim);
  if (c != 0.0) p.terms_.push_back({c, std::vector<int>(static_cast<size_t>(dim), 0)});
  return p;
}

Polynomial Polynomial::variable(int dim, int i) {
  if (i < 0 || i >= dim)
    throw InvalidInputError("Polynomial::variable: index out of range");
  Polynomial p(dim);
  std::vector<int> e(static_cast<size_t>(dim), 0);
  e[static_cast<size_t>(i)] = 1;
  p.terms_.push_back({1.0, std::move(e)});
  return p;
}

Polynomial Polynomial::radius_sq_minus_one(int dim) {
  Polynomial p(dim);
  for (int i = 0; i < dim; ++i) {
    std::vector<int> e(static_cast<size_t>(dim), 0);
    e[static_cast<size_t>(i)] = 2;
    p.terms_.push_back({1.0, std::move(e)});
  }
  p.terms_.push_back({-1.0, std::vector<int>(static_cast<size_t>(dim), 0)});
  return p;
}

void Polynomial::add_term(double coef, std::vector<int> expo) {
  if (static_cast<int>(expo.size()) != dim_)
    throw InvalidInputError("Polynomial::add_term: exponent size mismatch");
  for (int e : expo)
    if (e < 0) throw InvalidInputError("Polynomial::add_term: negative exponent");
  if (!std::isfinite(coef))
    throw InvalidInputError("Polynomial::add_term: non-finite coefficient");
  terms_.push_back({coef, std::move(expo)});
}

void Polynomial::compress() {
  std::map<std::vector<int>, double> acc;
  for (const auto& t : terms_) acc[t.expo] += t.coef;
  terms_.clear();
  for (auto& [e, c] : acc)
    if (c != 0.0) terms_.push_back({c, e});
}

double Polynomial::eval(const Eigen::VectorXd& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw InvalidInputError("Polynomial::eval: point dimension mismatch");
  double acc = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef;
    for (int i = 0; i < dim_; ++i)
      for (int e = 0; e < t.expo[static_cast<size_t>(i)]; ++e) v *= x[i];
    acc += v;
  }
  return acc;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= dim_)
    throw InvalidInputError("Polynomial::derivative: variable out of range");
  Polynomial out(dim_);
  for (const auto& t : terms_) {
    const int e = t.expo[static_cast<size_t>(var)];
    if (e == 0) continue;
    Monomial m = t;
    m.coef *= e;
    m.expo[static_cast<size_t>(var)] = e - 1;
    out.terms_.push_back(std::move(m));
  }
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.dim_ != dim_) throw InvalidInputError("Polynomial: dimension mismatch");
  Polynomial out(dim_);
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      Monomial m;
      m.coef = a.coef * b.coef;
      m.expo.resize(static_cast<size_t>(dim_));
      for (int i = 0; i < dim_; ++i)
        m.expo[static_cast<size_t>(i)] =
            a.expo[static_cast<size_t>(i)] + b.expo[static_cast<size_t>(i)];
      out.terms_.push_back(std::move(m));
    }
  }
  out.compress();
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.dim_ != dim_) throw InvalidInputError("Polynomial: dimension mismatch");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  compress();
  return *this;
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& t : terms_) {
    int d = 0;
    for (int e : t.expo) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

// --- RadialProfile ----------------------------------------------------------

double RadialProfile::value(double t) const {
  double acc = 0.0;
  for (int m = static_cast<int>(coeffs.size()) - 1; m >= 0; --m)
    acc = acc * t + coeffs[m];
  return acc;
}

double RadialProfile::d1(double t) const {
  double acc = 0.0;
  for (int m = static_cast<int>(coeffs.size()) - 1; m >= 1; --m)
    acc = acc * t + m * coeffs[m];
  return acc;
}

double RadialProfile::d2(double t) const {
  double acc = 0.0;
  for (int m = static_cast<int>(coeffs.size()) - 1; m >= 2; --m)
    acc = acc * t + m * (m - 1) * coeffs[m];
  return acc;
}

// --- caches and helpers -----------------------------------------------------

namespace detail {

struct PerturbCache {
  Polynomial full;               // bump * (|x|^2 - 1)
  std::vector<Polynomial> hess;  // row-major d*d second partials of full
};

}  // namespace detail

namespace {

std::shared_ptr<const detail::PerturbCache> build_perturb_cache(
    const Polynomial& bump, int d) {
  auto cache = std::make_shared<detail::PerturbCache>();
  cache->full = bump * Polynomial::radius_sq_minus_one(d);
  std::vector<Polynomial> grad;
  grad.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) grad.push_back(cache->full.derivative(i));
  cache->hess.resize(static_cast<size_t>(d) * static_cast<size_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      Polynomial h = grad[static_cast<size_t>(i)].derivative(j);
      cache->hess[static_cast<size_t>(i) * d + j] = h;
      cache->hess[static_cast<size_t>(j) * d + i] = std::move(h);
    }
  return cache;
}

void check_point(const FunctionSpec& u, const Eigen::VectorXd& p) {
  if (static_cast<int>(p.size()) != u.space.real_dim())
    throw InvalidInputError("point dimension does not match the spec's space");
}

RadialProfile profile_of(const RadialPoly& r) {
  const int m_max = static_cast<int>(r.coeffs.size());
  RadialProfile prof;
  prof.coeffs = Eigen::VectorXd::Zero(m_max + 1);
  double c0 = 0.0;
  for (int m = 0; m < m_max; ++m) {
    prof.coeffs[m + 1] = r.coeffs[m];
    if (r.vanishing) c0 -= r.coeffs[m];
  }
  prof.coeffs[0] = c0;
  return prof;
}

Eigen::VectorXcd to_complex_point(const Eigen::VectorXd& p, int n) {
  Eigen::VectorXcd z(n);
  for (int j = 0; j < n; ++j) z[j] = Complex(p[j], p[n + j]);
  return z;
}

// Complex Hessian assembled from the full real Hessian over the stacked
// coordinates: H_jk = ((u_xx + u_yy) + i (u_xy - u_yx)) / 4.
Eigen::MatrixXcd fold_complex(const Eigen::MatrixXd& h, int n) {
  Eigen::MatrixXcd out(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      out(j, k) = 0.25 * Complex(h(j, k) + h(n + j, n + k),
                                 h(j, n + k) - h(n + j, k));
  return out;
}

Eigen::MatrixXd perturb_hessian_full(const Perturbed& pert,
                                     const Eigen::VectorXd& p) {
  const int d = static_cast<int>(p.size());
  Eigen::MatrixXd h(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const double v = pert.cache->hess[static_cast<size_t>(i) * d + j].eval(p);
      h(i, j) = v;
      h(j, i) = v;
    }
  return h;
}

}  // namespace

// --- factories ----------------------------------------------------------------

FunctionSpec make_radial(const Space& space, const Eigen::VectorXd& coeffs,
                         bool vanishing) {
  if (!coeffs.allFinite())
    throw InvalidInputError("make_radial: non-finite coefficients");
  return FunctionSpec{space, RadialPoly{coeffs, vanishing}};
}

FunctionSpec make_quadratic(const Space& space, const Eigen::MatrixXcd& q,
                            double shift) {
  if (q.rows() != space.n || q.cols() != space.n)
    throw InvalidInputError("make_quadratic: matrix size does not match n");
  if (!q.allFinite() || !std::isfinite(shift))
    throw InvalidInputError("make_quadratic: non-finite input");
  QuadraticForm qf;
  if (space.kind == SpaceKind::Real) {
    if (q.imag().cwiseAbs().maxCoeff() != 0.0)
      throw InvalidInputError("make_quadratic: complex entries in real space");
    const Eigen::MatrixXd sym = 0.5 * (q.real() + q.real().transpose());
    qf.q = sym.cast<Complex>();
  } else {
    qf.q = 0.5 * (q + q.adjoint());
  }
  qf.shift = shift;
  return FunctionSpec{space, std::move(qf)};
}

FunctionSpec make_perturbed(const FunctionSpec& base, const Polynomial& bump,
                            double amplitude) {
  const int d = base.space.real_dim();
  if (bump.dim() != d)
    throw InvalidInputError("make_perturbed: bump dimension mismatch");
  if (!std::isfinite(amplitude))
    throw InvalidInputError("make_perturbed: non-finite amplitude");
  Perturbed pert;
  pert.base = std::make_shared<const FunctionSpec>(base);
  pert.bump = bump;
  pert.amplitude = amplitude;
  pert.cache = build_perturb_cache(bump, d);
  return FunctionSpec{base.space, std::move(pert)};
}

FunctionSpec make_combination(const std::vector<double>& weights,
                              const std::vector<FunctionSpec>& parts) {
  if (weights.empty() || weights.size() != parts.size())
    throw InvalidInputError("make_combination: weights/parts size mismatch");
  LinearCombination lc;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
      throw InvalidInputError("make_combination: weights must be >= 0");
    if (!(parts[i].space == parts[0].space))
      throw InvalidInputError("make_combination: mixed spaces");
    lc.weights.push_back(weights[i]);
    lc.parts.push_back(std::make_shared<const FunctionSpec>(parts[i]));
  }
  return FunctionSpec{parts[0].space, std::move(lc)};
}

FunctionSpec scale_spec(const FunctionSpec& u, double c) {
  return make_combination({c}, {u});
}

FunctionSpec add_specs(const FunctionSpec& u, const FunctionSpec& v) {
  return make_combination({1.0, 1.0}, {u, v});
}

// --- evaluation ---------------------------------------------------------------

double eval(const FunctionSpec& u, const Eigen::VectorXd& point) {
  check_point(u, point);
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RadialPoly>) {
          return profile_of(v).value(point.squaredNorm());
        } else if constexpr (std::is_same_v<T, QuadraticForm>) {
          if (u.space.kind == SpaceKind::Complex) {
            const Eigen::VectorXcd z = to_complex_point(point, u.space.n);
            const Complex val = (z.transpose() * v.q * z.conjugate()).value();
            return val.real() + v.shift;
          }
          return 0.5 * point.dot(v.q.real() * point) + v.shift;
        } else if constexpr (std::is_same_v<T, Perturbed>) {
          return eval(*v.base, point) + v.amplitude * v.cache->full.eval(point);
        } else {
          double acc = 0.0;
          for (size_t i = 0; i < v.parts.size(); ++i)
            acc += v.weights[i] * eval(*v.parts[i], point);
          return acc;
        }
      },
      u.variant);
}

Eigen::MatrixXcd complex_hessian(const FunctionSpec& u,
                                 const Eigen::VectorXd& point) {
  check_point(u, point);
  if (u.space.kind != SpaceKind::Complex)
    throw PreconditionError("complex_hessian: spec lives in real space");
  const int n = u.space.n;
  Eigen::MatrixXcd h = std::visit(
      [&](const auto& v) -> Eigen::MatrixXcd {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RadialPoly>) {
          const RadialProfile prof = profile_of(v);
          const double t = point.squaredNorm();
          const Eigen::VectorXcd z = to_complex_point(point, n);
          Eigen::MatrixXcd m = prof.d2(t) * (z.conjugate() * z.transpose());
          m.diagonal().array() += prof.d1(t);
          return m;
        } else if constexpr (std::is_same_v<T, QuadraticForm>) {
          return v.q;
        } else if constexpr (std::is_same_v<T, Perturbed>) {
          return complex_hessian(*v.base, point) +
                 v.amplitude * fold_complex(perturb_hessian_full(v, point), n);
        } else {
          Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
          for (size_t i = 0; i < v.parts.size(); ++i)
            acc += v.weights[i] * complex_hessian(*v.parts[i], point);
          return acc;
        }
      },
      u.variant);
  return 0.5 * (h + h.adjoint().eval());
}

Eigen::MatrixXd real_hessian(const FunctionSpec& u,
                             const Eigen::VectorXd& point) {
  check_point(u, point);
  if (u.space.kind != SpaceKind::Real)
    throw PreconditionError("real_hessian: spec lives in complex space");
  const int n = u.space.n;
  Eigen::MatrixXd h = std::visit(
      [&](const auto& v) -> Eigen::MatrixXd {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RadialPoly>) {
          const RadialProfile prof = profile_of(v);
          const double t = point.squaredNorm();
          Eigen::MatrixXd m = 4.0 * prof.d2(t) * (point * point.transpose());
          m.diagonal().array() += 2.0 * prof.d1(t);
          return m;
        } else if constexpr (std::is_same_v<T, QuadraticForm>) {
          return v.q.real();
        } else if constexpr (std::is_same_v<T, Perturbed>) {
          return real_hessian(*v.base, point) +
                 v.amplitude * perturb_hessian_full(v, point);
        } else {
          Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
          for (size_t i = 0; i < v.parts.size(); ++i)
            acc += v.weights[i] * real_hessian(*v.parts[i], point);
          return acc;
        }
      },
      u.variant);
  return 0.5 * (h + h.transpose().eval());
}

namespace {

// Central-difference Hessian over all stacked coordinates.
Eigen::MatrixXd fd_full_hessian(const FunctionSpec& u, const Eigen::VectorXd& p,
                                double h) {
  const int d = static_cast<int>(p.size());
  Eigen::MatrixXd out(d, d);
  const double u0 = eval(u, p);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd q = p;
    q[i] = p[i] + h;
    const double up = eval(u, q);
    q[i] = p[i] - h;
    const double um = eval(u, q);
    out(i, i) = (up - 2.0 * u0 + um) / (h * h);
    for (int j = i + 1; j < d; ++j) {
      q = p;
      q[i] += h;
      q[j] += h;
      const double upp = eval(u, q);
      q[j] -= 2.0 * h;
      const double upm = eval(u, q);
      q[i] -= 2.0 * h;
      const double umm = eval(u, q);
      q[j] += 2.0 * h;
      const double ump = eval(u, q);
      const double v = (upp - upm - ump + umm) / (4.0 * h * h);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd fd_complex_hessian(const FunctionSpec& u,
                                    const Eigen::VectorXd& point, double h) {
  check_point(u, point);
  if (u.space.kind != SpaceKind::Complex)
    throw PreconditionError("fd_complex_hessian: spec lives in real space");
  return fold_complex(fd_full_hessian(u, point, h), u.space.n);
}

Eigen::MatrixXd fd_real_hessian(const FunctionSpec& u,
                                const Eigen::VectorXd& point, double h) {
  check_point(u, point);
  if (u.space.kind != SpaceKind::Real)
    throw PreconditionError("fd_real_hessian: spec lives in complex space");
  return fd_full_hessian(u, point, h);
}

// --- radial structure -----------------------------------------------------------

bool is_radial(const FunctionSpec& u) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RadialPoly>) {
          return true;
        } else if constexpr (std::is_same_v<T, LinearCombination>) {
          for (const auto& part : v.parts)
            if (!is_radial(*part)) return false;
          return true;
        } else {
          return false;
        }
      },
      u.variant);
}

RadialProfile radial_profile(const FunctionSpec& u) {
  return std::visit(
      [&](const auto& v) -> RadialProfile {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RadialPoly>) {
          return profile_of(v);
        } else if constexpr (std::is_same_v<T, LinearCombination>) {
          Eigen::VectorXd acc = Eigen::VectorXd::Zero(1);
          for (size_t i = 0; i < v.parts.size(); ++i) {
            const RadialProfile sub = radial_profile(*v.parts[i]);
            if (sub.coeffs.size() > acc.size()) {
              Eigen::VectorXd grown = Eigen::VectorXd::Zero(sub.coeffs.size());
              grown.head(acc.size()) = acc;
              acc = grown;
            }
            acc.head(sub.coeffs.size()) += v.weights[i] * sub.coeffs;
          }
          return RadialProfile{acc};
        } else {
          throw PreconditionError("radial_profile: spec is not radial");
        }
      },
      u.variant);
}

Eigen::VectorXd radial_spectrum(const RadialProfile& profile,
                                const Space& space, double t) {
  if (t < 0.0) throw InvalidInputError("radial_spectrum: negative t");
  const int n = space.n;
  Eigen::VectorXd spec(n);
  if (space.kind == SpaceKind::Complex) {
    spec.setConstant(profile.d1(t));
    spec[n - 1] = profile.d1(t) + t * profile.d2(t);
  } else {
    spec.setConstant(2.0 * profile.d1(t));
    spec[n - 1] = 2.0 * profile.d1(t) + 4.0 * t * profile.d2(t);
  }
  return spec;
}

Eigen::VectorXd radial_spectrum(const FunctionSpec& u, double t) {
  return radial_spectrum(radial_profile(u), u.space, t);
}

// --- admissibility ----------------------------------------------------------------

MembershipReport check_membership(const FunctionSpec& u, int k,
                                  const QuadratureScheme& sampler, double tol) {
  const int n = u.space.n;
  if (k < 1 || k > n)
    throw OrderRangeError("check_membership: order k must lie in [1, n]");
  MembershipReport rep;
  rep.k = k;
  rep.min_slack = std::numeric_limits<double>::infinity();
  rep.worst_point = Eigen::VectorXd::Zero(u.space.real_dim());

  auto record = [&](const Eigen::VectorXd& spectrum, const Eigen::VectorXd& pt) {
    const Eigen::VectorXd s = s_all(spectrum, k);
    for (int j = 1; j < s.size(); ++j) {
      if (s[j] < rep.min_slack) {
        rep.min_slack = s[j];
        rep.worst_point = pt;
      }
    }
  };

  if (sampler.radial_only) {
    if (!is_radial(u))
      throw InvalidInputError(
          "check_membership: radial sampler with a non-radial spec");
    const RadialProfile prof = radial_profile(u);
    Eigen::VectorXd pt = Eigen::VectorXd::Zero(u.space.real_dim());
    auto at_radius = [&](double r) {
      pt[0] = r;
      record(radial_spectrum(prof, u.space, r * r), pt);
    };
    at_radius(0.0);
    for (int c = 0; c < sampler.nodes.cols(); ++c) at_radius(sampler.nodes(0, c));
    at_radius(1.0);
  } else {
    if (sampler.real_dim != u.space.real_dim())
      throw InvalidInputError("check_membership: sampler dimension mismatch");
    for (int c = 0; c < sampler.nodes.cols(); ++c) {
      const Eigen::VectorXd pt = sampler.nodes.col(c);
      Eigen::VectorXd spectrum;
      if (u.space.kind == SpaceKind::Complex) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            complex_hessian(u, pt), Eigen::EigenvaluesOnly);
        spectrum = es.eigenvalues();
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_hessian(u, pt),
                                                          Eigen::EigenvaluesOnly);
        spectrum = es.eigenvalues();
      }
      record(spectrum, pt);
    }
  }
  rep.passed = rep.min_slack >= -tol;
  return rep;
}

bool check_boundary_vanishing(const FunctionSpec& u, double tol) {
  const int d = u.space.real_dim();
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[i] = 1.0;
    pts.push_back(e);
    pts.push_back(-e);
  }
  if (d <= 10) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(d));
    for (uint32_t mask = 0; mask < (1u << d); ++mask) {
      Eigen::VectorXd c(d);
      for (int i = 0; i < d; ++i) c[i] = (mask & (1u << i)) ? inv : -inv;
      pts.push_back(c);
    }
  }
  std::mt19937_64 g(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> dist(0.0, 1.0);
  while (pts.size() < 1200) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = dist(g);
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    pts.push_back(v / norm);
  }
  for (const auto& p : pts)
    if (std::abs(eval(u, p)) > tol) return false;
  return true;
}

// --- generators -----------------------------------------------------------------

QuadratureScheme membership_sampler(int real_dim) {
  int res = 5;
  if (real_dim <= 2)
    res = 24;
  else if (real_dim <= 4)
    res = 10;
  else if (real_dim <= 6)
    res = 8;
  return grid(real_dim, res);
}

Polynomial random_bump(std::mt19937_64& rng, int dim, int max_degree) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Polynomial p(dim);
  // full monomial basis of total degree <= max_degree, odometer order
  std::vector<int> expo(static_cast<size_t>(dim), 0);
  for (;;) {
    int total = 0;
    for (int e : expo) total += e;
    if (total <= max_degree) p.add_term(dist(rng), expo);
    int i = dim - 1;
    while (i >= 0 && ++expo[static_cast<size_t>(i)] > max_degree) {
      expo[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  p.compress();
  return p;
}

FunctionSpec random_admissible(uint64_t seed, const Space& space, int k,
                               Richness richness) {
  if (k < 1 || k > space.n)
    throw OrderRangeError("random_admissible: order k must lie in [1, n]");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> ex(1.0);
  const int m_count = 1 + static_cast<int>(rng() % 4);
  Eigen::VectorXd b(m_count);
  for (int m = 0; m < m_count; ++m) b[m] = ex(rng);
  FunctionSpec base = make_radial(space, b, true);
  if (richness == Richness::Radial) return base;

  const int d = space.real_dim();
  const Polynomial bump = random_bump(rng, d, 2);
  const QuadratureScheme sampler = membership_sampler(d);
  FunctionSpec cand = make_perturbed(base, bump, 0.5);
  for (double eps = 0.5; eps >= 1e-6; eps *= 0.5) {
    Perturbed pert = std::get<Perturbed>(cand.variant);
    pert.amplitude = eps;
    cand.variant = std::move(pert);
    if (check_membership(cand, k, sampler).passed) return cand;
  }
  return base;  // amplitude collapsed; the radial base is always admissible
}

FunctionSpec random_cone_function(uint64_t seed, const Space& space, int k) {
  if (k < 1 || k > space.n)
    throw OrderRangeError("random_cone_function: order k must lie in [1, n]");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> ex(1.0);
  const int m_count = 1 + static_cast<int>(rng() % 3);
  Eigen::VectorXd b(m_count);
  for (int m = 0; m < m_count; ++m) b[m] = ex(rng);
  return make_radial(space, b, false);
}

}  // namespace khess
