#pragma once

#include <Eigen/Dense>
#include <complex>

namespace khess {

using Complex = std::complex<double>;

/// Ambient space of a test function: C^n or R^n. Points are handled in real
/// coordinates throughout; a complex point z in C^n is stored as the real
/// vector (x_1..x_n, y_1..y_n) with z_j = x_j + i*y_j.
enum class SpaceKind { Complex, Real };

struct Space {
  SpaceKind kind = SpaceKind::Complex;
  int n = 1;

  /// Dimension of the real coordinate vector backing a point.
  int real_dim() const { return kind == SpaceKind::Complex ? 2 * n : n; }

  bool operator==(const Space&) const = default;
};

inline Space complex_space(int n) { return {SpaceKind::Complex, n}; }
inline Space real_space(int n) { return {SpaceKind::Real, n}; }

/// Result of testing a spectrum against the Garding cone Gamma_k.
/// slack is the largest eps >= 0 with mu - eps*(1,..,1) still in Gamma_k,
/// and 0 when mu is outside or on the boundary.
struct ConeSlack {
  int k = 0;
  bool member = false;
  double slack = 0.0;
};

/// Worst-case cone slack of a Hessian spectrum over a sample of the ball.
struct MembershipReport {
  int k = 0;
  double min_slack = 0.0;
  Eigen::VectorXd worst_point;
  bool passed = false;
};

}  // namespace khess
