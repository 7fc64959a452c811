#pragma once

#include <string>

#include <Eigen/Dense>

#include "khess/errors.hpp"
#include "khess/types.hpp"

// Quadrature schemes over the unit ball in R^d. Two kinds:
//
//   radial_gauss:N  Gauss-Legendre in the radius, exact for polynomial
//                   radial integrands up to degree 2N-1. Only valid when
//                   every factor of the integrand is radial.
//   grid:R          midpoint rule on an R^d lattice restricted to cell
//                   centers strictly inside the ball. Works for arbitrary
//                   integrands at the cost of a much looser error budget.
//
// Each scheme carries tau, the relative accuracy it is trusted to deliver
// on the integrands this library produces; downstream tolerance checks are
// scaled by it.

namespace khess {

struct QuadratureSpec {
  std::string kind;  // "radial_gauss" or "grid"
  int param = 0;     // node count resp. lattice resolution; 0 = default
};

struct QuadratureScheme {
  std::string kind;         // "radial_gauss" or "grid"
  int param = 0;            // node count resp. resolution actually used
  bool radial_only = false;
  int real_dim = 0;
  Eigen::MatrixXd nodes;    // one column per node; 1 row when radial_only
  Eigen::VectorXd weights;  // includes r^(d-1)|S^(d-1)| resp. cell volume
  double tau = 0.0;
};

/// Surface area of the unit sphere S^(d-1) in R^d.
double sphere_area(int d);

/// Volume of the unit ball in R^d.
double ball_volume(int d);

/// Gauss-Legendre radial scheme with n_nodes points on (0, 1).
QuadratureScheme radial_gauss(int real_dim, int n_nodes);

/// Midpoint lattice with resolution cells per axis on [-1, 1]^d.
QuadratureScheme grid(int real_dim, int resolution);

/// Lattice resolution used when grid:0 is requested, chosen per dimension
/// to keep node counts workable.
int default_grid_resolution(int real_dim);

/// Parses "radial_gauss:64", "grid:32", or a bare kind (param 0 = default).
QuadratureSpec parse_quadrature(const std::string& text);

/// Instantiates a scheme for the given real dimension, applying defaults.
QuadratureScheme make_scheme(const QuadratureSpec& spec, int real_dim);

}  // namespace khess
