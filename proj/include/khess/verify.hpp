#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "khess/funcspace.hpp"
#include "khess/quadrature.hpp"

// Randomized, seeded verification suites. Each suite draws cases from a
// deterministic per-case RNG stream (master seed, case index), computes an
// inequality margin, and gates it against the quadrature error budget:
// margin >= -tolerance, never against exact zero.
//
//   hoelder            prod_j I_k[u_j]^{1/(k+1)} - F_k[u_0..u_k]
//   convexity          I^{1/p}[u] + I^{1/p}[v] - I^{1/p}[u+v], p = k-m+1,
//                      I = mixed lower energy with m fixed cone functions
//   cauchy_schwarz     F[u0,u0,v..]F[u1,u1,v..] - F[u0,u1,v..]^2, and the
//                      real-space twin with G (two rows per sample)
//   poincare_complex   chain for I_m[u] against F_k[u..,v..] and the
//                      I_k-interpolation bound, v = |z|^2 - 1
//   poincare_real      same chain with J/G and v = (|x|^2 - 1)/2
//   divergence         max_i |sum_j d_j T^{ij}| of the Newton tensor field
//                      by central differences (margin = -residual)
//   symmetry           slot-permutation residual of the mixed energy
//                      (both spaces, two rows per sample)
//   garding            root superadditivity and the cone-slack bound on
//                      random Gamma_k triples
//
// Reports embed the worst case's serialized inputs; replay_case recomputes
// any embedded input's margin through the exact evaluation path.

namespace khess {

struct SuiteConfig {
  std::string suite;
  int n = 1;
  int k = 1;
  int m = 0;         // fixed lower-order slots where the suite uses them
  int samples = 1;
  uint64_t seed = 0;
  Richness richness = Richness::Radial;
  QuadratureSpec quadrature;  // empty kind = per-richness default
  double tolerance = -1.0;    // > 0 overrides the scheme-derived tau
};

/// Parses and validates; throws ConfigError naming the offending field.
SuiteConfig suite_config_from_json(const nlohmann::json& j,
                                   const std::string& path = "config");
nlohmann::json suite_config_to_json(const SuiteConfig& cfg);

/// Validation shared by parsing and run_suite (suite-specific ranges for
/// n, k, m, samples, richness/scheme compatibility).
void validate_config(const SuiteConfig& cfg, const std::string& path = "config");

struct CaseRow {
  std::string id;
  double margin = 0.0;
  double tolerance = 0.0;
  std::string status;      // pass | violation | skip | aborted
  std::string digest;      // FNV-1a 64 of the canonical input JSON
  double ratio = 0.0;      // suite-specific extra (Poincare ratio, FD decay)
  int regenerated = 0;     // sampling retries consumed by this case
  nlohmann::json input;    // replayable serialized inputs
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CaseRow> rows;
  int violations = 0;
  int skips = 0;
  int aborted = 0;
  int regenerated = 0;
  double min_margin = 0.0;
  double median_margin = 0.0;
  double sup_ratio = 0.0;
  double tolerance = 0.0;        // scheme-level tau actually used
  double elapsed_seconds = 0.0;  // wall clock, excluded from determinism
  nlohmann::json worst_input;    // inputs of the minimum-margin case
  bool passed = false;           // zero violations and zero aborted cases
};

/// Runs all cases of one suite, optionally across jobs worker threads.
/// Case results depend only on (config, case index), so the report is
/// identical for any jobs value.
SuiteReport run_suite(const SuiteConfig& cfg, int jobs = 1);

/// Recomputes the margin of a serialized case input under cfg.
double replay_case(const SuiteConfig& cfg, const nlohmann::json& input);

nlohmann::json report_to_json(const SuiteReport& report);

/// One row per case: case_id,margin,tolerance,status,spec_digest.
std::string report_csv(const SuiteReport& report);

}  // namespace khess
