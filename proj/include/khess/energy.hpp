#pragma once

#include <span>
#include <string>
#include <vector>

#include "khess/funcspace.hpp"
#include "khess/quadrature.hpp"

// Hessian energy integrals over the unit ball against Lebesgue measure:
//
//   complex:  F_k[u_0..u_k] = int (-u_0) S~_k(Hc u_1, .., Hc u_k) dV
//             I_k[u]        = F_k[u, .., u]
//   real:     G_k[u_0..u_k] = int (-u_0) S~_k(H u_1, .., H u_k) dV
//             J_k[u]        = G_k[u, .., u]
//
// plus the mixed lower-order functional with fixed cone functions in some
// Hessian slots. Radial inputs take a one-dimensional Gauss-Legendre fast
// path (the Hessians share an eigenbasis, so the matrix polarization
// reduces to the spectra); everything else integrates on the lattice grid.
// Sums use compensated (Neumaier) accumulation in deterministic node order.

namespace khess {

struct EnergyValue {
  double value = 0.0;
  double tau = 0.0;  // relative error budget inherited from the scheme
  std::string scheme_kind;
  int scheme_param = 0;
};

/// Core mixed energy. weight is the (-u_0) slot; slots are the k Hessian
/// arguments (k = slots.size(), 0 allowed: the integrand is then just
/// -u_0). Repeated pointers are evaluated once per node.
EnergyValue mixed_energy(const FunctionSpec* weight,
                         std::span<const FunctionSpec* const> slots,
                         const QuadratureScheme& scheme);

/// One mixed energy over a shared argument pool: weight and slots index
/// into the pool handed to mixed_energy_batch.
struct EnergyRequest {
  int weight = 0;
  std::vector<int> slots;
};

/// Evaluates several mixed energies in a single quadrature pass. Pool
/// entries are deduplicated by pointer and each Hessian is computed once
/// per node, so requests sharing arguments cost one evaluation. Results
/// match per-request mixed_energy calls bit for bit (same summation
/// order).
std::vector<EnergyValue> mixed_energy_batch(
    std::span<const FunctionSpec* const> pool,
    std::span<const EnergyRequest> requests, const QuadratureScheme& scheme);

/// F_k over complex-space specs; args = (u_0, u_1..u_k), k = args.size()-1.
EnergyValue mixed_energy_complex(const std::vector<FunctionSpec>& args,
                                 const QuadratureScheme& scheme);

/// G_k over real-space specs, same layout.
EnergyValue mixed_energy_real(const std::vector<FunctionSpec>& args,
                              const QuadratureScheme& scheme);

/// Diagonal I_k (complex) / J_k (real); k = 0 gives the weighted volume
/// integral of -u.
EnergyValue energy_Ik(const FunctionSpec& u, int k, const QuadratureScheme& scheme);
EnergyValue energy_Jk(const FunctionSpec& u, int k, const QuadratureScheme& scheme);

/// I_{k,v_1..v_m}[u]: u in the weight slot and k-m Hessian slots, the v_i
/// in the remaining m slots. Requires m < k. Works in either space.
EnergyValue mixed_lower_energy(const FunctionSpec& u,
                               const std::vector<FunctionSpec>& vs, int k,
                               const QuadratureScheme& scheme);

/// Relative change of the mixed energy under a permutation of all k+1
/// argument slots: |F[perm] - F| / max(|F|, 1e-300). The identity is exact
/// only after integration by parts, so every argument must vanish on the
/// boundary (PreconditionError otherwise).
double symmetry_residual(const std::vector<FunctionSpec>& args,
                         const QuadratureScheme& scheme,
                         const std::vector<int>& permutation);

}  // namespace khess
