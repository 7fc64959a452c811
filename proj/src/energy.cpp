#include "khess/energy.hpp"

#include <algorithm>
#include <cmath>

#include "khess/symfun.hpp"

namespace khess {

namespace {

// Neumaier variant of compensated summation.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double total() const { return sum + comp; }
};

struct BatchPrepared {
  std::vector<const FunctionSpec*> pool;    // deduplicated by pointer
  std::vector<char> needs_value;            // pool entry used as a weight
  std::vector<char> needs_hessian;          // pool entry used in a slot
  std::vector<int> req_weight;              // per request, pool index
  std::vector<std::vector<int>> req_slots;  // per request, pool indices
  Space space{};
};

BatchPrepared prepare(std::span<const FunctionSpec* const> pool_in,
                      std::span<const EnergyRequest> requests) {
  if (pool_in.empty()) throw InvalidInputError("mixed_energy: empty argument pool");
  BatchPrepared p;
  std::vector<int> remap(pool_in.size());
  for (size_t i = 0; i < pool_in.size(); ++i) {
    const FunctionSpec* s = pool_in[i];
    if (s == nullptr) throw InvalidInputError("mixed_energy: null argument");
    if (i == 0)
      p.space = s->space;
    else if (!(s->space == p.space))
      throw InvalidInputError("mixed_energy: arguments live in different spaces");
    const auto it = std::find(p.pool.begin(), p.pool.end(), s);
    if (it == p.pool.end()) {
      remap[i] = static_cast<int>(p.pool.size());
      p.pool.push_back(s);
    } else {
      remap[i] = static_cast<int>(it - p.pool.begin());
    }
  }
  p.needs_value.assign(p.pool.size(), 0);
  p.needs_hessian.assign(p.pool.size(), 0);
  for (const EnergyRequest& r : requests) {
    if (r.weight < 0 || r.weight >= static_cast<int>(pool_in.size()))
      throw InvalidInputError("mixed_energy: weight index out of range");
    if (static_cast<int>(r.slots.size()) > p.space.n)
      throw OrderRangeError("mixed_energy: order k exceeds dimension n");
    p.req_weight.push_back(remap[static_cast<size_t>(r.weight)]);
    p.needs_value[static_cast<size_t>(p.req_weight.back())] = 1;
    std::vector<int> slots;
    slots.reserve(r.slots.size());
    for (const int s : r.slots) {
      if (s < 0 || s >= static_cast<int>(pool_in.size()))
        throw InvalidInputError("mixed_energy: slot index out of range");
      slots.push_back(remap[static_cast<size_t>(s)]);
      p.needs_hessian[static_cast<size_t>(slots.back())] = 1;
    }
    p.req_slots.push_back(std::move(slots));
  }
  return p;
}

std::vector<double> integrate_radial(const BatchPrepared& p,
                                     const QuadratureScheme& scheme) {
  std::vector<RadialProfile> profs(p.pool.size());
  for (size_t i = 0; i < p.pool.size(); ++i) {
    if (!is_radial(*p.pool[i]))
      throw InvalidInputError("mixed_energy: radial scheme with a non-radial argument");
    profs[i] = radial_profile(*p.pool[i]);
  }
  // Radial Hessians share an eigenbasis (tangential directions plus the
  // radial one), so the matrix polarization reduces to the spectra.
  const size_t nreq = p.req_weight.size();
  std::vector<CompensatedSum> acc(nreq);
  std::vector<Eigen::VectorXd> spec(p.pool.size());
  std::vector<Eigen::VectorXd> slots;
  for (int c = 0; c < scheme.nodes.cols(); ++c) {
    const double r = scheme.nodes(0, c);
    const double t = r * r;
    for (size_t i = 0; i < p.pool.size(); ++i)
      if (p.needs_hessian[i]) spec[i] = radial_spectrum(profs[i], p.space, t);
    for (size_t q = 0; q < nreq; ++q) {
      const auto& sl = p.req_slots[q];
      double sk = 1.0;
      if (!sl.empty()) {
        slots.resize(sl.size());
        for (size_t s = 0; s < sl.size(); ++s) slots[s] = spec[static_cast<size_t>(sl[s])];
        sk = polarized_s_k(std::span<const Eigen::VectorXd>(slots));
      }
      const double w = -profs[static_cast<size_t>(p.req_weight[q])].value(t);
      acc[q].add(scheme.weights[c] * w * sk);
    }
  }
  std::vector<double> out(nreq);
  for (size_t q = 0; q < nreq; ++q) out[q] = acc[q].total();
  return out;
}

std::vector<double> integrate_grid(const BatchPrepared& p,
                                   const QuadratureScheme& scheme) {
  if (scheme.real_dim != p.space.real_dim())
    throw InvalidInputError("mixed_energy: scheme dimension mismatch");
  const bool complex_case = p.space.kind == SpaceKind::Complex;
  const size_t nreq = p.req_weight.size();
  std::vector<CompensatedSum> acc(nreq);
  std::vector<Eigen::MatrixXcd> hess_c(p.pool.size());
  std::vector<Eigen::MatrixXcd> slots_c;
  std::vector<Eigen::MatrixXd> hess_r(p.pool.size());
  std::vector<Eigen::MatrixXd> slots_r;
  std::vector<double> values(p.pool.size(), 0.0);
  for (int c = 0; c < scheme.nodes.cols(); ++c) {
    const Eigen::VectorXd x = scheme.nodes.col(c);
    for (size_t i = 0; i < p.pool.size(); ++i) {
      if (p.needs_hessian[i]) {
        if (complex_case)
          hess_c[i] = complex_hessian(*p.pool[i], x);
        else
          hess_r[i] = real_hessian(*p.pool[i], x);
      }
      if (p.needs_value[i]) values[i] = eval(*p.pool[i], x);
    }
    for (size_t q = 0; q < nreq; ++q) {
      const auto& sl = p.req_slots[q];
      double sk = 1.0;
      if (!sl.empty()) {
        if (complex_case) {
          slots_c.resize(sl.size());
          for (size_t s = 0; s < sl.size(); ++s)
            slots_c[s] = hess_c[static_cast<size_t>(sl[s])];
          sk = polarized_s_k(std::span<const Eigen::MatrixXcd>(slots_c));
        } else {
          slots_r.resize(sl.size());
          for (size_t s = 0; s < sl.size(); ++s)
            slots_r[s] = hess_r[static_cast<size_t>(sl[s])];
          sk = polarized_s_k(std::span<const Eigen::MatrixXd>(slots_r));
        }
      }
      acc[q].add(scheme.weights[c] * (-values[static_cast<size_t>(p.req_weight[q])]) * sk);
    }
  }
  std::vector<double> out(nreq);
  for (size_t q = 0; q < nreq; ++q) out[q] = acc[q].total();
  return out;
}

EnergyValue finish(double value, const QuadratureScheme& scheme) {
  if (!std::isfinite(value))
    throw InvalidInputError("mixed_energy: non-finite integral");
  EnergyValue e;
  e.value = value;
  e.tau = scheme.tau;
  e.scheme_kind = scheme.kind;
  e.scheme_param = scheme.param;
  return e;
}

}  // namespace

std::vector<EnergyValue> mixed_energy_batch(
    std::span<const FunctionSpec* const> pool,
    std::span<const EnergyRequest> requests, const QuadratureScheme& scheme) {
  const BatchPrepared p = prepare(pool, requests);
  const std::vector<double> vals =
      scheme.radial_only ? integrate_radial(p, scheme) : integrate_grid(p, scheme);
  std::vector<EnergyValue> out;
  out.reserve(vals.size());
  for (const double v : vals) out.push_back(finish(v, scheme));
  return out;
}

EnergyValue mixed_energy(const FunctionSpec* weight,
                         std::span<const FunctionSpec* const> slots,
                         const QuadratureScheme& scheme) {
  std::vector<const FunctionSpec*> pool;
  pool.reserve(slots.size() + 1);
  pool.push_back(weight);
  EnergyRequest req;
  for (size_t i = 0; i < slots.size(); ++i) {
    pool.push_back(slots[i]);
    req.slots.push_back(static_cast<int>(i) + 1);
  }
  return mixed_energy_batch(pool, {&req, 1}, scheme)[0];
}

namespace {

EnergyValue mixed_energy_of_kind(const std::vector<FunctionSpec>& args,
                                 const QuadratureScheme& scheme,
                                 SpaceKind kind, const char* name) {
  if (args.empty())
    throw InvalidInputError(std::string(name) + ": needs at least the weight slot");
  for (const auto& a : args)
    if (a.space.kind != kind)
      throw InvalidInputError(std::string(name) + ": wrong space kind");
  std::vector<const FunctionSpec*> slots;
  slots.reserve(args.size() - 1);
  for (size_t i = 1; i < args.size(); ++i) slots.push_back(&args[i]);
  return mixed_energy(&args[0], slots, scheme);
}

}  // namespace

EnergyValue mixed_energy_complex(const std::vector<FunctionSpec>& args,
                                 const QuadratureScheme& scheme) {
  return mixed_energy_of_kind(args, scheme, SpaceKind::Complex,
                              "mixed_energy_complex");
}

EnergyValue mixed_energy_real(const std::vector<FunctionSpec>& args,
                              const QuadratureScheme& scheme) {
  return mixed_energy_of_kind(args, scheme, SpaceKind::Real, "mixed_energy_real");
}

EnergyValue energy_Ik(const FunctionSpec& u, int k, const QuadratureScheme& scheme) {
  if (u.space.kind != SpaceKind::Complex)
    throw InvalidInputError("energy_Ik: complex-space spec required");
  if (k < 0) throw OrderRangeError("energy_Ik: negative order");
  const std::vector<const FunctionSpec*> slots(static_cast<size_t>(k), &u);
  return mixed_energy(&u, slots, scheme);
}

EnergyValue energy_Jk(const FunctionSpec& u, int k, const QuadratureScheme& scheme) {
  if (u.space.kind != SpaceKind::Real)
    throw InvalidInputError("energy_Jk: real-space spec required");
  if (k < 0) throw OrderRangeError("energy_Jk: negative order");
  const std::vector<const FunctionSpec*> slots(static_cast<size_t>(k), &u);
  return mixed_energy(&u, slots, scheme);
}

EnergyValue mixed_lower_energy(const FunctionSpec& u,
                               const std::vector<FunctionSpec>& vs, int k,
                               const QuadratureScheme& scheme) {
  const int m = static_cast<int>(vs.size());
  if (m >= k)
    throw OrderRangeError("mixed_lower_energy: needs m < k fixed lower slots");
  std::vector<const FunctionSpec*> slots;
  slots.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k - m; ++i) slots.push_back(&u);
  for (const auto& v : vs) slots.push_back(&v);
  return mixed_energy(&u, slots, scheme);
}

double symmetry_residual(const std::vector<FunctionSpec>& args,
                         const QuadratureScheme& scheme,
                         const std::vector<int>& permutation) {
  if (args.empty()) throw InvalidInputError("symmetry_residual: empty tuple");
  const size_t count = args.size();
  if (permutation.size() != count)
    throw InvalidInputError("symmetry_residual: permutation length mismatch");
  std::vector<bool> seen(count, false);
  for (const int idx : permutation) {
    if (idx < 0 || static_cast<size_t>(idx) >= count || seen[static_cast<size_t>(idx)])
      throw InvalidInputError("symmetry_residual: not a permutation");
    seen[static_cast<size_t>(idx)] = true;
  }
  for (const auto& a : args)
    if (!check_boundary_vanishing(a, 1e-9))
      throw PreconditionError(
          "symmetry_residual: arguments must vanish on the boundary");

  std::vector<const FunctionSpec*> slots;
  for (size_t i = 1; i < count; ++i) slots.push_back(&args[i]);
  const double base = mixed_energy(&args[0], slots, scheme).value;

  std::vector<const FunctionSpec*> pslots;
  for (size_t i = 1; i < count; ++i)
    pslots.push_back(&args[static_cast<size_t>(permutation[i])]);
  const double permuted =
      mixed_energy(&args[static_cast<size_t>(permutation[0])], pslots, scheme).value;

  return std::abs(permuted - base) / std::max(std::abs(base), 1e-300);
}

}  // namespace khess
