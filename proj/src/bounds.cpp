#include "pflab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace pflab {

namespace {

std::shared_mutex g_coefficients_mutex;
std::unordered_map<std::string, BoundCoefficients> g_coefficients_cache;

std::string coefficients_key(const TwoPartHamiltonian& model, NormKind kind,
                             int qubit_cap) {
  return std::to_string(model.n) + "|" + norm_kind_name(kind) + "|" +
         std::to_string(qubit_cap) + "|" + model.h1.str() + "|" + model.h2.str();
}

BoundCoefficients compute_coefficients(const TwoPartHamiltonian& model, NormKind kind,
                                       int qubit_cap) {
  BoundCoefficients out;
  out.norm_kind = kind;
  out.norm_h1 = sum_norm(model.h1, kind, qubit_cap);
  out.norm_h2 = sum_norm(model.h2, kind, qubit_cap);
  out.c1 = std::min(out.norm_h1, out.norm_h2);

  const PauliSum c12 = commutator(model.h1, model.h2);
  out.c2 = 0.5 * sum_norm(c12, kind, qubit_cap);

  const PauliSum nested1 = commutator(model.h1, c12);             // [H1,[H1,H2]]
  const PauliSum nested2 = commutator(model.h2, commutator(model.h2, model.h1));
  out.s = {sum_norm(nested1, kind, qubit_cap), sum_norm(nested2, kind, qubit_cap)};
  out.c3 = (std::min(out.s[0], out.s[1]) + 0.5 * std::max(out.s[0], out.s[1])) / 12.0;

  out.clamp = 2.0 * identity_norm(Eigen::Index(1) << model.n, kind);
  return out;
}

}  // namespace

BoundCoefficients coefficients(const TwoPartHamiltonian& model, NormKind kind,
                               int qubit_cap) {
  if (!model.h1.is_hermitian() || !model.h2.is_hermitian())
    throw InputError("coefficients: both parts must be Hermitian");
  const std::string key = coefficients_key(model, kind, qubit_cap);
  {
    std::shared_lock lock(g_coefficients_mutex);
    auto it = g_coefficients_cache.find(key);
    if (it != g_coefficients_cache.end()) return it->second;
  }
  const BoundCoefficients value = compute_coefficients(model, kind, qubit_cap);
  std::unique_lock lock(g_coefficients_mutex);
  return g_coefficients_cache.try_emplace(key, value).first->second;
}

double bound_pf1(const BoundCoefficients& coeffs, double t, std::int64_t r) {
  return coeffs.c2 * t * t / static_cast<double>(r);
}

double boundary_term(const BoundCoefficients& coeffs, double t, std::int64_t r) {
  return coeffs.c1 * t / static_cast<double>(r);
}

double bulk_term(const BoundCoefficients& coeffs, double t, std::int64_t r) {
  const double rr = static_cast<double>(r);
  return coeffs.c3 * t * t * t / (rr * rr);
}

double bound_main(const BoundCoefficients& coeffs, double t, std::int64_t r) {
  if (t < 0.0) throw InputError("bound_main: t must be >= 0");
  if (r < 1) throw InputError("bound_main: r must be >= 1");
  return std::min({bound_pf1(coeffs, t, r),
                   boundary_term(coeffs, t, r) + bulk_term(coeffs, t, r), coeffs.clamp});
}

double bound_pf2(const BoundCoefficients& coeffs, double t, std::int64_t r) {
  const double rr = static_cast<double>(r);
  return t * t * t / (12.0 * rr * rr) * (coeffs.s[1] + 0.5 * coeffs.s[0]);
}

double bound_pf1_general(std::span<const PauliSum> parts, double t, std::int64_t r,
                         NormKind kind, int qubit_cap) {
  if (parts.empty()) throw InputError("bound_pf1_general: need at least one part");
  if (r < 1) throw InputError("bound_pf1_general: r must be >= 1");
  const std::size_t count = parts.size();
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < count; ++j) {
    PauliSum inner(parts[j].qubits());
    for (std::size_t k = j + 1; k < count; ++k)
      inner += commutator(parts[k], parts[j]);
    total += sum_norm(inner, kind, qubit_cap);
  }
  return t * t / (2.0 * static_cast<double>(r)) * total;
}

double bound_pf2_general(std::span<const PauliSum> parts, double t, std::int64_t r,
                         NormKind kind, int qubit_cap) {
  if (parts.empty()) throw InputError("bound_pf2_general: need at least one part");
  if (r < 1) throw InputError("bound_pf2_general: r must be >= 1");
  const std::size_t count = parts.size();
  const double rr = static_cast<double>(r);
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < count; ++j) {
    const int n = parts[j].qubits();
    PauliSum first(n);
    for (std::size_t k = j + 1; k < count; ++k) {
      const PauliSum inner = commutator(parts[k], parts[j]);
      for (std::size_t l = j + 1; l < count; ++l) first += commutator(parts[l], inner);
    }
    PauliSum second(n);
    for (std::size_t k = j + 1; k < count; ++k)
      second += commutator(parts[j], commutator(parts[j], parts[k]));
    total += sum_norm(first, kind, qubit_cap) + 0.5 * sum_norm(second, kind, qubit_cap);
  }
  return t * t * t / (12.0 * rr * rr) * total;
}

BoundaryBound boundary_term_bound(const BoundCoefficients& coeffs, double t,
                                  std::int64_t r) {
  if (t < 0.0) throw InputError("boundary_term_bound: t must be >= 0");
  if (r < 1) throw InputError("boundary_term_bound: r must be >= 1");
  const double rr = static_cast<double>(r);
  BoundaryBound out;
  out.branch_h1 = t / rr * coeffs.norm_h1;
  out.branch_h2 = t / rr * coeffs.norm_h2;
  out.branch_commutator = t * t / rr * coeffs.c2;  // (t^2/2r)||[H1,H2]|| = c2 t^2/r
  out.value = std::min({out.branch_h1, out.branch_h2, out.branch_commutator});
  return out;
}

KuboChain measure_kubo_chain(const EvolutionContext& ctx, const BoundCoefficients& coeffs,
                             double t, std::int64_t r, NormKind kind) {
  KuboChain out;
  const double half_dt = t / (2.0 * static_cast<double>(r));
  const DenseMatrix exact = ctx.exact(t);
  const DenseMatrix boundary = ctx.part_propagator(1, half_dt);
  out.measured = matrix_norm(exact * boundary - boundary * exact, kind);
  out.middle =
      half_dt * matrix_norm(exact * ctx.h1_dense() - ctx.h1_dense() * exact, kind);
  out.middle_via_h2 =
      half_dt * matrix_norm(exact * ctx.h2_dense() - ctx.h2_dense() * exact, kind);
  out.bound = boundary_term_bound(coeffs, t, r);
  return out;
}

double empirical_error(const EvolutionContext& ctx, const SimulationParams& params,
                       PfOrder order, NormKind kind) {
  return matrix_norm(ctx.exact(params.t) - ctx.pf_unitary(order, params), kind);
}

ErrorBoundReport evaluate_point(const EvolutionContext& ctx,
                                const BoundCoefficients& coeffs,
                                const SimulationParams& params, PfOrder order) {
  ErrorBoundReport report;
  const DenseMatrix approx = ctx.pf_unitary(order, params);
  report.empirical = matrix_norm(ctx.exact(params.t) - approx, coeffs.norm_kind);
  report.unitarity_drift = ctx.unitarity_drift(approx);
  report.bound_pf1 = bound_pf1(coeffs, params.t, params.r);
  report.term_boundary = boundary_term(coeffs, params.t, params.r);
  report.term_bulk = bulk_term(coeffs, params.t, params.r);
  report.bound_main = bound_main(coeffs, params.t, params.r);
  report.bound_pf2 = bound_pf2(coeffs, params.t, params.r);
  report.clamp = coeffs.clamp;
  return report;
}

}  // namespace pflab
