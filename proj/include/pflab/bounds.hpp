#pragma once

#include <array>
#include <span>

#include "pflab/evolution.hpp"
#include "pflab/models.hpp"
#include "pflab/norms.hpp"

namespace pflab {

/// Norm data entering the error bounds for a two-part decomposition.
///
///   c1 = min(||H1||, ||H2||)            -- boundary-layer coefficient
///   c2 = ||[H1,H2]|| / 2                -- first-order coefficient
///   c3 = (min(S) + max(S)/2) / 12       -- bulk coefficient
///   S  = { ||[H1,[H1,H2]]||, ||[H2,[H2,H1]]|| }
///
/// All of c1, c2, c3 are symmetric under swapping the two parts.
struct BoundCoefficients {
  double norm_h1 = 0.0;
  double norm_h2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  std::array<double, 2> s{};  // {||[H1,[H1,H2]]||, ||[H2,[H2,H1]]||}
  NormKind norm_kind = NormKind::spectral;
  double clamp = 2.0;  // 2||I||
};

/// Commutators are formed symbolically, densified once, then normed. Results
/// are memoized per (model, norm) behind a thread-safe read-mostly cache, so
/// repeated sweeps over one model pay for the norms once.
BoundCoefficients coefficients(const TwoPartHamiltonian& model, NormKind kind,
                               int qubit_cap = kDenseQubitCap);

/// min(c2 t^2/r, c1 t/r + c3 t^3/r^2, 2||I||).
double bound_main(const BoundCoefficients& coeffs, double t, std::int64_t r);

/// c2 t^2 / r (the first-order bound arm by itself).
double bound_pf1(const BoundCoefficients& coeffs, double t, std::int64_t r);

/// c1 t / r.
double boundary_term(const BoundCoefficients& coeffs, double t, std::int64_t r);

/// c3 t^3 / r^2.
double bulk_term(const BoundCoefficients& coeffs, double t, std::int64_t r);

/// (t^3/12r^2) (||[H2,[H2,H1]]|| + ||[H1,[H1,H2]]||/2), i.e. the second-order
/// bound with the parts in their given roles (no symmetrization).
double bound_pf2(const BoundCoefficients& coeffs, double t, std::int64_t r);

/// First-order bound for an arbitrary ordered decomposition:
///   (t^2/2r) sum_j || sum_{k>j} [H_k, H_j] ||.
double bound_pf1_general(std::span<const PauliSum> parts, double t, std::int64_t r,
                         NormKind kind, int qubit_cap = kDenseQubitCap);

/// Second-order bound for an arbitrary ordered decomposition:
///   (t^3/12r^2) sum_j ( ||sum_{k,l>j} [H_l,[H_k,H_j]]|| + ||sum_{k>j} [H_j,[H_j,H_k]]||/2 ).
double bound_pf2_general(std::span<const PauliSum> parts, double t, std::int64_t r,
                         NormKind kind, int qubit_cap = kDenseQubitCap);

/// Bound on the boundary-layer commutator, with its constituent branches:
///   ||[e^{-iHt}, e^{-iH1 t/2r}]|| <= (t/r) min(||H1||, ||H2||, (t/2)||[H1,H2]||).
struct BoundaryBound {
  double value = 0.0;
  double branch_h1 = 0.0;          // (t/r)||H1||
  double branch_h2 = 0.0;          // (t/r)||H2||
  double branch_commutator = 0.0;  // (t^2/2r)||[H1,H2]||
};

BoundaryBound boundary_term_bound(const BoundCoefficients& coeffs, double t,
                                  std::int64_t r);

/// Measured quantities of the boundary-commutator chain
///   ||[e^{-iHt}, e^{-iH1 t/2r}]|| <= (t/2r)||[e^{-iHt}, H1]|| <= bound.
struct KuboChain {
  double measured = 0.0;        // ||[e^{-iHt}, e^{-iH1 t/2r}]||
  double middle = 0.0;          // (t/2r)||[e^{-iHt}, H1]||
  double middle_via_h2 = 0.0;   // (t/2r)||[e^{-iHt}, H2]|| (equal in exact arithmetic)
  BoundaryBound bound;
};

KuboChain measure_kubo_chain(const EvolutionContext& ctx, const BoundCoefficients& coeffs,
                             double t, std::int64_t r, NormKind kind);

/// Norm of e^{-iHt} - U_order at the given parameters.
double empirical_error(const EvolutionContext& ctx, const SimulationParams& params,
                       PfOrder order, NormKind kind);

/// Everything the sweep records about one (t, r, order) point.
struct ErrorBoundReport {
  double empirical = 0.0;
  double bound_pf1 = 0.0;
  double bound_main = 0.0;
  double term_boundary = 0.0;
  double term_bulk = 0.0;
  double bound_pf2 = 0.0;
  double clamp = 0.0;
  double unitarity_drift = 0.0;
};

ErrorBoundReport evaluate_point(const EvolutionContext& ctx,
                                const BoundCoefficients& coeffs,
                                const SimulationParams& params, PfOrder order);

}  // namespace pflab
