#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pflab/bounds.hpp"
#include "pflab/evolution.hpp"

namespace pflab {

enum class SweepKind { fixed_r, fixed_t, fixed_dt };

std::string sweep_kind_name(SweepKind kind);
SweepKind sweep_kind_from_name(const std::string& name);

/// One error-scaling sweep: a log grid over the free variable with one of
/// (r, t, dt) held fixed.
///
///   fixed_r : grid over t, fixed_value = r
///   fixed_t : grid over r, fixed_value = t (grid rounded to integers >= 1,
///             duplicates collapsed)
///   fixed_dt: grid over t, fixed_value = dt; each point uses r = round(t/dt),
///             t = r*dt so that dt = t/r holds exactly as stored
struct SweepSpec {
  SweepKind kind = SweepKind::fixed_r;
  double fixed_value = 0.0;
  std::vector<double> grid;  // strictly increasing
  std::vector<int> orders = {1};
  NormKind norm_kind = NormKind::spectral;
  std::uint64_t seed = 0;  // recorded in output rows
};

/// Log-spaced grid helper, count points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

/// One sweep point: the simulation parameters, the measured error, and every
/// bound constituent needed to redraw the scaling panels.
struct ErrorRecord {
  int n = 0;
  std::uint64_t seed = 0;
  double t = 0.0;
  std::int64_t r = 1;
  double dt = 0.0;
  int order = 1;
  double empirical = 0.0;
  double bound_pf1 = 0.0;
  double bound_main = 0.0;
  double term_boundary = 0.0;
  double term_bulk = 0.0;
  double bound_pf2 = 0.0;
  double unitarity_drift = 0.0;
};

struct PointFailure {
  std::size_t grid_index = 0;
  int order = 1;
  std::string message;
};

struct SweepResult {
  std::vector<ErrorRecord> records;  // grid-major, order-minor; deterministic
  std::vector<PointFailure> failures;
  BoundCoefficients coeffs;
  std::vector<SimulationParams> points;  // resolved (t, r) per grid entry
};

/// Evaluates every grid point (in parallel when threads > 1). Output order and
/// values are independent of the thread count; per-point failures are
/// collected, not fatal.
SweepResult run_sweep(const EvolutionContext& ctx, const SweepSpec& spec,
                      int threads = 1);

/// Semi-empirical fit: alpha and beta rescale the boundary and bulk
/// coefficients in
///   f(t,r) = min(c2 t^2/r, (c1/alpha) t/r + (c3/beta) t^3/r^2, 2||I||)
/// to minimize the RMS of log10 f - log10 empirical over the records.
struct FitResult {
  double alpha = 1.0;
  double beta = 1.0;
  double residual = 0.0;  // RMS in log10
  int points_used = 0;
  bool degenerate = false;
  std::string degenerate_reason;
};

struct FitOptions {
  double search_lo = 1e-2;
  double search_hi = 1e2;
  int coarse_steps_per_decade = 20;
  double refine_rel_step = 1e-4;
  double drift_cutoff = 1e-6;  // records with larger unitarity drift are excluded
};

FitResult fit_alpha_beta(std::span<const ErrorRecord> records,
                         const BoundCoefficients& coeffs, const FitOptions& options = {});

/// The fitted model evaluated at one point.
double fit_model_value(const BoundCoefficients& coeffs, double alpha, double beta,
                       double t, std::int64_t r);

/// Best single-scale fit of the plain first-order form s·c2 t^2/r, for
/// comparing residuals against the main-bound form.
double scaled_pf1_fit_residual(std::span<const ErrorRecord> records,
                               const BoundCoefficients& coeffs);

/// Expectation values of `observable` after evolving `state` with the
/// first-order unitary and with the second-order unitary built on `part`
/// (part 1 uses the standard second-order step, part 2 the mirrored one).
/// The observable must commute with that part.
struct ObservablePair {
  double exp_pf1 = 0.0;
  double exp_pf2 = 0.0;
};

ObservablePair observable_equivalence_state(const EvolutionContext& ctx, int part,
                                            const DenseVector& state,
                                            const PauliSum& observable,
                                            const SimulationParams& params);

/// Same, with the state taken as the eigenindex-th eigenvector (ascending
/// eigenvalue order) of the chosen part.
ObservablePair observable_equivalence(const EvolutionContext& ctx, int part,
                                      Eigen::Index eigenindex,
                                      const PauliSum& observable,
                                      const SimulationParams& params);

/// Local log-log slopes between consecutive points of (x, y), x strictly
/// increasing, y > 0.
struct SlopeSegment {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double slope = 0.0;
};

std::vector<SlopeSegment> slope_analysis(std::span<const double> x,
                                         std::span<const double> y);

/// Slopes of log10(empirical) against the sweep's free variable for one order.
std::vector<SlopeSegment> slope_analysis(std::span<const ErrorRecord> records,
                                         SweepKind kind, int order);

}  // namespace pflab
