#include "pflab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace pflab {

namespace {

PfOrder order_from_int(int order) {
  if (order == 1) return PfOrder::first;
  if (order == 2) return PfOrder::second;
  throw InputError("sweep orders must be 1 or 2");
}

// Resolves the grid into concrete (t, r) pairs per the sweep kind.
std::vector<SimulationParams> resolve_points(const SweepSpec& spec) {
  if (spec.grid.empty()) throw InputError("sweep grid is empty");
  for (std::size_t i = 0; i + 1 < spec.grid.size(); ++i)
    if (!(spec.grid[i] < spec.grid[i + 1]))
      throw InputError("sweep grid must be strictly increasing");

  std::vector<SimulationParams> points;
  points.reserve(spec.grid.size());
  switch (spec.kind) {
    case SweepKind::fixed_r: {
      const auto r = static_cast<std::int64_t>(std::llround(spec.fixed_value));
      if (r < 1) throw InputError("fixed_r sweep needs r >= 1");
      for (double t : spec.grid) points.push_back({t, r});
      break;
    }
    case SweepKind::fixed_t: {
      const double t = spec.fixed_value;
      std::int64_t last_r = 0;
      for (double raw : spec.grid) {
        const auto r = std::max<std::int64_t>(1, std::llround(raw));
        if (r == last_r) continue;  // collapse duplicates after rounding
        points.push_back({t, r});
        last_r = r;
      }
      break;
    }
    case SweepKind::fixed_dt: {
      const double dt = spec.fixed_value;
      if (!(dt > 0.0)) throw InputError("fixed_dt sweep needs dt > 0");
      std::int64_t last_r = 0;
      for (double t_raw : spec.grid) {
        const auto r = std::max<std::int64_t>(1, std::llround(t_raw / dt));
        if (r == last_r) continue;
        // Recompute t so that dt = t/r holds as stored.
        points.push_back({static_cast<double>(r) * dt, r});
        last_r = r;
      }
      break;
    }
  }
  return points;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const int workers = std::max(1, threads);
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

std::string sweep_kind_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::fixed_r: return "fixed_r";
    case SweepKind::fixed_t: return "fixed_t";
    case SweepKind::fixed_dt: return "fixed_dt";
  }
  return "?";
}

SweepKind sweep_kind_from_name(const std::string& name) {
  if (name == "fixed_r") return SweepKind::fixed_r;
  if (name == "fixed_t") return SweepKind::fixed_t;
  if (name == "fixed_dt") return SweepKind::fixed_dt;
  throw InputError("unknown sweep kind '" + name + "'");
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo)) throw InputError("log_grid needs 0 < lo < hi");
  if (count < 2) throw InputError("log_grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double step = (std::log10(hi) - std::log10(lo)) / (count - 1);
  for (int i = 0; i < count; ++i)
    grid[static_cast<std::size_t>(i)] = std::pow(10.0, std::log10(lo) + step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

SweepResult run_sweep(const EvolutionContext& ctx, const SweepSpec& spec, int threads) {
  SweepResult result;
  result.points = resolve_points(spec);
  result.coeffs = coefficients(ctx.model(), spec.norm_kind);
  for (int order : spec.orders) order_from_int(order);  // validate up front

  const std::size_t orders = spec.orders.size();
  const std::size_t total = result.points.size() * orders;
  result.records.assign(total, ErrorRecord{});
  std::vector<char> ok(total, 0);
  std::vector<std::string> errors(total);

  parallel_for(total, threads, [&](std::size_t slot) {
    const std::size_t point_index = slot / orders;
    const int order = spec.orders[slot % orders];
    const SimulationParams& params = result.points[point_index];
    try {
      const ErrorBoundReport report =
          evaluate_point(ctx, result.coeffs, params, order_from_int(order));
      ErrorRecord& rec = result.records[slot];
      rec.n = ctx.model().n;
      rec.seed = spec.seed;
      rec.t = params.t;
      rec.r = params.r;
      rec.dt = params.dt();
      rec.order = order;
      rec.empirical = report.empirical;
      rec.bound_pf1 = report.bound_pf1;
      rec.bound_main = report.bound_main;
      rec.term_boundary = report.term_boundary;
      rec.term_bulk = report.term_bulk;
      rec.bound_pf2 = report.bound_pf2;
      rec.unitarity_drift = report.unitarity_drift;
      ok[slot] = 1;
    } catch (const std::exception& e) {
      errors[slot] = e.what();
    }
  });

  // Compact in deterministic slot order.
  std::vector<ErrorRecord> records;
  records.reserve(total);
  for (std::size_t slot = 0; slot < total; ++slot) {
    if (ok[slot]) {
      records.push_back(result.records[slot]);
    } else {
      result.failures.push_back(
          {slot / orders, spec.orders[slot % orders], errors[slot]});
    }
  }
  result.records = std::move(records);
  return result;
}

double fit_model_value(const BoundCoefficients& coeffs, double alpha, double beta,
                       double t, std::int64_t r) {
  const double rr = static_cast<double>(r);
  const double middle =
      coeffs.c1 / alpha * t / rr + coeffs.c3 / beta * t * t * t / (rr * rr);
  return std::min({coeffs.c2 * t * t / rr, middle, coeffs.clamp});
}

namespace {

struct FitPoint {
  double t;
  std::int64_t r;
  double log_empirical;
};

double fit_objective(const BoundCoefficients& coeffs, std::span<const FitPoint> points,
                     double alpha, double beta) {
  double ss = 0.0;
  for (const FitPoint& p : points) {
    const double f = fit_model_value(coeffs, alpha, beta, p.t, p.r);
    const double d = std::log10(f) - p.log_empirical;
    ss += d * d;
  }
  return ss;
}

}  // namespace

FitResult fit_alpha_beta(std::span<const ErrorRecord> records,
                         const BoundCoefficients& coeffs, const FitOptions& options) {
  FitResult fit;

  std::vector<FitPoint> points;
  for (const ErrorRecord& rec : records) {
    if (rec.order != 1) continue;
    if (!(rec.empirical > 0.0) || !std::isfinite(rec.empirical)) continue;
    if (rec.unitarity_drift > options.drift_cutoff) continue;
    points.push_back({rec.t, rec.r, std::log10(rec.empirical)});
  }
  fit.points_used = static_cast<int>(points.size());
  if (points.size() < 2) {
    fit.degenerate = true;
    fit.degenerate_reason = "need at least 2 usable records";
    return fit;
  }

  // Coarse log-grid search.
  const double lo = std::log10(options.search_lo), hi = std::log10(options.search_hi);
  const int steps =
      static_cast<int>(std::lround((hi - lo) * options.coarse_steps_per_decade));
  double best_a = 1.0, best_b = 1.0, best = std::numeric_limits<double>::infinity();
  for (int ia = 0; ia <= steps; ++ia) {
    const double alpha = std::pow(10.0, lo + (hi - lo) * ia / steps);
    for (int ib = 0; ib <= steps; ++ib) {
      const double beta = std::pow(10.0, lo + (hi - lo) * ib / steps);
      const double value = fit_objective(coeffs, points, alpha, beta);
      if (value < best) {
        best = value;
        best_a = alpha;
        best_b = beta;
      }
    }
  }

  // Multiplicative pattern search down to the requested relative step.
  double step = std::pow(10.0, 1.0 / options.coarse_steps_per_decade);
  while (step > 1.0 + options.refine_rel_step) {
    bool improved = false;
    const double candidates_a[3] = {best_a / step, best_a, best_a * step};
    const double candidates_b[3] = {best_b / step, best_b, best_b * step};
    for (double a : candidates_a)
      for (double b : candidates_b) {
        if (a == best_a && b == best_b) continue;
        const double value = fit_objective(coeffs, points, a, b);
        if (value < best - 1e-15 * (1.0 + best)) {
          best = value;
          best_a = a;
          best_b = b;
          improved = true;
        }
      }
    if (!improved) step = std::sqrt(step);
  }

  fit.alpha = best_a;
  fit.beta = best_b;
  fit.residual = std::sqrt(best / static_cast<double>(points.size()));

  // The fit is only determined when the middle arm is active in both its
  // boundary-dominated and bulk-dominated regimes somewhere in the data.
  int boundary_dominated = 0, bulk_dominated = 0;
  for (const FitPoint& p : points) {
    const double rr = static_cast<double>(p.r);
    const double boundary = coeffs.c1 / best_a * p.t / rr;
    const double bulk = coeffs.c3 / best_b * p.t * p.t * p.t / (rr * rr);
    const double middle = boundary + bulk;
    if (middle > fit_model_value(coeffs, best_a, best_b, p.t, p.r) * (1.0 + 1e-12))
      continue;  // another arm is the minimum here
    (boundary >= bulk ? boundary_dominated : bulk_dominated) += 1;
  }
  if (boundary_dominated == 0 || bulk_dominated == 0) {
    fit.degenerate = true;
    fit.degenerate_reason =
        boundary_dominated == 0
            ? "no boundary-dominated points: alpha is unconstrained"
            : "no bulk-dominated points: beta is unconstrained";
  }
  return fit;
}

double scaled_pf1_fit_residual(std::span<const ErrorRecord> records,
                               const BoundCoefficients& coeffs) {
  // log10(s · c2 t^2/r) = log10 s + log10(c2 t^2/r): the optimal log-scale is
  // the mean residual, so the fit is closed-form.
  std::vector<double> diffs;
  for (const ErrorRecord& rec : records) {
    if (rec.order != 1) continue;
    if (!(rec.empirical > 0.0) || !std::isfinite(rec.empirical)) continue;
    diffs.push_back(std::log10(rec.empirical) -
                    std::log10(bound_pf1(coeffs, rec.t, rec.r)));
  }
  if (diffs.size() < 2) throw InputError("scaled_pf1_fit_residual: need >= 2 records");
  double mean = 0.0;
  for (double d : diffs) mean += d;
  mean /= static_cast<double>(diffs.size());
  double ss = 0.0;
  for (double d : diffs) ss += (d - mean) * (d - mean);
  return std::sqrt(ss / static_cast<double>(diffs.size()));
}

ObservablePair observable_equivalence_state(const EvolutionContext& ctx, int part,
                                            const DenseVector& state,
                                            const PauliSum& observable,
                                            const SimulationParams& params) {
  if (part != 1 && part != 2) throw InputError("part must be 1 or 2");
  if (observable.qubits() != ctx.model().n)
    throw InputError("observable qubit count does not match the model");
  const PauliSum& part_sum = part == 1 ? ctx.model().h1 : ctx.model().h2;
  if (!commutator(observable, part_sum).empty())
    throw InputError("observable does not commute with part " + std::to_string(part) +
                     ": the equivalence precondition is violated");
  if (state.size() != ctx.dim()) throw InputError("state dimension mismatch");

  const DenseMatrix m = to_dense(observable);
  const DenseMatrix u1 = ctx.pf_unitary(PfOrder::first, params);
  const DenseMatrix u2 = ctx.pf_unitary(
      part == 1 ? PfOrder::second : PfOrder::second_mirrored, params);
  const DenseVector evolved1 = u1 * state;
  const DenseVector evolved2 = u2 * state;
  return {evolved1.dot(m * evolved1).real(), evolved2.dot(m * evolved2).real()};
}

ObservablePair observable_equivalence(const EvolutionContext& ctx, int part,
                                      Eigen::Index eigenindex,
                                      const PauliSum& observable,
                                      const SimulationParams& params) {
  const DenseVector state = ctx.part_cache(part).eigenstate(eigenindex);
  return observable_equivalence_state(ctx, part, state, observable, params);
}

std::vector<SlopeSegment> slope_analysis(std::span<const double> x,
                                         std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("slope_analysis: size mismatch");
  if (x.size() < 3) throw InputError("slope_analysis: need at least 3 points");
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1]))
      throw InputError("slope_analysis: x must be strictly increasing");
  for (double v : y)
    if (!(v > 0.0)) throw InputError("slope_analysis: y must be positive");

  std::vector<SlopeSegment> segments;
  segments.reserve(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double slope = (std::log10(y[i + 1]) - std::log10(y[i])) /
                         (std::log10(x[i + 1]) - std::log10(x[i]));
    segments.push_back({x[i], x[i + 1], slope});
  }
  return segments;
}

std::vector<SlopeSegment> slope_analysis(std::span<const ErrorRecord> records,
                                         SweepKind kind, int order) {
  std::vector<double> x, y;
  for (const ErrorRecord& rec : records) {
    if (rec.order != order) continue;
    x.push_back(kind == SweepKind::fixed_t ? static_cast<double>(rec.r) : rec.t);
    y.push_back(rec.empirical);
  }
  return slope_analysis(x, y);
}

}  // namespace pflab
