// pflab command-line front end: build models, run error-scaling sweeps,
// verify the product-formula identities and bounds, fit the semi-empirical
// error model, and plot log-log charts.
//
// Exit codes: 0 success, 1 failed verification, 2 config/input error,
// 3 resource-cap violation.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pflab/bounds.hpp"
#include "pflab/evolution.hpp"
#include "pflab/experiments.hpp"
#include "pflab/io.hpp"
#include "pflab/models.hpp"
#include "pflab/svg.hpp"

namespace {

using nlohmann::json;
using namespace pflab;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

int default_threads() {
  if (const char* env = std::getenv("PFLAB_THREADS")) {
    const int value = std::atoi(env);
    if (value >= 1) return value;
  }
  return 1;
}

// Options shared by every subcommand that needs a model. Flags override the
// config file; the merged result is one JSON object consumable by
// model_from_json and embeddable in output metadata.
struct ModelCli {
  std::string config_path;
  std::string type;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<double> fields;
  std::vector<std::string> h1_terms, h2_terms;
  std::vector<std::vector<double>> couplings;
  double chain_coupling = 1.0;
  double chain_field = 1.0;

  CLI::Option* opt_type = nullptr;
  CLI::Option* opt_n = nullptr;
  CLI::Option* opt_seed = nullptr;
  CLI::Option* opt_fields = nullptr;
  CLI::Option* opt_h1 = nullptr;
  CLI::Option* opt_h2 = nullptr;
  CLI::Option* opt_couplings = nullptr;
  CLI::Option* opt_chain_coupling = nullptr;
  CLI::Option* opt_chain_field = nullptr;
};

void add_model_options(CLI::App* cmd, ModelCli& m) {
  cmd->add_option("--config", m.config_path, "JSON config file; flags override it");
  m.opt_type = cmd->add_option("--model", m.type,
                               "model type: heisenberg1d | tfim1d | custom");
  m.opt_n = cmd->add_option("--n", m.n, "qubit count");
  m.opt_seed = cmd->add_option("--seed", m.seed, "disorder seed (heisenberg1d)");
  m.opt_fields = cmd->add_option("--fields", m.fields, "explicit local fields")
                     ->delimiter(',');
  m.opt_h1 = cmd->add_option("--h1", m.h1_terms, "custom model h1 term, e.g. '1.0 XX'");
  m.opt_h2 = cmd->add_option("--h2", m.h2_terms, "custom model h2 term, e.g. '0.5 ZI'");
  m.opt_couplings =
      cmd->add_option("--coupling", m.couplings, "tfim1d coupling i,j,J (repeatable)")
          ->delimiter(',');
  m.opt_chain_coupling =
      cmd->add_option("--chain-coupling", m.chain_coupling, "tfim1d uniform chain J");
  m.opt_chain_field =
      cmd->add_option("--chain-field", m.chain_field, "tfim1d uniform field g");
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  json parsed = json::parse(read_text_file(path), nullptr, true, true);
  if (!parsed.is_object()) throw InputError("config file must hold a JSON object");
  return parsed;
}

// Merged model config: config-file values first, then any flag that was set.
json model_config_json(const ModelCli& m, const json& file_config) {
  json cfg = file_config.value("model", json::object());
  if (m.opt_type->count() > 0) cfg["type"] = m.type;
  if (m.opt_n->count() > 0) cfg["n"] = m.n;
  if (m.opt_seed->count() > 0) cfg["seed"] = m.seed;
  if (m.opt_fields->count() > 0) cfg["fields"] = m.fields;
  if (m.opt_h1->count() > 0) cfg["h1"] = m.h1_terms;
  if (m.opt_h2->count() > 0) cfg["h2"] = m.h2_terms;
  if (m.opt_couplings->count() > 0) {
    json entries = json::array();
    for (const auto& c : m.couplings) {
      if (c.size() != 3) throw InputError("--coupling needs exactly i,j,J");
      entries.push_back({static_cast<int>(c[0]), static_cast<int>(c[1]), c[2]});
    }
    cfg["couplings"] = entries;
  }
  if (m.opt_chain_coupling->count() > 0) cfg["chain_coupling"] = m.chain_coupling;
  if (m.opt_chain_field->count() > 0) cfg["chain_field"] = m.chain_field;
  if (!cfg.contains("type"))
    throw InputError("missing required field 'model' (--model or config)");
  if (!cfg.contains("n")) throw InputError("missing required field 'n' (--n or config)");
  return cfg;
}

std::uint64_t config_seed(const json& model_cfg) {
  return model_cfg.contains("seed") ? model_cfg.at("seed").get<std::uint64_t>() : 0;
}

struct GridSpec {
  std::string var;
  double lo = 0.0, hi = 0.0;
  int count = 0;
};

GridSpec parse_grid_log(const std::string& text) {
  GridSpec g;
  const std::size_t p0 = text.find(':');
  if (p0 == std::string::npos) throw InputError("--grid-log must be var:lo:hi:count");
  g.var = text.substr(0, p0);
  const std::size_t p1 = text.find(':', p0 + 1);
  const std::size_t p2 =
      p1 == std::string::npos ? std::string::npos : text.find(':', p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos)
    throw InputError("--grid-log must be var:lo:hi:count");
  try {
    g.lo = std::stod(text.substr(p0 + 1, p1 - p0 - 1));
    g.hi = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
    g.count = std::stoi(text.substr(p2 + 1));
  } catch (const std::exception&) {
    throw InputError("--grid-log must be var:lo:hi:count with numeric bounds");
  }
  if (g.var != "t" && g.var != "r")
    throw InputError("--grid-log variable must be 't' or 'r'");
  return g;
}

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> orders;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (tok == "1")
      orders.push_back(1);
    else if (tok == "2")
      orders.push_back(2);
    else
      throw InputError("orders must be a comma list drawn from {1,2}, got '" + tok + "'");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return orders;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepCli {
  ModelCli model;
  std::string kind;
  double fixed_t = 0.0, fixed_dt = 0.0;
  std::int64_t fixed_r = 0;
  std::string grid_log;
  std::string orders = "1";
  std::string norm = "spectral";
  int threads = default_threads();
  std::string out, meta;

  CLI::Option *opt_kind = nullptr, *opt_t = nullptr, *opt_dt = nullptr,
              *opt_r = nullptr, *opt_grid = nullptr, *opt_orders = nullptr,
              *opt_norm = nullptr, *opt_threads = nullptr, *opt_out = nullptr;
};

int cmd_sweep(const SweepCli& cli) {
  const json file_cfg = load_config(cli.model.config_path);
  const json model_cfg = model_config_json(cli.model, file_cfg);

  auto merged_str = [&](const CLI::Option* opt, const std::string& flag_value,
                        const char* key, const std::string& fallback) {
    if (opt->count() > 0) return flag_value;
    return file_cfg.value(key, fallback);
  };

  SweepSpec spec;
  const std::string kind = merged_str(cli.opt_kind, cli.kind, "kind", "");
  if (kind.empty()) throw InputError("missing required field 'kind' (--kind or config)");
  spec.kind = sweep_kind_from_name(kind);
  spec.norm_kind =
      norm_kind_from_name(merged_str(cli.opt_norm, cli.norm, "norm", "spectral"));
  spec.orders = parse_orders(merged_str(cli.opt_orders, cli.orders, "orders", "1"));
  spec.seed = config_seed(model_cfg);

  switch (spec.kind) {
    case SweepKind::fixed_r:
      if (cli.opt_r->count() > 0)
        spec.fixed_value = static_cast<double>(cli.fixed_r);
      else if (file_cfg.contains("r"))
        spec.fixed_value = file_cfg.at("r").get<double>();
      else
        throw InputError("fixed_r sweep needs --r");
      break;
    case SweepKind::fixed_t:
      if (cli.opt_t->count() > 0)
        spec.fixed_value = cli.fixed_t;
      else if (file_cfg.contains("t"))
        spec.fixed_value = file_cfg.at("t").get<double>();
      else
        throw InputError("fixed_t sweep needs --t");
      break;
    case SweepKind::fixed_dt:
      if (cli.opt_dt->count() > 0)
        spec.fixed_value = cli.fixed_dt;
      else if (file_cfg.contains("dt"))
        spec.fixed_value = file_cfg.at("dt").get<double>();
      else
        throw InputError("fixed_dt sweep needs --dt");
      break;
  }

  const std::string grid_text = merged_str(cli.opt_grid, cli.grid_log, "grid_log", "");
  if (grid_text.empty())
    throw InputError("missing required field 'grid_log' (--grid-log or config)");
  const GridSpec grid = parse_grid_log(grid_text);
  const bool wants_r_grid = spec.kind == SweepKind::fixed_t;
  if (wants_r_grid != (grid.var == "r"))
    throw InputError("grid variable '" + grid.var + "' does not match sweep kind " +
                     sweep_kind_name(spec.kind));
  spec.grid = log_grid(grid.lo, grid.hi, grid.count);

  const int threads = cli.opt_threads->count() > 0
                          ? cli.threads
                          : file_cfg.value("threads", default_threads());
  const std::string out = cli.opt_out->count() > 0 ? cli.out : file_cfg.value("out", "");
  if (out.empty()) throw InputError("missing required field 'out' (--out or config)");
  const std::string meta_path = cli.meta.empty() ? out + ".meta.json" : cli.meta;

  TwoPartHamiltonian model = model_from_json(model_cfg);
  EvolutionContext ctx(std::move(model));
  SweepResult result = run_sweep(ctx, spec, threads);

  json effective;
  effective["model"] = model_cfg;
  effective["kind"] = sweep_kind_name(spec.kind);
  effective["fixed_value"] = spec.fixed_value;
  effective["grid_log"] = grid_text;
  effective["orders"] = spec.orders;
  effective["norm"] = norm_kind_name(spec.norm_kind);
  effective["threads"] = threads;
  effective["out"] = out;

  write_text_file(out, records_to_csv(result.records));
  write_text_file(meta_path,
                  sweep_metadata(ctx.model(), effective, spec, result).dump(2) + "\n");

  std::cout << "wrote " << result.records.size() << " records to " << out << "\n"
            << "wrote metadata to " << meta_path << "\n";
  if (!result.failures.empty())
    std::cerr << result.failures.size() << " point(s) failed; see metadata\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// model

int cmd_model(const ModelCli& model_cli, const std::string& norm_name,
              const std::string& out_path) {
  const json file_cfg = load_config(model_cli.config_path);
  const json model_cfg = model_config_json(model_cli, file_cfg);
  const TwoPartHamiltonian model = model_from_json(model_cfg);
  const NormKind kind = norm_kind_from_name(norm_name);
  const BoundCoefficients coeffs = coefficients(model, kind);

  json report;
  report["config"] = model_cfg;
  report["label"] = model.label;
  report["n"] = model.n;
  report["h1"] = model.h1.str();
  report["h2"] = model.h2.str();
  report["h1_terms"] = model.h1.size();
  report["h2_terms"] = model.h2.size();
  if (model.disorder) report["disorder"] = *model.disorder;
  report["rng"] = kDisorderRngId;
  report["coefficients"] = coefficients_to_json(coeffs);

  std::cout << report.dump(2) << "\n";
  if (!out_path.empty()) write_text_file(out_path, report.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

int cmd_verify(const ModelCli& model_cli, const std::string& norm_name,
               const std::string& json_path, double scale_c2) {
  const json file_cfg = load_config(model_cli.config_path);
  const json model_cfg = model_config_json(model_cli, file_cfg);
  TwoPartHamiltonian model = model_from_json(model_cfg);
  const NormKind kind = norm_kind_from_name(norm_name);

  EvolutionContext ctx(std::move(model));
  BoundCoefficients coeffs = coefficients(ctx.model(), kind);
  coeffs.c2 *= scale_c2;  // test hook; 1.0 in normal operation

  const std::vector<SimulationParams> points = {
      {0.5, 4}, {0.5, 64}, {2.0, 8}, {2.0, 128}, {10.0, 64}, {10.0, 1024}};

  std::vector<VerifyCheck> checks;
  auto fail = [](VerifyCheck& check, const std::string& detail) {
    check.passed = false;
    check.detail = detail;
  };

  {
    VerifyCheck check{"conjugation_identity"};
    double worst = 0.0;
    for (const auto& p : points) {
      const auto res = ctx.conjugation_residual(p, kind);
      worst = std::max({worst, res.direct, res.mirrored});
    }
    check.detail = "max residual " + format_double(worst);
    if (!(worst <= 1e-9))
      fail(check, "violated: ||U1 - conjugated U2|| <= 1e-9, got " + format_double(worst));
    checks.push_back(check);
  }

  {
    VerifyCheck check{"bound_validity_pf1"};
    for (const auto& p : points) {
      const double emp = empirical_error(ctx, p, PfOrder::first, kind);
      const double bound = bound_main(coeffs, p.t, p.r);
      if (!(emp <= bound + 1e-8)) {
        const double arm1 = bound_pf1(coeffs, p.t, p.r);
        const double arm2 = boundary_term(coeffs, p.t, p.r) + bulk_term(coeffs, p.t, p.r);
        const char* active = bound == coeffs.clamp ? "clamp"
                             : arm1 <= arm2        ? "bound_pf1"
                                                   : "boundary+bulk";
        fail(check, "violated: empirical <= bound_main at t=" + format_double(p.t) +
                        " r=" + std::to_string(p.r) + " (empirical " +
                        format_double(emp) + " > bound " + format_double(bound) +
                        ", active arm: " + active + ")");
        break;
      }
    }
    checks.push_back(check);
  }

  {
    VerifyCheck check{"bound_validity_pf2"};
    for (const auto& p : points) {
      const double emp = empirical_error(ctx, p, PfOrder::second, kind);
      const double bound = bound_pf2(coeffs, p.t, p.r);
      if (!(emp <= bound + 1e-8)) {
        fail(check, "violated: empirical(order 2) <= bound_pf2 at t=" +
                        format_double(p.t) + " r=" + std::to_string(p.r));
        break;
      }
    }
    checks.push_back(check);
  }

  {
    VerifyCheck check{"kubo_chain"};
    for (const auto& p : points) {
      const KuboChain chain = measure_kubo_chain(ctx, coeffs, p.t, p.r, kind);
      if (!(chain.measured <= chain.middle + 1e-9) ||
          !(chain.middle <= chain.bound.value + 1e-9)) {
        fail(check, "violated: measured <= (t/2r)||[exp,H1]|| <= boundary bound at t=" +
                        format_double(p.t) + " r=" + std::to_string(p.r));
        break;
      }
      const double scale = std::max(1.0, chain.middle);
      if (!(std::abs(chain.middle - chain.middle_via_h2) <= 1e-10 * scale)) {
        fail(check, "violated: ||[exp,H1]|| == ||[exp,H2]|| at t=" + format_double(p.t) +
                        " r=" + std::to_string(p.r));
        break;
      }
    }
    checks.push_back(check);
  }

  {
    VerifyCheck check{"triangle_decomposition"};
    for (const auto& p : points) {
      const double emp1 = empirical_error(ctx, p, PfOrder::first, kind);
      const double emp2 = empirical_error(ctx, p, PfOrder::second, kind);
      const KuboChain chain = measure_kubo_chain(ctx, coeffs, p.t, p.r, kind);
      if (!(emp1 <= emp2 + chain.measured + 1e-8)) {
        fail(check, "violated: empirical(1) <= empirical(2) + boundary commutator at t=" +
                        format_double(p.t) + " r=" + std::to_string(p.r));
        break;
      }
    }
    checks.push_back(check);
  }

  {
    VerifyCheck check{"observable_equivalence"};
    const SimulationParams p{2.0, 16};
    for (int part : {1, 2}) {
      const PauliSum& obs = part == 1 ? ctx.model().h1 : ctx.model().h2;
      if (obs.empty()) continue;  // nothing to measure against
      const auto pair = observable_equivalence(ctx, part, 0, obs, p);
      if (!(std::abs(pair.exp_pf1 - pair.exp_pf2) <= 1e-10)) {
        fail(check, "violated: eigenstate expectation equality for part " +
                        std::to_string(part));
        break;
      }
    }
    checks.push_back(check);
  }

  {
    VerifyCheck check{"bound_main_symmetry"};
    const TwoPartHamiltonian swapped{ctx.model().h2, ctx.model().h1, ctx.model().n,
                                     ctx.model().label + " (swapped)",
                                     ctx.model().disorder};
    const BoundCoefficients original = coefficients(ctx.model(), kind);
    const BoundCoefficients swapped_coeffs = coefficients(swapped, kind);
    for (const auto& p : points) {
      const double a = bound_main(original, p.t, p.r);
      const double b = bound_main(swapped_coeffs, p.t, p.r);
      if (!(std::abs(a - b) <= 1e-12 * std::max(1.0, a))) {
        fail(check, "violated: bound_main invariance under part swap");
        break;
      }
    }
    checks.push_back(check);
  }

  bool all_passed = true;
  json report;
  report["model"] = model_cfg;
  report["norm"] = norm_name;
  json checks_json = json::array();
  for (const VerifyCheck& check : checks) {
    all_passed = all_passed && check.passed;
    std::cout << (check.passed ? "PASS" : "FAIL") << " " << check.name;
    if (!check.detail.empty()) std::cout << " -- " << check.detail;
    std::cout << "\n";
    checks_json.push_back(
        {{"name", check.name}, {"passed", check.passed}, {"detail", check.detail}});
  }
  report["checks"] = checks_json;
  report["all_passed"] = all_passed;
  if (!json_path.empty()) write_text_file(json_path, report.dump(2) + "\n");
  return all_passed ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------
// fit

int cmd_fit(const std::vector<std::string>& csv_paths,
            const std::vector<std::string>& meta_paths, const std::string& out_path) {
  if (csv_paths.empty()) throw InputError("fit needs at least one CSV");
  std::vector<ErrorRecord> records;
  std::optional<BoundCoefficients> coeffs;
  for (std::size_t i = 0; i < csv_paths.size(); ++i) {
    const auto rows = records_from_csv(read_text_file(csv_paths[i]));
    records.insert(records.end(), rows.begin(), rows.end());
    const std::string meta_path =
        i < meta_paths.size() ? meta_paths[i] : csv_paths[i] + ".meta.json";
    const json meta = json::parse(read_text_file(meta_path));
    const BoundCoefficients c = coefficients_from_json(meta.at("coefficients"));
    if (!coeffs) {
      coeffs = c;
    } else {
      auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
      };
      if (!close(coeffs->c1, c.c1) || !close(coeffs->c2, c.c2) ||
          !close(coeffs->c3, c.c3) || !close(coeffs->clamp, c.clamp))
        throw InputError(
            "CSV inputs have inconsistent coefficients: joint fit requires one model");
    }
  }

  const FitResult fit = fit_alpha_beta(records, *coeffs);
  json out = fit_result_to_json(fit);
  out["coefficients"] = coefficients_to_json(*coeffs);
  out["csv_inputs"] = csv_paths;
  std::cout << out.dump(2) << "\n";
  if (fit.degenerate)
    std::cerr << "warning: degenerate fit (" << fit.degenerate_reason << ")\n";
  if (!out_path.empty()) write_text_file(out_path, out.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// plot

int cmd_plot(const std::string& csv_path, const std::string& out_path,
             const std::string& fit_path, const std::string& title, int order) {
  const auto records = records_from_csv(read_text_file(csv_path));

  std::vector<const ErrorRecord*> selected;
  for (const ErrorRecord& rec : records)
    if (rec.order == order) selected.push_back(&rec);
  if (selected.size() < 2)
    throw InputError("CSV has fewer than 2 records of order " + std::to_string(order));

  bool t_varies = false;
  for (const ErrorRecord* rec : selected)
    if (rec->t != selected.front()->t) t_varies = true;
  auto free_var = [&](const ErrorRecord* rec) {
    return t_varies ? rec->t : static_cast<double>(rec->r);
  };
  std::sort(selected.begin(), selected.end(),
            [&](const ErrorRecord* a, const ErrorRecord* b) {
              return free_var(a) < free_var(b);
            });

  auto series_of = [&](const std::string& name, const std::string& color,
                       const std::string& dash, bool markers, auto getter) {
    PlotSeries s{name, color, dash, markers, {}};
    for (const ErrorRecord* rec : selected)
      s.points.push_back({free_var(rec), getter(rec)});
    return s;
  };

  std::vector<PlotSeries> series;
  series.push_back(series_of("empirical", "#1f77b4", "", true,
                             [](const ErrorRecord* r) { return r->empirical; }));
  series.push_back(series_of("bound_main", "#d62728", "", false,
                             [](const ErrorRecord* r) { return r->bound_main; }));
  series.push_back(series_of("bound_pf1", "#2ca02c", "6,3", false,
                             [](const ErrorRecord* r) { return r->bound_pf1; }));
  series.push_back(series_of("term_boundary", "#9467bd", "2,3", false,
                             [](const ErrorRecord* r) { return r->term_boundary; }));
  series.push_back(series_of("term_bulk", "#8c564b", "2,3", false,
                             [](const ErrorRecord* r) { return r->term_bulk; }));
  series.push_back(series_of("bound_pf2", "#e377c2", "8,3,2,3", false,
                             [](const ErrorRecord* r) { return r->bound_pf2; }));

  if (!fit_path.empty()) {
    const json fit_json = json::parse(read_text_file(fit_path));
    const FitResult fit = fit_result_from_json(fit_json);
    if (!fit_json.contains("coefficients"))
      throw InputError("fit JSON lacks 'coefficients'; regenerate with pflab fit");
    const BoundCoefficients coeffs = coefficients_from_json(fit_json.at("coefficients"));
    PlotSeries s{"fit", "#ff7f0e", "4,2", false, {}};
    for (const ErrorRecord* rec : selected)
      s.points.push_back(
          {free_var(rec), fit_model_value(coeffs, fit.alpha, fit.beta, rec->t, rec->r)});
    series.push_back(std::move(s));
  }

  const std::string x_label = t_varies ? "t" : "r";
  const std::string chart_title = title.empty() ? "Trotter error vs " + x_label : title;
  write_text_file(out_path, render_loglog_svg(chart_title, x_label, "error", series));
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pflab -- product-formula Trotter error toolkit"};
  app.require_subcommand(1);

  auto* sweep =
      app.add_subcommand("sweep", "run an error-scaling sweep, write CSV + metadata");
  SweepCli sweep_cli;
  add_model_options(sweep, sweep_cli.model);
  sweep_cli.opt_kind =
      sweep->add_option("--kind", sweep_cli.kind, "fixed_r | fixed_t | fixed_dt");
  sweep_cli.opt_r = sweep->add_option("--r", sweep_cli.fixed_r, "fixed timestep count");
  sweep_cli.opt_t = sweep->add_option("--t", sweep_cli.fixed_t, "fixed total time");
  sweep_cli.opt_dt = sweep->add_option("--dt", sweep_cli.fixed_dt, "fixed step length");
  sweep_cli.opt_grid = sweep->add_option("--grid-log", sweep_cli.grid_log,
                                         "log grid var:lo:hi:count, e.g. t:0.1:1000:40");
  sweep_cli.opt_orders =
      sweep->add_option("--orders", sweep_cli.orders, "product-formula orders, e.g. 1,2");
  sweep_cli.opt_norm = sweep->add_option("--norm", sweep_cli.norm, "spectral | frobenius");
  sweep_cli.opt_threads = sweep->add_option(
      "--threads", sweep_cli.threads, "worker threads (default $PFLAB_THREADS or 1)");
  sweep_cli.opt_out = sweep->add_option("--out", sweep_cli.out, "output CSV path");
  sweep->add_option("--meta", sweep_cli.meta, "metadata path (default <out>.meta.json)");

  auto* model_cmd = app.add_subcommand("model", "build a model and print its summary");
  ModelCli model_cli;
  add_model_options(model_cmd, model_cli);
  std::string model_norm = "spectral", model_out;
  model_cmd->add_option("--norm", model_norm, "spectral | frobenius");
  model_cmd->add_option("--out", model_out, "also write the JSON summary here");

  auto* verify = app.add_subcommand("verify", "check the exact identities and bounds");
  ModelCli verify_cli;
  add_model_options(verify, verify_cli);
  std::string verify_norm = "spectral", verify_json;
  double verify_scale_c2 = 1.0;
  verify->add_option("--norm", verify_norm, "spectral | frobenius");
  verify->add_option("--json", verify_json, "write the JSON report here");
  verify
      ->add_option("--test-scale-c2", verify_scale_c2,
                   "scale C2 before checking (negative-control test hook)")
      ->group("");

  auto* fit = app.add_subcommand("fit", "fit alpha/beta to one or more sweep CSVs");
  std::vector<std::string> fit_csvs, fit_metas;
  std::string fit_out;
  fit->add_option("csv", fit_csvs, "input CSV file(s)")->required();
  fit->add_option("--meta", fit_metas, "metadata path per CSV (default <csv>.meta.json)");
  fit->add_option("--out", fit_out, "output JSON path");

  auto* plot = app.add_subcommand("plot", "render a log-log SVG chart from a sweep CSV");
  std::string plot_csv, plot_out, plot_fit, plot_title;
  int plot_order = 1;
  plot->add_option("--csv", plot_csv, "input CSV")->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_option("--fit", plot_fit, "fit JSON to overlay");
  plot->add_option("--title", plot_title, "chart title");
  plot->add_option("--order", plot_order, "which PF order to plot (1 or 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(sweep_cli);
    if (model_cmd->parsed()) return cmd_model(model_cli, model_norm, model_out);
    if (verify->parsed())
      return cmd_verify(verify_cli, verify_norm, verify_json, verify_scale_c2);
    if (fit->parsed()) return cmd_fit(fit_csvs, fit_metas, fit_out);
    if (plot->parsed())
      return cmd_plot(plot_csv, plot_out, plot_fit, plot_title, plot_order);
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
