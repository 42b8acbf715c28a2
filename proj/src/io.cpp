#include "pflab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pflab {

namespace {

double parse_double_field(std::string_view field, std::size_t row) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError("bad numeric field '" + std::string(field) + "' in CSV row " +
                     std::to_string(row), row);
  return value;
}

std::int64_t parse_int_field(std::string_view field, std::size_t row) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError("bad integer field '" + std::string(field) + "' in CSV row " +
                     std::to_string(row), row);
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::string records_to_csv(std::span<const ErrorRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ErrorRecord& rec : records) {
    out += std::to_string(rec.n);
    out += ',';
    out += std::to_string(rec.seed);
    out += ',';
    out += format_double(rec.t);
    out += ',';
    out += std::to_string(rec.r);
    out += ',';
    out += format_double(rec.dt);
    out += ',';
    out += std::to_string(rec.order);
    out += ',';
    out += format_double(rec.empirical);
    out += ',';
    out += format_double(rec.bound_pf1);
    out += ',';
    out += format_double(rec.bound_main);
    out += ',';
    out += format_double(rec.term_boundary);
    out += ',';
    out += format_double(rec.term_bulk);
    out += ',';
    out += format_double(rec.bound_pf2);
    out += ',';
    out += format_double(rec.unitarity_drift);
    out += '\n';
  }
  return out;
}

std::vector<ErrorRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV", 0);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw ParseError("unexpected CSV header '" + line + "'", 0);

  std::vector<ErrorRecord> records;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 13)
      throw ParseError("expected 13 fields, got " + std::to_string(fields.size()) +
                       " in CSV row " + std::to_string(row), row);
    ErrorRecord rec;
    rec.n = static_cast<int>(parse_int_field(fields[0], row));
    rec.seed = static_cast<std::uint64_t>(parse_int_field(fields[1], row));
    rec.t = parse_double_field(fields[2], row);
    rec.r = parse_int_field(fields[3], row);
    rec.dt = parse_double_field(fields[4], row);
    rec.order = static_cast<int>(parse_int_field(fields[5], row));
    rec.empirical = parse_double_field(fields[6], row);
    rec.bound_pf1 = parse_double_field(fields[7], row);
    rec.bound_main = parse_double_field(fields[8], row);
    rec.term_boundary = parse_double_field(fields[9], row);
    rec.term_bulk = parse_double_field(fields[10], row);
    rec.bound_pf2 = parse_double_field(fields[11], row);
    rec.unitarity_drift = parse_double_field(fields[12], row);
    records.push_back(rec);
  }
  if (records.empty()) throw ParseError("CSV has no data rows", 0);
  return records;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path.string());
  out << content;
}

nlohmann::json coefficients_to_json(const BoundCoefficients& coeffs) {
  return {{"norm_h1", coeffs.norm_h1},
          {"norm_h2", coeffs.norm_h2},
          {"c1", coeffs.c1},
          {"c2", coeffs.c2},
          {"c3", coeffs.c3},
          {"s", coeffs.s},
          {"norm_kind", norm_kind_name(coeffs.norm_kind)},
          {"clamp", coeffs.clamp}};
}

BoundCoefficients coefficients_from_json(const nlohmann::json& j) {
  BoundCoefficients coeffs;
  coeffs.norm_h1 = j.at("norm_h1").get<double>();
  coeffs.norm_h2 = j.at("norm_h2").get<double>();
  coeffs.c1 = j.at("c1").get<double>();
  coeffs.c2 = j.at("c2").get<double>();
  coeffs.c3 = j.at("c3").get<double>();
  coeffs.s = j.at("s").get<std::array<double, 2>>();
  coeffs.norm_kind = norm_kind_from_name(j.at("norm_kind").get<std::string>());
  coeffs.clamp = j.at("clamp").get<double>();
  return coeffs;
}

nlohmann::json sweep_metadata(const TwoPartHamiltonian& model,
                              const nlohmann::json& effective_config,
                              const SweepSpec& spec, const SweepResult& result) {
  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["config"] = effective_config;
  meta["model"] = {{"label", model.label},
                   {"n", model.n},
                   {"h1", model.h1.str()},
                   {"h2", model.h2.str()}};
  if (model.disorder) meta["model"]["disorder"] = *model.disorder;
  meta["rng"] = kDisorderRngId;
  meta["sweep"] = {{"kind", sweep_kind_name(spec.kind)},
                   {"fixed_value", spec.fixed_value},
                   {"grid", spec.grid},
                   {"orders", spec.orders},
                   {"seed", spec.seed},
                   {"norm_kind", norm_kind_name(spec.norm_kind)}};
  meta["coefficients"] = coefficients_to_json(result.coeffs);
  nlohmann::json failures = nlohmann::json::array();
  for (const PointFailure& f : result.failures)
    failures.push_back({{"grid_index", f.grid_index},
                        {"order", f.order},
                        {"message", f.message}});
  meta["failures"] = failures;
  return meta;
}

nlohmann::json fit_result_to_json(const FitResult& fit) {
  return {{"alpha", fit.alpha},
          {"beta", fit.beta},
          {"residual_log10_rms", fit.residual},
          {"points_used", fit.points_used},
          {"degenerate", fit.degenerate},
          {"degenerate_reason", fit.degenerate_reason}};
}

FitResult fit_result_from_json(const nlohmann::json& j) {
  FitResult fit;
  fit.alpha = j.at("alpha").get<double>();
  fit.beta = j.at("beta").get<double>();
  fit.residual = j.at("residual_log10_rms").get<double>();
  fit.points_used = j.at("points_used").get<int>();
  fit.degenerate = j.at("degenerate").get<bool>();
  fit.degenerate_reason = j.value("degenerate_reason", std::string());
  return fit;
}

}  // namespace pflab
