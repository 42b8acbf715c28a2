#include "pflab/models.hpp"

#include <random>

namespace pflab {

namespace {

void add_bond(PauliSum& part, int n, int j) {
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    PauliString s(n);
    s.set(j, axis).set(j + 1, axis);
    part.add_term(s, 1.0);
  }
}

PauliSum heisenberg_part(int n, std::span<const double> fields, int parity) {
  PauliSum part(n);
  for (int j = parity; j <= n - 2; j += 2) add_bond(part, n, j);
  for (int j = parity; j <= n - 1; j += 2)
    if (fields[static_cast<std::size_t>(j)] != 0.0)
      part.add_term(PauliString::single(n, j, Axis::Z),
                    fields[static_cast<std::size_t>(j)]);
  return part;
}

}  // namespace

std::vector<double> sample_disorder(const DisorderSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::vector<double> values(static_cast<std::size_t>(spec.n));
  for (double& v : values) {
    // Top 53 bits -> [0,1) -> [-1,1); avoids distribution objects so the
    // stream is identical on every implementation.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = 2.0 * u - 1.0;
  }
  return values;
}

TwoPartHamiltonian heisenberg_1d(int n, std::span<const double> fields) {
  if (n < 2) throw InputError("heisenberg_1d needs n >= 2");
  if (static_cast<int>(fields.size()) != n)
    throw InputError("heisenberg_1d: fields has " + std::to_string(fields.size()) +
                     " entries, expected " + std::to_string(n));
  return {heisenberg_part(n, fields, 0), heisenberg_part(n, fields, 1), n,
          "heisenberg1d n=" + std::to_string(n),
          std::vector<double>(fields.begin(), fields.end())};
}

TwoPartHamiltonian heisenberg_1d_seeded(int n, std::uint64_t seed) {
  auto fields = sample_disorder({seed, n});
  auto model = heisenberg_1d(n, fields);
  model.label = "heisenberg1d n=" + std::to_string(n) + " seed=" + std::to_string(seed);
  return model;
}

TwoPartHamiltonian tfim_1d(int n, std::span<const ZZCoupling> couplings,
                           std::span<const double> transverse_fields) {
  if (n < 1) throw InputError("tfim_1d needs n >= 1");
  if (static_cast<int>(transverse_fields.size()) != n)
    throw InputError("tfim_1d: fields has " + std::to_string(transverse_fields.size()) +
                     " entries, expected " + std::to_string(n));
  TwoPartHamiltonian model{PauliSum(n), PauliSum(n), n,
                           "tfim1d n=" + std::to_string(n), std::nullopt};
  for (const auto& c : couplings) {
    if (c.i < 0 || c.i >= n || c.j < 0 || c.j >= n || c.i == c.j)
      throw InputError("tfim_1d: coupling (" + std::to_string(c.i) + "," +
                       std::to_string(c.j) + ") out of range for n=" + std::to_string(n));
    PauliString s(n);
    s.set(c.i, Axis::Z).set(c.j, Axis::Z);
    model.h1.add_term(s, c.strength);
  }
  for (int j = 0; j < n; ++j)
    if (transverse_fields[static_cast<std::size_t>(j)] != 0.0)
      model.h2.add_term(PauliString::single(n, j, Axis::X),
                        transverse_fields[static_cast<std::size_t>(j)]);
  return model;
}

TwoPartHamiltonian tfim_chain(int n, double coupling, double field) {
  std::vector<ZZCoupling> couplings;
  for (int j = 0; j + 1 < n; ++j) couplings.push_back({j, j + 1, coupling});
  std::vector<double> fields(static_cast<std::size_t>(n), field);
  auto model = tfim_1d(n, couplings, fields);
  model.label = "tfim1d chain n=" + std::to_string(n);
  return model;
}

TwoPartHamiltonian custom_model(int n, std::span<const std::string> h1_terms,
                                std::span<const std::string> h2_terms) {
  if (n < 1) throw InputError("custom_model needs n >= 1");
  TwoPartHamiltonian model{PauliSum(n), PauliSum(n), n,
                           "custom n=" + std::to_string(n), std::nullopt};
  auto fill = [n](PauliSum& part, std::span<const std::string> terms) {
    for (const std::string& text : terms) {
      ParsedTerm term = parse_real_term(text);
      if (term.string.qubits() != n)
        throw InputError("term '" + text + "' has " +
                         std::to_string(term.string.qubits()) + " qubits, expected " +
                         std::to_string(n));
      part.add_term(term.string, term.coefficient);
    }
  };
  fill(model.h1, h1_terms);
  fill(model.h2, h2_terms);
  return model;
}

TwoPartHamiltonian model_from_json(const nlohmann::json& config) {
  if (!config.is_object()) throw InputError("model config must be a JSON object");
  if (!config.contains("type")) throw InputError("model config missing field 'type'");
  const std::string type = config.at("type").get<std::string>();
  if (!config.contains("n")) throw InputError("model config missing field 'n'");
  const int n = config.at("n").get<int>();

  if (type == "heisenberg1d") {
    std::vector<double> fields;
    std::optional<std::uint64_t> seed;
    if (config.contains("fields")) {
      fields = config.at("fields").get<std::vector<double>>();
    } else if (config.contains("seed")) {
      seed = config.at("seed").get<std::uint64_t>();
      fields = sample_disorder({*seed, n});
    } else {
      throw InputError("heisenberg1d config needs 'seed' or 'fields'");
    }
    auto model = heisenberg_1d(n, fields);
    if (seed) model.label += " seed=" + std::to_string(*seed);
    return model;
  }
  if (type == "tfim1d") {
    if (config.contains("chain_coupling") || config.contains("chain_field")) {
      const double coupling = config.value("chain_coupling", 1.0);
      const double field = config.value("chain_field", 1.0);
      return tfim_chain(n, coupling, field);
    }
    std::vector<ZZCoupling> couplings;
    if (config.contains("couplings"))
      for (const auto& entry : config.at("couplings")) {
        if (!entry.is_array() || entry.size() != 3)
          throw InputError("tfim1d coupling entries must be [i, j, strength]");
        couplings.push_back({entry[0].get<int>(), entry[1].get<int>(),
                             entry[2].get<double>()});
      }
    std::vector<double> fields(static_cast<std::size_t>(n), 0.0);
    if (config.contains("fields")) fields = config.at("fields").get<std::vector<double>>();
    return tfim_1d(n, couplings, fields);
  }
  if (type == "custom") {
    std::vector<std::string> h1_terms, h2_terms;
    if (config.contains("h1")) h1_terms = config.at("h1").get<std::vector<std::string>>();
    if (config.contains("h2")) h2_terms = config.at("h2").get<std::vector<std::string>>();
    return custom_model(n, h1_terms, h2_terms);
  }
  throw InputError("unknown model type '" + type + "'");
}

}  // namespace pflab
