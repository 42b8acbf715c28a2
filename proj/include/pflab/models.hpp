#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pflab/pauli.hpp"

namespace pflab {

// Identifier of the disorder generator, emitted with every result so runs are
// reproducible across builds: mt19937_64 raw draws mapped to [0,1) via the top
// 53 bits, then affinely to [-1,1).
inline constexpr const char* kDisorderRngId = "mt19937_64/u53/affine[-1,1)/v1";

/// H = h1 + h2 with both parts Hermitian on the same qubit count.
struct TwoPartHamiltonian {
  PauliSum h1;
  PauliSum h2;
  int n = 0;
  std::string label;
  std::optional<std::vector<double>> disorder{};  // per-site fields, when drawn

  PauliSum total() const { return h1 + h2; }
};

struct DisorderSpec {
  std::uint64_t seed = 0;
  int n = 0;
};

/// n values, each uniform on [-1,1), deterministic in (seed, n).
std::vector<double> sample_disorder(const DisorderSpec& spec);

/// Nearest-neighbor Heisenberg chain with local Z fields, open boundaries,
/// split into even-bond and odd-bond parts:
///   h1 = sum_{j even} sigma_j·sigma_{j+1} + sum_{j even} fields[j] Z_j
///   h2 = the same over odd j.
TwoPartHamiltonian heisenberg_1d(int n, std::span<const double> fields);

/// Convenience: draw the fields from (seed, n) first.
TwoPartHamiltonian heisenberg_1d_seeded(int n, std::uint64_t seed);

struct ZZCoupling {
  int i = 0;
  int j = 0;
  double strength = 0.0;
};

/// Transverse-field Ising model on an arbitrary coupling graph:
///   h1 = sum J_ij Z_i Z_j (diagonal), h2 = sum g_j X_j.
TwoPartHamiltonian tfim_1d(int n, std::span<const ZZCoupling> couplings,
                           std::span<const double> transverse_fields);

/// TFIM on an open chain with uniform coupling and field.
TwoPartHamiltonian tfim_chain(int n, double coupling, double field);

/// Two explicit term lists, entries like "1.0 XXI"; coefficients must be real.
TwoPartHamiltonian custom_model(int n, std::span<const std::string> h1_terms,
                                std::span<const std::string> h2_terms);

/// Builds any of the above from a JSON config:
///   {"type":"heisenberg1d","n":10,"seed":7}
///   {"type":"heisenberg1d","n":3,"fields":[0.5,-0.25,1.0]}
///   {"type":"tfim1d","n":3,"couplings":[[0,1,1.0],[1,2,1.0]],"fields":[1,1,1]}
///   {"type":"tfim1d","n":6,"chain_coupling":1.0,"chain_field":1.0}
///   {"type":"custom","n":2,"h1":["1.0 XX"],"h2":["0.5 ZI"]}
TwoPartHamiltonian model_from_json(const nlohmann::json& config);

}  // namespace pflab
