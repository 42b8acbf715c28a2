#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "pflab/common.hpp"
#include "pflab/models.hpp"
#include "pflab/norms.hpp"

namespace pflab {

/// Total time t split into r equal timesteps; dt is always derived as t/r.
struct SimulationParams {
  double t = 0.0;
  std::int64_t r = 1;

  double dt() const { return t / static_cast<double>(r); }
};

enum class PfOrder { first, second, second_mirrored };

/// u^r by repeated squaring; r = 0 returns the identity.
DenseMatrix matrix_power(const DenseMatrix& u, std::uint64_t r);

/// Re-unitarization by polar projection (SVD); used only when powering drift
/// must be scrubbed, never by default.
DenseMatrix polar_unitary(const DenseMatrix& m);

/// Eigendecomposition of one Hermitian matrix, reused for every propagator
/// e^{-iHt} built from it.
class SpectralCache {
 public:
  explicit SpectralCache(const DenseMatrix& hermitian, double hermiticity_tol = 1e-10);

  Eigen::Index dim() const { return eigenvectors_.rows(); }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const DenseMatrix& eigenvectors() const { return eigenvectors_; }

  /// V e^{-i lambda t} V^dag.
  DenseMatrix propagator(double t) const;

  /// Eigenvector for the index-th eigenvalue (ascending order).
  DenseVector eigenstate(Eigen::Index index) const;

  /// max-norm of V Lambda V^dag minus the decomposed matrix.
  double reconstruction_error() const { return reconstruction_error_; }

 private:
  RealVector eigenvalues_;
  DenseMatrix eigenvectors_;
  double reconstruction_error_ = 0.0;
};

/// One-shot e^{-iHt}; checks Hermiticity and decomposes every call. Sweeps
/// should use EvolutionContext, which caches the decompositions.
DenseMatrix exact_propagator(const DenseMatrix& hermitian, double t);

struct EvolutionOptions {
  int qubit_cap = kDenseQubitCap;
  // Polar-project pf_unitary results back onto the unitary group. Off by
  // default: drift is reported rather than silently scrubbed out of the
  // measured error.
  bool reunitarize = false;
};

/// Dense side of a two-part model: matrices for H1, H2, H and their cached
/// eigendecompositions. Immutable after construction and safe to share
/// across threads.
class EvolutionContext {
 public:
  explicit EvolutionContext(TwoPartHamiltonian model, int qubit_cap = kDenseQubitCap);
  EvolutionContext(TwoPartHamiltonian model, const EvolutionOptions& options);

  const TwoPartHamiltonian& model() const { return model_; }
  Eigen::Index dim() const { return h_dense_.rows(); }

  const DenseMatrix& h1_dense() const { return h1_dense_; }
  const DenseMatrix& h2_dense() const { return h2_dense_; }
  const DenseMatrix& h_dense() const { return h_dense_; }

  const SpectralCache& part_cache(int part) const;  // part is 1 or 2
  const SpectralCache& total_cache() const { return *eig_h_; }

  /// e^{-iHt} for the full Hamiltonian.
  DenseMatrix exact(double t) const { return eig_h_->propagator(t); }

  /// e^{-i h_part t}.
  DenseMatrix part_propagator(int part, double t) const;

  /// One timestep: first order is e^{-iH2 dt} e^{-iH1 dt} (H1 applied first);
  /// second order is e^{-iH1 dt/2} e^{-iH2 dt} e^{-iH1 dt/2}; the mirrored
  /// variant swaps the roles of H1 and H2.
  DenseMatrix pf_step(PfOrder order, double dt) const;

  /// pf_step(dt)^r via matrix_power.
  DenseMatrix pf_unitary(PfOrder order, const SimulationParams& params) const;

  /// Frobenius norm of U^dag U - I: a cheap deterministic upper bound on the
  /// spectral drift, recorded with every sweep point.
  double unitarity_drift(const DenseMatrix& u) const;

  struct ConjugationResidual {
    double direct = 0.0;    // ||U1 - e^{+iH1 dt/2} U2 e^{-iH1 dt/2}||
    double mirrored = 0.0;  // ||U1 - e^{-iH2 dt/2} U2~ e^{+iH2 dt/2}||
  };

  /// Residuals of the exact identities relating the first-order unitary to
  /// the two second-order regroupings. Zero up to floating point.
  ConjugationResidual conjugation_residual(const SimulationParams& params,
                                           NormKind kind = NormKind::spectral) const;

 private:
  TwoPartHamiltonian model_;
  EvolutionOptions options_;
  DenseMatrix h1_dense_, h2_dense_, h_dense_;
  std::unique_ptr<SpectralCache> eig_h1_, eig_h2_, eig_h_;
};

}  // namespace pflab
