#include "pflab/evolution.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pflab {

namespace {

DenseMatrix phase_apply(const RealVector& eigenvalues, const DenseMatrix& vectors,
                        double t) {
  // V diag(e^{-i lambda t}) V^dag with the diagonal folded into a column scale.
  DenseVector phases(eigenvalues.size());
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    phases(k) = std::polar(1.0, -eigenvalues(k) * t);
  DenseMatrix scaled = vectors * phases.asDiagonal();
  DenseMatrix out;
  out.noalias() = scaled * vectors.adjoint();
  return out;
}

}  // namespace

DenseMatrix matrix_power(const DenseMatrix& u, std::uint64_t r) {
  if (u.rows() != u.cols()) throw InputError("matrix_power expects a square matrix");
  DenseMatrix result = DenseMatrix::Identity(u.rows(), u.cols());
  if (r == 0) return result;
  DenseMatrix base = u;
  DenseMatrix tmp(u.rows(), u.cols());
  bool result_is_identity = true;
  while (true) {
    if (r & 1) {
      if (result_is_identity) {
        result = base;
        result_is_identity = false;
      } else {
        tmp.noalias() = result * base;
        result.swap(tmp);
      }
    }
    r >>= 1;
    if (r == 0) break;
    tmp.noalias() = base * base;
    base.swap(tmp);
  }
  return result;
}

DenseMatrix polar_unitary(const DenseMatrix& m) {
  Eigen::BDCSVD<DenseMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

SpectralCache::SpectralCache(const DenseMatrix& hermitian, double hermiticity_tol) {
  if (hermitian.rows() != hermitian.cols())
    throw InputError("SpectralCache expects a square matrix");
  const double scale = std::max(1.0, hermitian.cwiseAbs().maxCoeff());
  if ((hermitian - hermitian.adjoint()).cwiseAbs().maxCoeff() > hermiticity_tol * scale)
    throw InputError("SpectralCache: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(hermitian);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
  reconstruction_error_ =
      (eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.adjoint() - hermitian)
          .cwiseAbs()
          .maxCoeff();
}

DenseMatrix SpectralCache::propagator(double t) const {
  return phase_apply(eigenvalues_, eigenvectors_, t);
}

DenseVector SpectralCache::eigenstate(Eigen::Index index) const {
  if (index < 0 || index >= eigenvectors_.cols())
    throw InputError("eigenstate index out of range");
  return eigenvectors_.col(index);
}

DenseMatrix exact_propagator(const DenseMatrix& hermitian, double t) {
  SpectralCache cache(hermitian);
  return cache.propagator(t);
}

EvolutionContext::EvolutionContext(TwoPartHamiltonian model, int qubit_cap)
    : EvolutionContext(std::move(model), EvolutionOptions{qubit_cap, false}) {}

EvolutionContext::EvolutionContext(TwoPartHamiltonian model,
                                   const EvolutionOptions& options)
    : model_(std::move(model)), options_(options) {
  if (!model_.h1.is_hermitian() || !model_.h2.is_hermitian())
    throw InputError("both Hamiltonian parts must be Hermitian (real coefficients)");
  h1_dense_ = to_dense(model_.h1, options_.qubit_cap);
  h2_dense_ = to_dense(model_.h2, options_.qubit_cap);
  h_dense_ = h1_dense_ + h2_dense_;
  eig_h1_ = std::make_unique<SpectralCache>(h1_dense_);
  eig_h2_ = std::make_unique<SpectralCache>(h2_dense_);
  eig_h_ = std::make_unique<SpectralCache>(h_dense_);
}

const SpectralCache& EvolutionContext::part_cache(int part) const {
  if (part == 1) return *eig_h1_;
  if (part == 2) return *eig_h2_;
  throw InputError("part must be 1 or 2");
}

DenseMatrix EvolutionContext::part_propagator(int part, double t) const {
  return part_cache(part).propagator(t);
}

DenseMatrix EvolutionContext::pf_step(PfOrder order, double dt) const {
  if (!std::isfinite(dt)) throw InputError("pf_step: dt must be finite");
  switch (order) {
    case PfOrder::first:
      return part_propagator(2, dt) * part_propagator(1, dt);
    case PfOrder::second: {
      DenseMatrix half = part_propagator(1, dt / 2.0);
      return half * part_propagator(2, dt) * half;
    }
    case PfOrder::second_mirrored: {
      DenseMatrix half = part_propagator(2, dt / 2.0);
      return half * part_propagator(1, dt) * half;
    }
  }
  throw InputError("unknown product-formula order");
}

DenseMatrix EvolutionContext::pf_unitary(PfOrder order, const SimulationParams& params) const {
  if (params.r < 1) throw InputError("pf_unitary: r must be >= 1");
  if (!(params.t >= 0.0) || !std::isfinite(params.t))
    throw InputError("pf_unitary: t must be finite and >= 0");
  DenseMatrix u =
      matrix_power(pf_step(order, params.dt()), static_cast<std::uint64_t>(params.r));
  if (options_.reunitarize) u = polar_unitary(u);
  return u;
}

double EvolutionContext::unitarity_drift(const DenseMatrix& u) const {
  return (u.adjoint() * u - DenseMatrix::Identity(u.rows(), u.cols())).norm();
}

EvolutionContext::ConjugationResidual EvolutionContext::conjugation_residual(
    const SimulationParams& params, NormKind kind) const {
  const double half_dt = params.dt() / 2.0;
  const DenseMatrix u1 = pf_unitary(PfOrder::first, params);
  const DenseMatrix u2 = pf_unitary(PfOrder::second, params);
  const DenseMatrix u2m = pf_unitary(PfOrder::second_mirrored, params);

  // U1 = e^{+iH1 dt/2} U2 e^{-iH1 dt/2}: propagator(-t) supplies the +i sign.
  const DenseMatrix lift1 = part_propagator(1, -half_dt);
  const DenseMatrix conj_direct = lift1 * u2 * lift1.adjoint();
  // U2~ = e^{+iH2 dt/2} U1 e^{-iH2 dt/2}, i.e. U1 = e^{-iH2 dt/2} U2~ e^{+iH2 dt/2}.
  const DenseMatrix lift2 = part_propagator(2, half_dt);
  const DenseMatrix conj_mirrored = lift2 * u2m * lift2.adjoint();

  return {matrix_norm(u1 - conj_direct, kind), matrix_norm(u1 - conj_mirrored, kind)};
}

}  // namespace pflab
