#pragma once

#include <string>

#include "pflab/common.hpp"
#include "pflab/pauli.hpp"

namespace pflab {

enum class NormKind { spectral, frobenius };

std::string norm_kind_name(NormKind kind);
NormKind norm_kind_from_name(const std::string& name);

/// Largest singular value.
///
/// Hermitian and anti-Hermitian inputs take the max-|eigenvalue| route; other
/// matrices go through sigma_max(M) = sqrt(lambda_max(M^dag M)). Small
/// dimensions use dense solvers, large ones a Lanczos iteration with full
/// reorthogonalization (relative tolerance ~1e-12, dense fallback if it
/// stalls).
double spectral_norm(const DenseMatrix& m);

/// Dispatches on the configured norm.
double matrix_norm(const DenseMatrix& m, NormKind kind);

/// Norm of a densified PauliSum; empty sums short-circuit to 0.
double sum_norm(const PauliSum& a, NormKind kind, int qubit_cap = kDenseQubitCap);

/// ||I|| for the given norm at dimension dim (1 spectral, sqrt(dim) Frobenius).
double identity_norm(Eigen::Index dim, NormKind kind);

}  // namespace pflab
