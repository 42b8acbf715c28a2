#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pflab {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Largest qubit count for which dense 2^n x 2^n matrices may be allocated.
inline constexpr int kDenseQubitCap = 14;

// Coefficients with magnitude below this are dropped from PauliSum terms.
inline constexpr double kCoefficientPruneThreshold = 1e-12;

/// Invalid argument supplied by the caller (bad sizes, violated preconditions).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed text input; carries the byte offset of the first bad character.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : InputError(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Request exceeds a resource cap (dense dimension, memory).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

}  // namespace pflab
