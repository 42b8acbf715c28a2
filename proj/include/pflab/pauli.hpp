#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pflab/common.hpp"

namespace pflab {

// Single-qubit Pauli axis. The {I,X,Y,Z} <-> {0,1,2,3} encoding is chosen so
// that the operator part of a product is the XOR of the two codes.
enum class Axis : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char axis_char(Axis axis);
Axis axis_from_char(char c);  // throws InputError on anything but I,X,Y,Z

/// Tensor product of single-qubit Paulis on n qubits.
///
/// Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
/// computational-basis index. Every module in this project shares that
/// convention.
class PauliString {
 public:
  explicit PauliString(int qubit_count);
  explicit PauliString(std::string_view text);  // e.g. "XXIZ"

  static PauliString single(int qubit_count, int qubit, Axis axis);

  int qubits() const noexcept { return static_cast<int>(axes_.size()); }
  Axis axis(int qubit) const { return axes_.at(static_cast<std::size_t>(qubit)); }
  PauliString& set(int qubit, Axis axis);

  bool is_identity() const noexcept;
  int weight() const noexcept;  // number of non-identity factors
  std::vector<int> support() const;

  std::string str() const;
  std::size_t hash() const noexcept;

  bool operator==(const PauliString&) const = default;

 private:
  std::vector<Axis> axes_;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& s) const noexcept { return s.hash(); }
};

struct StringProduct {
  Complex phase;  // one of {1, i, -1, -i}, exact
  PauliString string;
};

/// Product of two equal-length strings: dense(p)·dense(q) = phase · dense(r).
StringProduct multiply_strings(const PauliString& p, const PauliString& q);

/// True iff the two strings commute (even number of anticommuting sites).
bool strings_commute(const PauliString& p, const PauliString& q);

/// Weighted sum of Pauli strings on a fixed qubit count.
///
/// Terms are held in a hash map keyed by the string; arithmetic merges
/// coefficients exactly and drops any whose magnitude falls below
/// kCoefficientPruneThreshold, so massive cancellations in nested commutators
/// collapse to genuinely empty sums.
class PauliSum {
 public:
  using TermMap = std::unordered_map<PauliString, Complex, PauliStringHash>;

  explicit PauliSum(int qubit_count);

  int qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const TermMap& terms() const noexcept { return terms_; }

  Complex coefficient(const PauliString& s) const;

  PauliSum& add_term(const PauliString& s, Complex coefficient);

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(Complex factor);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(Complex c, PauliSum a) { return a *= c; }
  friend PauliSum operator*(PauliSum a, Complex c) { return a *= c; }

  /// All coefficients real within `tol`; such sums densify to Hermitian matrices.
  bool is_hermitian(double tol = kCoefficientPruneThreshold) const;

  double max_abs_coefficient() const;

  /// Terms joined as "coeff AXES", sorted lexicographically by string.
  std::string str() const;

 private:
  int n_;
  TermMap terms_;
};

/// ab - ba, computed symbolically term by term.
PauliSum commutator(const PauliSum& a, const PauliSum& b);

/// Kronecker-product expansion into a 2^n x 2^n matrix (qubit 0 leftmost).
/// Throws ResourceError when the qubit count exceeds `qubit_cap`.
DenseMatrix to_dense(const PauliSum& a, int qubit_cap = kDenseQubitCap);
DenseMatrix to_dense(const PauliString& s);

struct ParsedTerm {
  double coefficient;
  PauliString string;
};

/// Parses "XXIZ" or "-0.25 XXIZ" (real coefficient, whitespace-separated).
/// Complex coefficients are rejected; bad characters raise ParseError with
/// the offending position.
ParsedTerm parse_real_term(std::string_view text);

}  // namespace pflab
