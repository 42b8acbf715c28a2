#include "pflab/pauli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

namespace pflab {

namespace {

// Power of i picked up when multiplying two single-qubit Paulis, indexed
// [lhs][rhs]. Cyclic products (XY, YZ, ZX) give +i, anticyclic give -i.
constexpr int kPhasePower[4][4] = {
    {0, 0, 0, 0},  // I·{I,X,Y,Z}
    {0, 0, 1, 3},  // X·{I,X,Y,Z}
    {0, 3, 0, 1},  // Y·{I,X,Y,Z}
    {0, 1, 3, 0},  // Z·{I,X,Y,Z}
};

constexpr Complex kPhaseFromPower[4] = {
    Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(-1.0, 0.0), Complex(0.0, -1.0)};

}  // namespace

char axis_char(Axis axis) {
  switch (axis) {
    case Axis::I: return 'I';
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  return '?';
}

Axis axis_from_char(char c) {
  switch (c) {
    case 'I': return Axis::I;
    case 'X': return Axis::X;
    case 'Y': return Axis::Y;
    case 'Z': return Axis::Z;
    default:
      throw InputError(std::string("invalid Pauli axis character '") + c + "'");
  }
}

PauliString::PauliString(int qubit_count) {
  if (qubit_count < 1) throw InputError("PauliString needs at least one qubit");
  axes_.assign(static_cast<std::size_t>(qubit_count), Axis::I);
}

PauliString::PauliString(std::string_view text) {
  if (text.empty()) throw ParseError("empty Pauli string", 0);
  axes_.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case 'I': axes_.push_back(Axis::I); break;
      case 'X': axes_.push_back(Axis::X); break;
      case 'Y': axes_.push_back(Axis::Y); break;
      case 'Z': axes_.push_back(Axis::Z); break;
      default:
        throw ParseError(std::string("invalid Pauli axis character '") + text[i] + "'", i);
    }
  }
}

PauliString PauliString::single(int qubit_count, int qubit, Axis axis) {
  PauliString s(qubit_count);
  s.set(qubit, axis);
  return s;
}

PauliString& PauliString::set(int qubit, Axis axis) {
  if (qubit < 0 || qubit >= qubits())
    throw InputError("qubit index " + std::to_string(qubit) + " out of range for " +
                     std::to_string(qubits()) + " qubits");
  axes_[static_cast<std::size_t>(qubit)] = axis;
  return *this;
}

bool PauliString::is_identity() const noexcept {
  return std::all_of(axes_.begin(), axes_.end(), [](Axis a) { return a == Axis::I; });
}

int PauliString::weight() const noexcept {
  return static_cast<int>(
      std::count_if(axes_.begin(), axes_.end(), [](Axis a) { return a != Axis::I; }));
}

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  for (int q = 0; q < qubits(); ++q)
    if (axes_[static_cast<std::size_t>(q)] != Axis::I) out.push_back(q);
  return out;
}

std::string PauliString::str() const {
  std::string out;
  out.reserve(axes_.size());
  for (Axis a : axes_) out.push_back(axis_char(a));
  return out;
}

std::size_t PauliString::hash() const noexcept {
  // FNV-1a over the 2-bit axis codes, packed 4 per byte step.
  std::size_t h = 1469598103934665603ull;
  for (Axis a : axes_) {
    h ^= static_cast<std::size_t>(a);
    h *= 1099511628211ull;
  }
  return h;
}

StringProduct multiply_strings(const PauliString& p, const PauliString& q) {
  if (p.qubits() != q.qubits())
    throw InputError("Pauli string length mismatch: " + std::to_string(p.qubits()) +
                     " vs " + std::to_string(q.qubits()));
  PauliString result(p.qubits());
  int phase_power = 0;
  for (int k = 0; k < p.qubits(); ++k) {
    const auto a = static_cast<int>(p.axis(k));
    const auto b = static_cast<int>(q.axis(k));
    phase_power = (phase_power + kPhasePower[a][b]) & 3;
    result.set(k, static_cast<Axis>(a ^ b));
  }
  return {kPhaseFromPower[phase_power], result};
}

bool strings_commute(const PauliString& p, const PauliString& q) {
  if (p.qubits() != q.qubits())
    throw InputError("Pauli string length mismatch: " + std::to_string(p.qubits()) +
                     " vs " + std::to_string(q.qubits()));
  int anticommuting_sites = 0;
  for (int k = 0; k < p.qubits(); ++k) {
    const Axis a = p.axis(k), b = q.axis(k);
    if (a != Axis::I && b != Axis::I && a != b) ++anticommuting_sites;
  }
  return (anticommuting_sites & 1) == 0;
}

PauliSum::PauliSum(int qubit_count) : n_(qubit_count) {
  if (qubit_count < 1) throw InputError("PauliSum needs at least one qubit");
}

Complex PauliSum::coefficient(const PauliString& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

PauliSum& PauliSum::add_term(const PauliString& s, Complex coefficient) {
  if (s.qubits() != n_)
    throw InputError("term has " + std::to_string(s.qubits()) + " qubits, sum has " +
                     std::to_string(n_));
  auto [it, inserted] = terms_.try_emplace(s, coefficient);
  if (!inserted) it->second += coefficient;
  if (std::abs(it->second) < kCoefficientPruneThreshold) terms_.erase(it);
  return *this;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (other.n_ != n_)
    throw InputError("qubit count mismatch: " + std::to_string(n_) + " vs " +
                     std::to_string(other.n_));
  for (const auto& [s, c] : other.terms_) add_term(s, c);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  if (other.n_ != n_)
    throw InputError("qubit count mismatch: " + std::to_string(n_) + " vs " +
                     std::to_string(other.n_));
  for (const auto& [s, c] : other.terms_) add_term(s, -c);
  return *this;
}

PauliSum& PauliSum::operator*=(Complex factor) {
  if (factor == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= factor;
    if (std::abs(it->second) < kCoefficientPruneThreshold)
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& [s, c] : terms_)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

double PauliSum::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [s, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

std::string PauliSum::str() const {
  std::map<std::string, Complex> ordered;
  for (const auto& [s, c] : terms_) ordered.emplace(s.str(), c);
  std::string out;
  for (const auto& [s, c] : ordered) {
    if (!out.empty()) out += " + ";
    if (c.imag() == 0.0) {
      out += format_double(c.real());
    } else {
      out += "(" + format_double(c.real()) + (c.imag() < 0 ? "-" : "+") +
             format_double(std::abs(c.imag())) + "i)";
    }
    out += " " + s;
  }
  return out.empty() ? "0" : out;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  if (a.qubits() != b.qubits())
    throw InputError("qubit count mismatch: " + std::to_string(a.qubits()) + " vs " +
                     std::to_string(b.qubits()));
  PauliSum out(a.qubits());
  for (const auto& [p, ca] : a.terms()) {
    for (const auto& [q, cb] : b.terms()) {
      if (strings_commute(p, q)) continue;  // pq - qp vanishes
      // For anticommuting strings pq = -qp, so [p,q] = 2·phase(pq)·(pq).
      auto prod = multiply_strings(p, q);
      out.add_term(prod.string, 2.0 * ca * cb * prod.phase);
    }
  }
  return out;
}

DenseMatrix to_dense(const PauliString& s) {
  PauliSum sum(s.qubits());
  sum.add_term(s, 1.0);
  return to_dense(sum);
}

DenseMatrix to_dense(const PauliSum& a, int qubit_cap) {
  const int n = a.qubits();
  if (n > qubit_cap)
    throw ResourceError("dense expansion of " + std::to_string(n) +
                        " qubits exceeds the cap of " + std::to_string(qubit_cap));
  const Eigen::Index dim = Eigen::Index(1) << n;
  DenseMatrix m = DenseMatrix::Zero(dim, dim);
  for (const auto& [s, coeff] : a.terms()) {
    // Each string contributes one entry per column: follow the bit of every
    // qubit (qubit 0 = most significant) through its single-qubit action.
    for (Eigen::Index col = 0; col < dim; ++col) {
      Eigen::Index row = 0;
      Complex amp = coeff;
      for (int k = 0; k < n; ++k) {
        const int bit = static_cast<int>((col >> (n - 1 - k)) & 1);
        int row_bit = bit;
        switch (s.axis(k)) {
          case Axis::I: break;
          case Axis::X: row_bit = 1 - bit; break;
          case Axis::Y:
            row_bit = 1 - bit;
            amp *= bit == 0 ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
            break;
          case Axis::Z:
            if (bit == 1) amp = -amp;
            break;
        }
        row = (row << 1) | row_bit;
      }
      m(row, col) += amp;
    }
  }
  return m;
}

ParsedTerm parse_real_term(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i == text.size()) throw ParseError("empty term", i);

  double coefficient = 1.0;
  std::size_t axes_begin = i;
  const char first = text[i];
  if (first == '+' || first == '-' || first == '.' ||
      std::isdigit(static_cast<unsigned char>(first))) {
    const char* begin = text.data() + i;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, coefficient);
    if (ec != std::errc()) throw ParseError("invalid coefficient", i);
    std::size_t after = static_cast<std::size_t>(ptr - text.data());
    // A trailing 'i' or '+...i' means a complex coefficient: not allowed for
    // Hermitian model input.
    if (after < text.size() && !std::isspace(static_cast<unsigned char>(text[after])))
      throw ParseError("coefficient must be a plain real number (Hermitian input)", after);
    i = after;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == text.size()) throw ParseError("missing Pauli string after coefficient", i);
    axes_begin = i;
  }

  std::size_t axes_end = axes_begin;
  while (axes_end < text.size() &&
         !std::isspace(static_cast<unsigned char>(text[axes_end])))
    ++axes_end;
  for (std::size_t k = axes_end; k < text.size(); ++k)
    if (!std::isspace(static_cast<unsigned char>(text[k])))
      throw ParseError("unexpected trailing characters", k);

  std::string_view axes = text.substr(axes_begin, axes_end - axes_begin);
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const char c = axes[k];
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
      throw ParseError(std::string("invalid Pauli axis character '") + c + "'",
                       axes_begin + k);
  }
  return {coefficient, PauliString(axes)};
}

}  // namespace pflab
