#pragma once

// Dense finite-dimensional complex linear algebra with bipartite structure.
//
// Composite indices are row-major throughout the library: the basis vector
// |a>|b> of A (x) B sits at position a * dimB + b. Partial traces, channel
// conjugation and the maximally entangled state all use this one convention.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace pnl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kStateTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

/// Largest number of complex entries any dense vector or matrix may hold.
inline constexpr Index kMaxDenseEntries = Index{1} << 20;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MemoryGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Raised when a numerical invariant is violated beyond roundoff.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws MemoryGuardError when rows * cols exceeds kMaxDenseEntries.
void check_dense_size(Index rows, Index cols, const char* what);

/// Order p of a Renyi entropy or Schatten norm, p in (0, inf].
class RenyiOrder {
 public:
  explicit RenyiOrder(double p);

  static RenyiOrder von_neumann() { return RenyiOrder(1.0); }
  static RenyiOrder infinity() {
    return RenyiOrder(std::numeric_limits<double>::infinity());
  }
  /// Accepts a decimal number or "inf".
  static RenyiOrder parse(const std::string& text);

  double value() const { return p_; }
  bool is_one() const { return p_ == 1.0; }
  bool is_infinite() const { return p_ == std::numeric_limits<double>::infinity(); }
  std::string to_string() const;

  friend bool operator==(RenyiOrder, RenyiOrder) = default;

 private:
  double p_;
};

struct BipartiteDims {
  Index a;
  Index b;

  BipartiteDims(Index dim_a, Index dim_b);
  Index total() const { return a * b; }
  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

enum class Keep { A, B };

class PureState {
 public:
  /// Validates that amplitudes have unit norm within kStateTol.
  static PureState from_amplitudes(Vector amplitudes);
  /// Rescales a nonzero vector to unit norm.
  static PureState normalized(const Vector& v);

  const Vector& amplitudes() const { return amps_; }
  Index dim() const { return amps_.size(); }
  Matrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  explicit PureState(Vector amps) : amps_(std::move(amps)) {}
  Vector amps_;
};

class DensityOperator {
 public:
  /// Checks Hermiticity, unit trace and numerical positivity.
  static DensityOperator from_matrix(Matrix m);
  /// For library outputs that are density operators by construction.
  static DensityOperator assume_valid(Matrix m);
  static DensityOperator from_pure(const PureState& psi) {
    return DensityOperator(psi.projector());
  }
  static DensityOperator maximally_mixed(Index d);

  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  explicit DensityOperator(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Descending eigenvalues of a density operator.
class Spectrum {
 public:
  /// Sorts descending; throws NumericalError if any value is below -kPsdTol.
  explicit Spectrum(RealVector values);

  const RealVector& values() const { return values_; }
  /// Copy with the roundoff band [-kPsdTol, 0) clamped to zero.
  RealVector clamped() const;
  Index dim() const { return values_.size(); }
  double max() const { return values_.size() ? values_(0) : 0.0; }
  double sum() const { return values_.sum(); }

 private:
  RealVector values_;
};

struct HermitianEigen {
  RealVector values;  // descending
  Matrix vectors;     // column k belongs to values(k)
};

double hermiticity_defect(const Matrix& m);

Matrix tensor_product(const Matrix& x, const Matrix& y);
Vector tensor_product(const Vector& x, const Vector& y);
DensityOperator tensor_product(const DensityOperator& x, const DensityOperator& y);
PureState tensor_product(const PureState& x, const PureState& y);

Matrix partial_trace(const Matrix& rho, BipartiteDims dims, Keep keep);
DensityOperator partial_trace(const DensityOperator& rho, BipartiteDims dims, Keep keep);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
HermitianEigen hermitian_eigen(const Matrix& h);
Spectrum eigen_spectrum(const DensityOperator& rho);
Spectrum eigen_spectrum_unchecked(const Matrix& rho);

double schatten_norm(const Spectrum& s, RenyiOrder p);
/// Uses singular values, so any square or rectangular operator is accepted.
double schatten_norm(const Matrix& m, RenyiOrder p);

/// |Phi> = d^{-1/2} sum_i |i>|i> on d (x) d.
PureState make_max_entangled(Index d);

/// Row-major (a, b) -> a * dim_b + b reshaping of a vector on A (x) B into a
/// dim_a x dim_b coefficient matrix, and its inverse.
Matrix unvec_row_major(const Vector& v, Index rows, Index cols);
Vector vec_row_major(const Matrix& m);

}  // namespace pnl
