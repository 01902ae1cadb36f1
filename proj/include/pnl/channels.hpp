#pragma once

#include "pnl/estimator.hpp"
#include "pnl/random_ensembles.hpp"
#include "pnl/tensor_core.hpp"

#include <variant>
#include <vector>

namespace pnl {

/// Total number of complex entries a RandomUnitaryChannel may store.
inline constexpr Index kMaxUnitaryStorage = Index{1} << 24;

class Isometry {
 public:
  /// Throws NumericalError unless V^dagger V = I within kStateTol.
  static Isometry from_matrix(Matrix v);

  const Matrix& matrix() const { return v_; }
  Index in_dim() const { return v_.cols(); }
  Index out_dim() const { return v_.rows(); }
  Isometry conjugate() const { return Isometry(v_.conjugate()); }
  double defect() const;

 private:
  explicit Isometry(Matrix v) : v_(std::move(v)) {}
  Matrix v_;
};

/// N(rho) = Tr_B V rho V^dagger for an isometry V: S -> A (x) B.
class StinespringChannel {
 public:
  StinespringChannel(Isometry v, BipartiteDims dims);

  const Isometry& isometry() const { return v_; }
  BipartiteDims dims() const { return dims_; }
  Index input_dim() const { return v_.in_dim(); }
  Index output_dim() const { return dims_.a; }

  Matrix apply(const Matrix& rho) const;
  Matrix apply_pure(const Vector& psi) const;
  Matrix adjoint(const Matrix& x) const;
  /// N^*(x) psi without forming N^*(x).
  Vector adjoint_apply(const Matrix& x, const Vector& psi) const;

  Index kraus_count() const { return dims_.b; }
  /// All Kraus operators (I (x) <b|) V stacked, row b * dimA + a.
  Matrix kraus_rows() const;

  StinespringChannel conjugate() const { return {v_.conjugate(), dims_}; }

 private:
  Isometry v_;
  BipartiteDims dims_;
};

/// N(rho) = (1/n) sum_i V_i rho V_i^dagger.
class RandomUnitaryChannel {
 public:
  explicit RandomUnitaryChannel(const std::vector<Matrix>& unitaries);

  static RandomUnitaryChannel haar(SeededRng& rng, Index d, Index n);
  /// {I, X, Y, Z} on a qubit.
  static RandomUnitaryChannel pauli();

  Index dim() const { return d_; }
  Index count() const { return n_; }
  Index input_dim() const { return d_; }
  Index output_dim() const { return d_; }
  Matrix unitary(Index i) const { return stack_.middleRows(i * d_, d_); }

  Matrix apply(const Matrix& rho) const;
  Matrix apply_pure(const Vector& psi) const;
  Matrix adjoint(const Matrix& x) const;
  Vector adjoint_apply(const Matrix& x, const Vector& psi) const;

  Index kraus_count() const { return n_; }
  Matrix kraus_rows() const;

  RandomUnitaryChannel conjugate() const;

 private:
  RandomUnitaryChannel(Matrix stack, Index d, Index n) : stack_(std::move(stack)), d_(d), n_(n) {}
  Matrix stack_;  // rows i * d + r hold row r of V_i
  Index d_;
  Index n_;
};

using Channel = std::variant<RandomUnitaryChannel, StinespringChannel>;

Index input_dim(const Channel& ch);
Index output_dim(const Channel& ch);
Matrix apply_pure(const Channel& ch, const Vector& psi);
Vector adjoint_apply(const Channel& ch, const Matrix& x, const Vector& psi);

DensityOperator apply_random_unitary(const RandomUnitaryChannel& ch, const DensityOperator& rho);
DensityOperator apply_stinespring(const StinespringChannel& ch, const DensityOperator& rho);
DensityOperator apply_channel(const Channel& ch, const DensityOperator& rho);

RandomUnitaryChannel conjugate_channel(const RandomUnitaryChannel& ch);
StinespringChannel conjugate_channel(const StinespringChannel& ch);
Channel conjugate_channel(const Channel& ch);

/// (N1 (x) N2)(psi) for psi on S1 (x) S2; output ordered (A1, A2).
/// Never forms a superoperator: it sums over Kraus pairs in chunks of one
/// first-factor Kraus operator at a time.
DensityOperator apply_product_to_state(const Channel& ch1, const Channel& ch2, const PureState& psi);

/// <Phi|(N (x) conj N)(Phi)|Phi> = (1/n^2) sum_ij |Tr(V_j^dagger V_i)|^2 / d^2.
double phi_overlap(const RandomUnitaryChannel& ch);

struct RandomizingEstimate {
  double epsilon_hat;  // lower bound on the true epsilon
  PureState witness;
  double sampled_best;
};

/// Lower bound on sup_rho d * ||N(rho) - I/d||_inf by random pure inputs
/// followed by alternating ascent between input and output eigenvectors.
RandomizingEstimate randomizing_deviation(const RandomUnitaryChannel& ch, const EstimatorConfig& cfg);

}  // namespace pnl
