#include "pnl/random_ensembles.hpp"

#include "pnl/channels.hpp"

#include <cmath>
#include <numbers>

namespace pnl {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

SeededRng::SeededRng(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(~stream_id))) {}

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex SeededRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Vector gaussian_vector(SeededRng& rng, Index dim) {
  if (dim < 1) throw DimensionError("gaussian_vector: dim must be >= 1");
  check_dense_size(dim, 1, "gaussian_vector");
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return v;
}

PureState random_pure_state(SeededRng& rng, Index dim) {
  return PureState::normalized(gaussian_vector(rng, dim));
}

namespace {

// Ginibre columns filled column by column, so the leading k columns of a
// larger draw coincide with a k-column draw from the same stream.
Matrix ginibre(SeededRng& rng, Index rows, Index cols) {
  check_dense_size(rows, cols, "ginibre");
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

Matrix phase_corrected_q(const Matrix& g) {
  Eigen::HouseholderQR<Matrix> qr(g);
  const Index k = g.cols();
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), k);
  const auto& r = qr.matrixQR();
  for (Index j = 0; j < k; ++j) {
    const Complex rjj = r(j, j);
    const double mod = std::abs(rjj);
    // R has full rank with probability one.
    const Complex phase = mod > 0.0 ? rjj / mod : Complex(1.0);
    q.col(j) *= phase;
  }
  return q;
}

}  // namespace

Matrix haar_unitary(SeededRng& rng, Index d) {
  if (d < 1) throw DimensionError("haar_unitary: d must be >= 1");
  return phase_corrected_q(ginibre(rng, d, d));
}

Isometry random_isometry(SeededRng& rng, Index dim_s, BipartiteDims dims) {
  if (dim_s < 1 || dim_s > dims.total())
    throw DimensionError("random_isometry: dim_s must lie in [1, dimA * dimB]");
  return Isometry::from_matrix(phase_corrected_q(ginibre(rng, dims.total(), dim_s)));
}

}  // namespace pnl
