#include "pnl/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace pnl {

void check_dense_size(Index rows, Index cols, const char* what) {
  if (rows < 0 || cols < 0) throw DimensionError(std::string(what) + ": negative dimension");
  if (rows != 0 && cols > kMaxDenseEntries / rows) {
    std::ostringstream msg;
    msg << what << ": " << rows << " x " << cols << " exceeds the dense size limit of "
        << kMaxDenseEntries << " entries";
    throw MemoryGuardError(msg.str());
  }
}

RenyiOrder::RenyiOrder(double p) : p_(p) {
  if (!(p > 0.0)) throw std::domain_error("Renyi order must be positive");
}

RenyiOrder RenyiOrder::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse Renyi order '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("cannot parse Renyi order '" + text + "'");
  if (!(p > 0.0)) throw std::invalid_argument("Renyi order must be positive");
  return RenyiOrder(p);
}

std::string RenyiOrder::to_string() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << p_;
  return os.str();
}

BipartiteDims::BipartiteDims(Index dim_a, Index dim_b) : a(dim_a), b(dim_b) {
  if (dim_a < 1 || dim_b < 1) throw DimensionError("bipartite dimensions must be >= 1");
}

PureState PureState::from_amplitudes(Vector amplitudes) {
  if (amplitudes.size() < 1) throw DimensionError("pure state needs dimension >= 1");
  if (std::abs(amplitudes.norm() - 1.0) > kStateTol)
    throw NumericalError("pure state amplitudes are not normalized");
  return PureState(std::move(amplitudes));
}

PureState PureState::normalized(const Vector& v) {
  const double n = v.norm();
  if (v.size() < 1 || !(n > 0.0)) throw DimensionError("cannot normalize a zero vector");
  return PureState(v / n);
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityOperator DensityOperator::from_matrix(Matrix m) {
  if (m.rows() != m.cols() || m.rows() < 1) throw DimensionError("density operator must be square");
  if (hermiticity_defect(m) > kStateTol) throw NumericalError("density operator is not Hermitian");
  if (std::abs(m.trace() - Complex(1.0)) > kStateTol)
    throw NumericalError("density operator does not have unit trace");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol)
    throw NumericalError("density operator has a negative eigenvalue");
  return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::assume_valid(Matrix m) { return DensityOperator(std::move(m)); }

DensityOperator DensityOperator::maximally_mixed(Index d) {
  if (d < 1) throw DimensionError("dimension must be >= 1");
  return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d));
}

Spectrum::Spectrum(RealVector values) : values_(std::move(values)) {
  std::sort(values_.data(), values_.data() + values_.size(), std::greater<>());
  if (values_.size() > 0 && values_(values_.size() - 1) < -kPsdTol)
    throw NumericalError("spectrum has an eigenvalue below -1e-9");
}

RealVector Spectrum::clamped() const { return values_.cwiseMax(0.0); }

Matrix tensor_product(const Matrix& x, const Matrix& y) {
  const Index rows = x.rows() * y.rows();
  const Index cols = x.cols() * y.cols();
  check_dense_size(rows, cols, "tensor_product");
  Matrix out(rows, cols);
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

Vector tensor_product(const Vector& x, const Vector& y) {
  check_dense_size(x.size() * y.size(), 1, "tensor_product");
  Vector out(x.size() * y.size());
  for (Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return out;
}

DensityOperator tensor_product(const DensityOperator& x, const DensityOperator& y) {
  return DensityOperator::assume_valid(tensor_product(x.matrix(), y.matrix()));
}

PureState tensor_product(const PureState& x, const PureState& y) {
  return PureState::normalized(tensor_product(x.amplitudes(), y.amplitudes()));
}

Matrix partial_trace(const Matrix& rho, BipartiteDims dims, Keep keep) {
  if (rho.rows() != dims.total() || rho.cols() != dims.total())
    throw DimensionError("partial_trace: operator dimension does not match dimA * dimB");
  const Index da = dims.a;
  const Index db = dims.b;
  if (keep == Keep::A) {
    Matrix out = Matrix::Zero(da, da);
    for (Index a = 0; a < da; ++a)
      for (Index ap = 0; ap < da; ++ap)
        out(a, ap) = rho.block(a * db, ap * db, db, db).trace();
    return out;
  }
  Matrix out = Matrix::Zero(db, db);
  for (Index a = 0; a < da; ++a) out += rho.block(a * db, a * db, db, db);
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, BipartiteDims dims, Keep keep) {
  return DensityOperator::assume_valid(partial_trace(rho.matrix(), dims, keep));
}

HermitianEigen hermitian_eigen(const Matrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("hermitian_eigen: matrix must be square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (hermiticity_defect(h) > kStateTol * scale)
    throw NumericalError("hermitian_eigen: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_eigen: solver failed");
  // Eigen returns ascending order.
  return {es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
}

Spectrum eigen_spectrum(const DensityOperator& rho) { return eigen_spectrum_unchecked(rho.matrix()); }

Spectrum eigen_spectrum_unchecked(const Matrix& rho) {
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  if (hermiticity_defect(rho) > kStateTol * scale)
    throw NumericalError("eigen_spectrum: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigen_spectrum: solver failed");
  return Spectrum(es.eigenvalues());
}

namespace {

double schatten_from_values(const RealVector& v, RenyiOrder p) {
  if (v.size() == 0) return 0.0;
  if (p.is_infinite()) return v.maxCoeff();
  const double q = p.value();
  double acc = 0.0;
  for (Index i = 0; i < v.size(); ++i)
    if (v(i) > 0.0) acc += std::pow(v(i), q);
  return std::pow(acc, 1.0 / q);
}

}  // namespace

double schatten_norm(const Spectrum& s, RenyiOrder p) {
  return schatten_from_values(s.clamped(), p);
}

double schatten_norm(const Matrix& m, RenyiOrder p) {
  Eigen::BDCSVD<Matrix> svd(m);
  return schatten_from_values(svd.singularValues(), p);
}

PureState make_max_entangled(Index d) {
  if (d < 1) throw DimensionError("make_max_entangled: d must be >= 1");
  check_dense_size(d * d, 1, "make_max_entangled");
  Vector v = Vector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i) v(i * d + i) = amp;
  return PureState::from_amplitudes(std::move(v));
}

Matrix unvec_row_major(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw DimensionError("unvec_row_major: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), cols, rows).transpose();
}

Vector vec_row_major(const Matrix& m) {
  Matrix t = m.transpose();
  return Eigen::Map<const Vector>(t.data(), t.size());
}

}  // namespace pnl
