#include "pnl/channels.hpp"

#include <cmath>

namespace pnl {

namespace {

using StridedConstMap = Eigen::Map<const Matrix, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;

struct ExtremeEigen {
  double top;
  double bottom;
  Vector top_vec;
  Vector bottom_vec;
};

ExtremeEigen extreme_eigen(const Matrix& h) {
  HermitianEigen e = hermitian_eigen(h);
  const Index last = e.values.size() - 1;
  return {e.values(0), e.values(last), e.vectors.col(0), e.vectors.col(last)};
}

}  // namespace

// ---------------------------------------------------------------- Isometry

Isometry Isometry::from_matrix(Matrix v) {
  if (v.cols() < 1 || v.rows() < v.cols()) throw DimensionError("isometry must have rows >= cols >= 1");
  Isometry iso(std::move(v));
  if (iso.defect() > kStateTol) throw NumericalError("matrix is not an isometry");
  return iso;
}

double Isometry::defect() const {
  return (v_.adjoint() * v_ - Matrix::Identity(v_.cols(), v_.cols())).cwiseAbs().maxCoeff();
}

// ------------------------------------------------------ StinespringChannel

StinespringChannel::StinespringChannel(Isometry v, BipartiteDims dims) : v_(std::move(v)), dims_(dims) {
  if (v_.out_dim() != dims_.total())
    throw DimensionError("Stinespring isometry output dimension must equal dimA * dimB");
}

Matrix StinespringChannel::apply(const Matrix& rho) const {
  if (rho.rows() != input_dim() || rho.cols() != input_dim())
    throw DimensionError("apply_stinespring: input dimension mismatch");
  const Matrix& v = v_.matrix();
  const Index total = dims_.total();
  Matrix out = Matrix::Zero(dims_.a, dims_.a);
  for (Index b = 0; b < dims_.b; ++b) {
    StridedConstMap k(v.data() + b, dims_.a, input_dim(),
                      Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(total, dims_.b));
    Matrix kr = k * rho;
    out.noalias() += kr * k.adjoint();
  }
  return out;
}

Matrix StinespringChannel::apply_pure(const Vector& psi) const {
  if (psi.size() != input_dim()) throw DimensionError("apply_stinespring: input dimension mismatch");
  const Vector w = v_.matrix() * psi;
  // Column-major dimB x dimA view: wt(b, a) = w[a * dimB + b].
  Eigen::Map<const Matrix> wt(w.data(), dims_.b, dims_.a);
  return wt.transpose() * wt.conjugate();
}

Vector StinespringChannel::adjoint_apply(const Matrix& x, const Vector& psi) const {
  if (psi.size() != input_dim() || x.rows() != dims_.a || x.cols() != dims_.a)
    throw DimensionError("adjoint_apply: dimension mismatch");
  const Vector y = v_.matrix() * psi;
  Eigen::Map<const Matrix> yt(y.data(), dims_.b, dims_.a);
  const Matrix zt = yt * x.transpose();  // (x (x) I) y in the same layout
  Eigen::Map<const Vector> z(zt.data(), zt.size());
  return v_.matrix().adjoint() * z;
}

Matrix StinespringChannel::adjoint(const Matrix& x) const {
  if (x.rows() != dims_.a || x.cols() != dims_.a) throw DimensionError("adjoint: dimension mismatch");
  const Matrix& v = v_.matrix();
  Matrix xv(v.rows(), v.cols());
  for (Index s = 0; s < v.cols(); ++s) {
    Eigen::Map<const Matrix> col(v.col(s).data(), dims_.b, dims_.a);
    const Matrix zt = col * x.transpose();
    xv.col(s) = Eigen::Map<const Vector>(zt.data(), zt.size());
  }
  return v.adjoint() * xv;
}

Matrix StinespringChannel::kraus_rows() const {
  const Matrix& v = v_.matrix();
  Matrix out(v.rows(), v.cols());
  for (Index a = 0; a < dims_.a; ++a)
    for (Index b = 0; b < dims_.b; ++b) out.row(b * dims_.a + a) = v.row(a * dims_.b + b);
  return out;
}

// ---------------------------------------------------- RandomUnitaryChannel

RandomUnitaryChannel::RandomUnitaryChannel(const std::vector<Matrix>& unitaries) {
  if (unitaries.empty()) throw DimensionError("random unitary channel needs n >= 1");
  d_ = unitaries.front().rows();
  n_ = static_cast<Index>(unitaries.size());
  if (d_ < 1) throw DimensionError("random unitary channel needs d >= 1");
  if (n_ > kMaxUnitaryStorage / (d_ * d_)) throw MemoryGuardError("too many unitaries for storage limit");
  stack_.resize(n_ * d_, d_);
  const Matrix id = Matrix::Identity(d_, d_);
  for (Index i = 0; i < n_; ++i) {
    const Matrix& u = unitaries[static_cast<std::size_t>(i)];
    if (u.rows() != d_ || u.cols() != d_) throw DimensionError("unitaries must share one square dimension");
    if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > kStateTol)
      throw NumericalError("channel member is not unitary");
    stack_.middleRows(i * d_, d_) = u;
  }
}

RandomUnitaryChannel RandomUnitaryChannel::haar(SeededRng& rng, Index d, Index n) {
  if (d < 1 || n < 1) throw DimensionError("haar channel needs d >= 1 and n >= 1");
  if (n > kMaxUnitaryStorage / (d * d)) throw MemoryGuardError("too many unitaries for storage limit");
  Matrix stack(n * d, d);
  for (Index i = 0; i < n; ++i) stack.middleRows(i * d, d) = haar_unitary(rng, d);
  return RandomUnitaryChannel(std::move(stack), d, n);
}

RandomUnitaryChannel RandomUnitaryChannel::pauli() {
  const Complex i(0.0, 1.0);
  Matrix id = Matrix::Identity(2, 2);
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  y << 0.0, -i, i, 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  return RandomUnitaryChannel(std::vector<Matrix>{id, x, y, z});
}

Matrix RandomUnitaryChannel::apply(const Matrix& rho) const {
  if (rho.rows() != d_ || rho.cols() != d_) throw DimensionError("apply_random_unitary: dimension mismatch");
  Matrix out = Matrix::Zero(d_, d_);
  for (Index i = 0; i < n_; ++i) {
    const auto u = stack_.middleRows(i * d_, d_);
    Matrix ur = u * rho;
    out.noalias() += ur * u.adjoint();
  }
  return out / static_cast<double>(n_);
}

Matrix RandomUnitaryChannel::apply_pure(const Vector& psi) const {
  if (psi.size() != d_) throw DimensionError("apply_random_unitary: dimension mismatch");
  const Vector stacked = stack_ * psi;
  Eigen::Map<const Matrix> y(stacked.data(), d_, n_);  // column i = V_i psi
  Matrix out = y * y.adjoint();
  return out / static_cast<double>(n_);
}

Matrix RandomUnitaryChannel::adjoint(const Matrix& x) const {
  if (x.rows() != d_ || x.cols() != d_) throw DimensionError("adjoint: dimension mismatch");
  Matrix out = Matrix::Zero(d_, d_);
  for (Index i = 0; i < n_; ++i) {
    const auto u = stack_.middleRows(i * d_, d_);
    Matrix xu = x * u;
    out.noalias() += u.adjoint() * xu;
  }
  return out / static_cast<double>(n_);
}

Vector RandomUnitaryChannel::adjoint_apply(const Matrix& x, const Vector& psi) const {
  if (psi.size() != d_ || x.rows() != d_ || x.cols() != d_)
    throw DimensionError("adjoint_apply: dimension mismatch");
  const Vector stacked = stack_ * psi;
  Eigen::Map<const Matrix> y(stacked.data(), d_, n_);
  const Matrix z = x * y;
  Eigen::Map<const Vector> zv(z.data(), z.size());
  Vector out = stack_.adjoint() * zv;
  return out / static_cast<double>(n_);
}

Matrix RandomUnitaryChannel::kraus_rows() const { return stack_ / std::sqrt(static_cast<double>(n_)); }

RandomUnitaryChannel RandomUnitaryChannel::conjugate() const {
  return RandomUnitaryChannel(stack_.conjugate(), d_, n_);
}

// ------------------------------------------------------------ free helpers

Index input_dim(const Channel& ch) {
  return std::visit([](const auto& c) { return c.input_dim(); }, ch);
}

Index output_dim(const Channel& ch) {
  return std::visit([](const auto& c) { return c.output_dim(); }, ch);
}

Matrix apply_pure(const Channel& ch, const Vector& psi) {
  return std::visit([&](const auto& c) { return c.apply_pure(psi); }, ch);
}

Vector adjoint_apply(const Channel& ch, const Matrix& x, const Vector& psi) {
  return std::visit([&](const auto& c) { return c.adjoint_apply(x, psi); }, ch);
}

DensityOperator apply_random_unitary(const RandomUnitaryChannel& ch, const DensityOperator& rho) {
  return DensityOperator::assume_valid(ch.apply(rho.matrix()));
}

DensityOperator apply_stinespring(const StinespringChannel& ch, const DensityOperator& rho) {
  return DensityOperator::assume_valid(ch.apply(rho.matrix()));
}

DensityOperator apply_channel(const Channel& ch, const DensityOperator& rho) {
  return DensityOperator::assume_valid(
      std::visit([&](const auto& c) { return c.apply(rho.matrix()); }, ch));
}

RandomUnitaryChannel conjugate_channel(const RandomUnitaryChannel& ch) { return ch.conjugate(); }
StinespringChannel conjugate_channel(const StinespringChannel& ch) { return ch.conjugate(); }

Channel conjugate_channel(const Channel& ch) {
  return std::visit([](const auto& c) -> Channel { return c.conjugate(); }, ch);
}

DensityOperator apply_product_to_state(const Channel& ch1, const Channel& ch2, const PureState& psi) {
  const Index s1 = input_dim(ch1);
  const Index s2 = input_dim(ch2);
  const Index a1 = output_dim(ch1);
  const Index a2 = output_dim(ch2);
  if (psi.dim() != s1 * s2) throw DimensionError("apply_product_to_state: input dimension mismatch");
  const Index out = a1 * a2;
  check_dense_size(out, out, "apply_product_to_state output");

  const Matrix r1 = std::visit([](const auto& c) { return c.kraus_rows(); }, ch1);
  const Matrix r2 = std::visit([](const auto& c) { return c.kraus_rows(); }, ch2);
  const Index k1 = r1.rows() / a1;
  const Index k2 = r2.rows() / a2;
  check_dense_size(a1, r2.rows(), "apply_product_to_state chunk");

  const Matrix coeffs = unvec_row_major(psi.amplitudes(), s1, s2);
  const Matrix right = coeffs * r2.transpose();  // s1 x (k2 * a2)

  // Accumulate in (A2, A1) order: the chunk for Kraus index k is then a plain
  // reshape of K_k * Psi * L^T, column l holding vec(K_k Psi L_l^T).
  Matrix swapped = Matrix::Zero(out, out);
  for (Index k = 0; k < k1; ++k) {
    const Matrix t = r1.middleRows(k * a1, a1) * right;  // a1 x (k2 * a2)
    Eigen::Map<const Matrix> z(t.data(), out, k2);
    swapped.noalias() += z * z.adjoint();
  }

  Matrix omega(out, out);
  for (Index x1 = 0; x1 < a1; ++x1)
    for (Index x2 = 0; x2 < a2; ++x2)
      for (Index y1 = 0; y1 < a1; ++y1)
        for (Index y2 = 0; y2 < a2; ++y2)
          omega(x1 * a2 + x2, y1 * a2 + y2) = swapped(x2 * a1 + x1, y2 * a1 + y1);
  return DensityOperator::assume_valid(std::move(omega));
}

double phi_overlap(const RandomUnitaryChannel& ch) {
  const Index d = ch.dim();
  const Index n = ch.count();
  // Columns vec(V_i); the Hilbert-Schmidt Gram matrix Y^dagger Y has entries
  // Tr(V_i^dagger V_j), and ||Y^dagger Y||_F = ||Y Y^dagger||_F.
  Matrix y(d * d, n);
  for (Index i = 0; i < n; ++i) {
    const Matrix u = ch.unitary(i);
    y.col(i) = Eigen::Map<const Vector>(u.data(), u.size());
  }
  double sum_sq = 0.0;
  if (n <= d * d) {
    sum_sq = (y.adjoint() * y).squaredNorm();
  } else {
    sum_sq = (y * y.adjoint()).squaredNorm();
  }
  const double nd = static_cast<double>(n) * static_cast<double>(d);
  return sum_sq / (nd * nd);
}

RandomizingEstimate randomizing_deviation(const RandomUnitaryChannel& ch, const EstimatorConfig& cfg) {
  cfg.validate();
  const Index d = ch.dim();
  const double inv_d = 1.0 / static_cast<double>(d);
  const double dd = static_cast<double>(d);

  auto deviation = [&](const Vector& psi) {
    const ExtremeEigen e = extreme_eigen(ch.apply_pure(psi));
    return dd * std::max(e.top - inv_d, inv_d - e.bottom);
  };

  SeededRng sampler(cfg.master_seed, cfg.stream_base);
  Vector best_psi = random_pure_state(sampler, d).amplitudes();
  double best = deviation(best_psi);
  for (int s = 1; s < cfg.samples; ++s) {
    Vector psi = random_pure_state(sampler, d).amplitudes();
    const double v = deviation(psi);
    if (v > best) {
      best = v;
      best_psi = std::move(psi);
    }
  }
  const double sampled_best = best;

  // Fix the input, take the extreme output eigenvector y, then maximize
  // <y|N(psi)|y> (or minimize it) over psi via the extreme eigenvector of N^*(yy^dagger).
  auto ascend = [&](Vector psi, bool upper) {
    double value = -1.0;
    for (int it = 0; it < cfg.max_iters; ++it) {
      const ExtremeEigen out = extreme_eigen(ch.apply_pure(psi));
      const Vector& y = upper ? out.top_vec : out.bottom_vec;
      const ExtremeEigen in = extreme_eigen(ch.adjoint(y * y.adjoint()));
      psi = upper ? in.top_vec : in.bottom_vec;
      const double next = upper ? dd * (in.top - inv_d) : dd * (inv_d - in.bottom);
      if (it > 0 && next - value < cfg.step_tol) {
        value = std::max(value, next);
        break;
      }
      value = std::max(value, next);
    }
    return psi;
  };

  for (int r = 0; r < cfg.restarts; ++r) {
    Vector start = best_psi;
    if (r > 0) {
      SeededRng rng(cfg.master_seed, cfg.stream_base + 1 + static_cast<std::uint64_t>(r));
      start = random_pure_state(rng, d).amplitudes();
    }
    for (bool upper : {true, false}) {
      Vector psi = ascend(start, upper);
      const double v = deviation(psi);
      if (v > best) {
        best = v;
        best_psi = std::move(psi);
      }
    }
  }
  return {best, PureState::normalized(best_psi), sampled_best};
}

}  // namespace pnl
