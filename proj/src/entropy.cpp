#include "pnl/entropy.hpp"

#include "parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pnl {

void EstimatorConfig::validate() const {
  if (samples < 1 || restarts < 0 || max_iters < 1 || !(step_tol > 0.0))
    throw std::invalid_argument("estimator config: samples, max_iters and step_tol must be positive");
}

namespace {

// Eigenvalue floor for the functional calculus inside gradients (log and
// negative powers are singular at zero).
constexpr double kGradientFloor = 1e-14;
// Eigenvalues of unit-trace operators at or below this are solver noise.
constexpr double kEigenvalueNoise = 1e-13;

void require_above_one(RenyiOrder p, const char* what) {
  if (!(p.value() > 1.0)) throw std::domain_error(std::string(what) + ": requires p > 1");
}

}  // namespace

double renyi_entropy(const RealVector& probabilities, RenyiOrder p) {
  if (probabilities.size() == 0) throw std::invalid_argument("renyi_entropy: empty spectrum");
  if (probabilities.minCoeff() < -kPsdTol) throw NumericalError("renyi_entropy: negative probability");
  const RealVector lam = probabilities.cwiseMax(0.0);
  if (std::abs(lam.sum() - 1.0) > 1e-8) throw std::invalid_argument("renyi_entropy: spectrum does not sum to 1");

  if (p.is_infinite()) return -std::log(lam.maxCoeff());
  if (p.is_one()) {
    double h = 0.0;
    for (Index i = 0; i < lam.size(); ++i)
      if (lam(i) > 0.0) h -= lam(i) * std::log(lam(i));
    return h;
  }
  const double q = p.value();
  double acc = 0.0;
  for (Index i = 0; i < lam.size(); ++i)
    if (lam(i) > 0.0) acc += std::pow(lam(i), q);
  return std::log(acc) / (1.0 - q);
}

double renyi_entropy(const Spectrum& spec, RenyiOrder p) {
  RealVector lam = spec.values();
  for (Index i = 0; i < lam.size(); ++i)
    if (lam(i) <= kEigenvalueNoise) lam(i) = 0.0;
  return renyi_entropy(lam, p);
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

double max_p_norm_from_entropy(double hmin, RenyiOrder p) {
  if (p.is_one()) throw std::domain_error("max_p_norm_from_entropy: undefined at p = 1");
  if (p.is_infinite()) return std::exp(-hmin);
  const double q = p.value();
  return std::exp(hmin * (1.0 - q) / q);
}

double entropy_from_max_p_norm(double nu, RenyiOrder p) {
  if (p.is_one()) throw std::domain_error("entropy_from_max_p_norm: undefined at p = 1");
  if (!(nu > 0.0)) throw std::domain_error("entropy_from_max_p_norm: nu must be positive");
  if (p.is_infinite()) return -std::log(nu);
  const double q = p.value();
  return q / (1.0 - q) * std::log(nu);
}

// ------------------------------------------------------- min output entropy

double output_entropy(const Channel& ch, const Vector& psi, RenyiOrder p) {
  return renyi_entropy(eigen_spectrum_unchecked(apply_pure(ch, psi)), p);
}

Vector output_entropy_gradient(const Channel& ch, const Vector& psi, RenyiOrder p) {
  const HermitianEigen eig = hermitian_eigen(apply_pure(ch, psi));
  const RealVector lam = eig.values.cwiseMax(0.0);
  const Index n = lam.size();
  RealVector f(n);
  double scale = 2.0;
  if (p.is_infinite()) {
    f.setZero();
    f(0) = 1.0;
    scale = -2.0 / std::max(lam(0), kGradientFloor);
  } else if (p.is_one()) {
    for (Index i = 0; i < n; ++i) f(i) = -(std::log(std::max(lam(i), kGradientFloor)) + 1.0);
  } else {
    const double q = p.value();
    double trace_pow = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (q < 1.0 && lam(i) <= kEigenvalueNoise) {
        f(i) = 0.0;  // treated as an exact zero, as in renyi_entropy
        continue;
      }
      f(i) = std::pow(std::max(lam(i), kGradientFloor), q - 1.0);
      if (lam(i) > kEigenvalueNoise) trace_pow += std::pow(lam(i), q);
    }
    scale = 2.0 * q / ((1.0 - q) * trace_pow);
  }
  const Matrix fx = eig.vectors * f.asDiagonal() * eig.vectors.adjoint();
  return scale * adjoint_apply(ch, fx, psi);
}

namespace {

struct RestartResult {
  double value;
  Vector psi;
  std::vector<IterationLog> trace;
};

RestartResult descend(const Channel& ch, RenyiOrder p, const EstimatorConfig& cfg, int restart, Vector psi) {
  RestartResult res{output_entropy(ch, psi, p), psi, {}};
  double t = 0.1;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Vector g = output_entropy_gradient(ch, res.psi, p);
    const Vector rg = g - (res.psi.dot(g)).real() * res.psi;  // tangent component
    const double gn = rg.norm();
    if (gn < cfg.step_tol) break;

    bool accepted = false;
    Vector cand;
    double cand_value = 0.0;
    for (int bt = 0; bt < 50; ++bt) {
      cand = (res.psi - t * rg).normalized();
      cand_value = output_entropy(ch, cand, p);
      if (cand_value <= res.value - 1e-4 * t * gn * gn) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    const double improvement = res.value - cand_value;
    res.psi = std::move(cand);
    res.value = cand_value;
    res.trace.push_back({restart, it, res.value, t, gn});
    if (improvement < cfg.step_tol) break;
    t = std::min(2.0 * t, 10.0);
  }
  return res;
}

}  // namespace

MinEntropyEstimate min_output_entropy_estimate(const Channel& ch, RenyiOrder p, const EstimatorConfig& cfg) {
  cfg.validate();
  const Index dim = input_dim(ch);

  SeededRng sampler(cfg.master_seed, cfg.stream_base);
  Vector best_psi;
  double sampling_best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < cfg.samples; ++s) {
    Vector psi = random_pure_state(sampler, dim).amplitudes();
    const double v = output_entropy(ch, psi, p);
    if (v < sampling_best) {
      sampling_best = v;
      best_psi = std::move(psi);
    }
  }

  const std::vector<RestartResult> runs = detail::parallel_map<RestartResult>(cfg.restarts, [&](int r) {
    Vector start = best_psi;
    if (r > 0) {
      SeededRng rng(cfg.master_seed, cfg.stream_base + 1 + static_cast<std::uint64_t>(r));
      start = random_pure_state(rng, dim).amplitudes();
    }
    return descend(ch, p, cfg, r, std::move(start));
  });

  MinEntropyEstimate est{sampling_best, sampling_best, std::numeric_limits<double>::infinity(),
                         PureState::normalized(best_psi), {}};
  const RestartResult* winner = nullptr;
  for (const RestartResult& run : runs) {
    est.trace.insert(est.trace.end(), run.trace.begin(), run.trace.end());
    if (run.value < est.optimizer_hmin) {
      est.optimizer_hmin = run.value;
      winner = &run;
    }
  }
  if (winner != nullptr && winner->value < est.hmin_hat) {
    est.hmin_hat = winner->value;
    est.argmin = PureState::normalized(winner->psi);
  }
  return est;
}

// ----------------------------------------------------------------- grouping

GroupingDecomposition grouping_decomposition(const Spectrum& spec) {
  const RealVector lam = spec.clamped();
  const double l1 = lam(0);
  if (l1 >= 1.0 || lam.size() == 1) return {l1, 0.0, 0.0, 0.0};
  const RealVector tail = lam.tail(lam.size() - 1) / (1.0 - l1);
  double tail_h = 0.0;
  for (Index i = 0; i < tail.size(); ++i)
    if (tail(i) > 0.0) tail_h -= tail(i) * std::log(tail(i));
  const double h = binary_entropy(l1);
  return {l1, h, tail_h, h + (1.0 - l1) * tail_h};
}

// ------------------------------------------------------------------- bounds

SubspaceBound subspace_dimension_bound(RenyiOrder p, BipartiteDims dims, const BoundsParams& bp) {
  require_above_one(p, "subspace_dimension_bound");
  if (dims.a < 2 || dims.a > dims.b) throw DimensionError("subspace_dimension_bound: requires 2 <= dimA <= dimB");
  if (!(bp.alpha > 0.0) || !(bp.delta > 0.0 && bp.delta < 1.0) || !(bp.c > 0.0))
    throw std::invalid_argument("subspace_dimension_bound: need alpha > 0, 0 < delta < 1, c > 0");

  const double inv_p = p.is_infinite() ? 0.0 : 1.0 / p.value();
  const double a = static_cast<double>(dims.a);
  const double b = static_cast<double>(dims.b);
  const double shrink = (1.0 - inv_p) * (1.0 - inv_p);
  const double exponent = shrink * bp.alpha * bp.alpha * std::pow(a, inv_p) * b;
  const double net_log = std::log(5.0 / bp.delta);

  SubspaceBound out{};
  out.dim_s_real = bp.c / 4.0 * exponent / net_log;
  out.dim_s = static_cast<long long>(std::floor(out.dim_s_real));
  out.beta = bp.gamma * std::sqrt(a / b);
  out.log_failure_prob = std::log(2.0) + 2.0 * static_cast<double>(out.dim_s) * net_log - bp.c * exponent;
  out.failure_prob_bound = std::exp(out.log_failure_prob);
  out.entropy_floor = std::log(a) - bp.alpha - out.beta + std::log(1.0 - bp.delta);
  return out;
}

double lipschitz_bound(RenyiOrder p, Index dim_a) {
  require_above_one(p, "lipschitz_bound");
  if (dim_a < 1) throw DimensionError("lipschitz_bound: dimA must be >= 1");
  const double a = static_cast<double>(dim_a);
  if (p.is_infinite()) return 2.0 * std::sqrt(a);
  const double q = p.value();
  return 2.0 * q / (q - 1.0) * std::pow(a, 0.5 - 0.5 / q);
}

double product_output_entropy_bound(RenyiOrder p, BipartiteDims dims, Index dim_s) {
  require_above_one(p, "product_output_entropy_bound");
  if (dim_s < 1 || dim_s > dims.total()) throw DimensionError("product_output_entropy_bound: dimS out of range");
  const double ratio = static_cast<double>(dims.total()) / static_cast<double>(dim_s);
  if (p.is_infinite()) return std::log(ratio);
  const double q = p.value();
  return q / (q - 1.0) * std::log(ratio);
}

double randomizing_p_norm_bound(double epsilon, Index d, RenyiOrder p) {
  require_above_one(p, "randomizing_p_norm_bound");
  if (d < 1) throw DimensionError("randomizing_p_norm_bound: d must be >= 1");
  if (!(epsilon >= 0.0)) throw std::domain_error("randomizing_p_norm_bound: epsilon must be >= 0");
  const double base = (1.0 + epsilon) / static_cast<double>(d);
  if (p.is_infinite()) return base;
  return std::pow(base, 1.0 - 1.0 / p.value());
}

}  // namespace pnl
