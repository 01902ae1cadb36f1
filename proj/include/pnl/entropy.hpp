#pragma once

// Renyi entropies, maximal p-norms, minimum output entropy estimation and the
// closed-form bound calculators. All logarithms are natural (nats).

#include "pnl/channels.hpp"
#include "pnl/estimator.hpp"
#include "pnl/tensor_core.hpp"

#include <numbers>
#include <vector>

namespace pnl {

/// H_p of a spectrum: p = 1 is von Neumann, p = inf is -ln(lambda_max).
/// Eigenvalues at or below 1e-13 count as zero; the probability-vector
/// overload takes its input as exact.
double renyi_entropy(const Spectrum& spec, RenyiOrder p);
double renyi_entropy(const RealVector& probabilities, RenyiOrder p);

double binary_entropy(double x);

/// nu_p = exp(hmin (1 - p) / p); throws std::domain_error at p = 1.
double max_p_norm_from_entropy(double hmin, RenyiOrder p);
/// Inverse of max_p_norm_from_entropy.
double entropy_from_max_p_norm(double nu, RenyiOrder p);

struct IterationLog {
  int restart;
  int iteration;
  double value;
  double step;
  double grad_norm;
};

struct MinEntropyEstimate {
  double hmin_hat;        // upper bound on the true minimum
  double sampling_hmin;   // best over uniformly sampled inputs
  double optimizer_hmin;  // best over projected-gradient restarts
  PureState argmin;
  std::vector<IterationLog> trace;
};

/// H_p(N(psi psi^dagger)) for a unit vector psi.
double output_entropy(const Channel& ch, const Vector& psi, RenyiOrder p);

/// Euclidean gradient 2 dH/d(conj psi) of output_entropy, unprojected.
Vector output_entropy_gradient(const Channel& ch, const Vector& psi, RenyiOrder p);

/// Uniform sampling of pure inputs followed by multistart projected gradient
/// descent on the unit sphere with backtracking line search. Restart 0 starts
/// from the best sample; restart r >= 1 from a fresh uniform state drawn from
/// stream stream_base + 1 + r.
MinEntropyEstimate min_output_entropy_estimate(const Channel& ch, RenyiOrder p, const EstimatorConfig& cfg);

struct GroupingDecomposition {
  double lambda1;
  double h_binary;
  double tail_entropy;  // H_1 of the renormalized tail
  double total;
};

/// H_1(lambda) = h(lambda_1) + (1 - lambda_1) H_1(tail / (1 - lambda_1)).
GroupingDecomposition grouping_decomposition(const Spectrum& spec);

struct BoundsParams {
  double alpha = 0.5;
  double beta = 0.0;  // recomputed as gamma * sqrt(dimA / dimB) by subspace_dimension_bound
  double gamma = 3.0;
  double delta = 0.5;
  double c = 1.0 / (72.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi);
};

struct SubspaceBound {
  long long dim_s;            // floor of the printed subspace size formula
  double dim_s_real;          // value before the floor
  double beta;
  double log_failure_prob;    // natural log of the probability bound
  double failure_prob_bound;  // may exceed 1 (vacuous) or overflow to inf
  double entropy_floor;
  bool vacuous() const { return dim_s < 1 || !(failure_prob_bound < 1.0); }
};

/// Subspace size, failure probability and entropy floor for random subspaces
/// of A (x) B whose states all have H_p of the A marginal above the floor.
SubspaceBound subspace_dimension_bound(RenyiOrder p, BipartiteDims dims, const BoundsParams& bp);

/// (2p / (p - 1)) dimA^{1/2 - 1/(2p)}; p = inf gives the limit 2 sqrt(dimA).
double lipschitz_bound(RenyiOrder p, Index dim_a);

/// (p / (p - 1)) ln(dimA dimB / dimS): upper bound on H_p((N (x) conj N)(Phi)).
double product_output_entropy_bound(RenyiOrder p, BipartiteDims dims, Index dim_s);

/// ((1 + eps) / d)^{1 - 1/p}: maximal p-norm bound for an eps-randomizing channel.
double randomizing_p_norm_bound(double epsilon, Index d, RenyiOrder p);

}  // namespace pnl
