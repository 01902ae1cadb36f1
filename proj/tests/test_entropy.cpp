#include "oracles.hpp"

#include "pnl/channels.hpp"
#include "pnl/entropy.hpp"
#include "pnl/random_ensembles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

using namespace pnl;

namespace {

const std::vector<RenyiOrder> kGrid = {RenyiOrder(0.5), RenyiOrder(1.0), RenyiOrder(1.5),
                                       RenyiOrder(2.0), RenyiOrder(5.0), RenyiOrder::infinity()};

// H_p straight from the definition.
double renyi_oracle(const RealVector& lam, double p) {
  if (std::isinf(p)) return -std::log(lam.maxCoeff());
  if (p == 1.0) return oracle::shannon(lam);
  double s = 0.0;
  for (Index i = 0; i < lam.size(); ++i)
    if (lam(i) > 0.0) s += std::pow(lam(i), p);
  return std::log(s) / (1.0 - p);
}

RealVector kron(const RealVector& x, const RealVector& y) {
  RealVector out(x.size() * y.size());
  for (Index i = 0; i < x.size(); ++i)
    for (Index j = 0; j < y.size(); ++j) out(i * y.size() + j) = x(i) * y(j);
  return out;
}

StinespringChannel random_stinespring(SeededRng& rng, Index da, Index db, Index ds) {
  return {random_isometry(rng, ds, {da, db}), {da, db}};
}

}  // namespace

TEST_CASE("Renyi entropy closed forms") {
  for (const RenyiOrder& p : kGrid) {
    CHECK(std::abs(renyi_entropy(RealVector::Constant(7, 1.0 / 7.0), p) - std::log(7.0)) < 1e-13);
    RealVector pure = RealVector::Zero(5);
    pure(2) = 1.0;
    CHECK(std::abs(renyi_entropy(pure, p)) < 1e-15);
  }
  RealVector two(2);
  two << 0.7, 0.3;
  CHECK(std::abs(renyi_entropy(two, RenyiOrder(2.0)) + std::log(0.49 + 0.09)) < 1e-15);
  CHECK(std::abs(renyi_entropy(two, RenyiOrder::infinity()) + std::log(0.7)) < 1e-15);
  CHECK(std::abs(renyi_entropy(two, RenyiOrder(1.0)) - binary_entropy(0.7)) < 1e-15);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(std::abs(binary_entropy(0.5) - std::log(2.0)) < 1e-15);
}

TEST_CASE("Renyi entropy rejects non-normalized input") {
  RealVector bad(2);
  bad << 0.7, 0.7;
  CHECK_THROWS(renyi_entropy(bad, RenyiOrder(2.0)));
}

TEST_CASE("Renyi entropy matches the definition on random spectra") {
  SeededRng rng(1, 0);
  for (int t = 0; t < 50; ++t) {
    const RealVector lam = oracle::random_probabilities(rng, 6);
    for (double p : {0.5, 1.0, 1.5, 2.0, 5.0, std::numeric_limits<double>::infinity()})
      CHECK(std::abs(renyi_entropy(lam, RenyiOrder(p)) - renyi_oracle(lam, p)) < 1e-12);
  }
}

TEST_CASE("Renyi entropy is nonincreasing in p") {
  SeededRng rng(2, 0);
  for (int t = 0; t < 1000; ++t) {
    const RealVector lam = oracle::random_probabilities(rng, 2 + static_cast<Index>(t % 9));
    double prev = std::numeric_limits<double>::infinity();
    for (const RenyiOrder& p : kGrid) {
      const double h = renyi_entropy(lam, p);
      CHECK(prev - h >= -1e-10);
      prev = h;
    }
  }
}

TEST_CASE("Renyi entropy tends to the von Neumann entropy as p -> 1") {
  SeededRng rng(3, 0);
  for (int t = 0; t < 100; ++t) {
    const RealVector lam = oracle::random_probabilities(rng, 8);
    const double h1 = renyi_entropy(lam, RenyiOrder(1.0));
    CHECK(std::abs(renyi_entropy(lam, RenyiOrder(1.0 + 1e-5)) - h1) < 1e-4);
    CHECK(std::abs(renyi_entropy(lam, RenyiOrder(1.0 - 1e-5)) - h1) < 1e-4);
  }
}

TEST_CASE("Renyi entropy is additive on product spectra") {
  SeededRng rng(4, 0);
  for (int t = 0; t < 100; ++t) {
    const RealVector x = oracle::random_probabilities(rng, 4);
    const RealVector y = oracle::random_probabilities(rng, 5);
    for (const RenyiOrder& p : kGrid)
      CHECK(std::abs(renyi_entropy(kron(x, y), p) - renyi_entropy(x, p) - renyi_entropy(y, p)) < 1e-12);
  }
}

TEST_CASE("grouping identity") {
  SeededRng rng(5, 0);
  for (int t = 0; t < 200; ++t) {
    const Spectrum s(oracle::random_probabilities(rng, 2 + static_cast<Index>(t % 7)));
    const GroupingDecomposition g = grouping_decomposition(s);
    CHECK(g.lambda1 == s.max());
    CHECK(std::abs(g.h_binary + (1.0 - g.lambda1) * g.tail_entropy - renyi_entropy(s, RenyiOrder(1.0))) < 1e-10);
    CHECK(std::abs(g.total - renyi_entropy(s, RenyiOrder(1.0))) < 1e-10);
  }
  RealVector pure = RealVector::Zero(3);
  pure(0) = 1.0;
  const GroupingDecomposition g = grouping_decomposition(Spectrum(pure));
  CHECK(g.total == 0.0);
}

TEST_CASE("p-norm and minimum entropy conversions") {
  for (double p : {1.5, 2.0, 4.0}) {
    const RenyiOrder q(p);
    const double nu = 0.37;
    CHECK(std::abs(max_p_norm_from_entropy(entropy_from_max_p_norm(nu, q), q) - nu) < 1e-14);
    CHECK(std::abs(entropy_from_max_p_norm(nu, q) - p / (1.0 - p) * std::log(nu)) < 1e-14);
  }
  CHECK(std::abs(entropy_from_max_p_norm(0.25, RenyiOrder::infinity()) - std::log(4.0)) < 1e-15);
  CHECK_THROWS_AS(max_p_norm_from_entropy(1.0, RenyiOrder(1.0)), std::domain_error);
  CHECK_THROWS_AS(entropy_from_max_p_norm(0.5, RenyiOrder(1.0)), std::domain_error);
}

TEST_CASE("output entropy gradient agrees with finite differences") {
  SeededRng rng(6, 0);
  const StinespringChannel st = random_stinespring(rng, 3, 4, 5);
  const RandomUnitaryChannel ru = RandomUnitaryChannel::haar(rng, 4, 3);
  for (const Channel& ch : {Channel(st), Channel(ru)}) {
    const Index d = input_dim(ch);
    for (const RenyiOrder& p : {RenyiOrder(0.5), RenyiOrder(1.0), RenyiOrder(2.0), RenyiOrder(3.5),
                                RenyiOrder::infinity()}) {
      const Vector psi = random_pure_state(rng, d).amplitudes();
      Vector delta = oracle::random_matrix(rng, d, 1);
      delta -= psi * psi.dot(delta);  // tangent and phase-orthogonal
      delta.normalize();
      const Vector g = output_entropy_gradient(ch, psi, p);
      const double predicted = g.dot(delta).real();
      const double h = 1e-6;
      const double plus = output_entropy(ch, (psi + h * delta).normalized(), p);
      const double minus = output_entropy(ch, (psi - h * delta).normalized(), p);
      CAPTURE(p.value());
      CAPTURE(d);
      CHECK(std::abs((plus - minus) / (2.0 * h) - predicted) < 1e-6 * std::max(1.0, std::abs(predicted)));
    }
  }
}

TEST_CASE("minimum output entropy estimator") {
  SeededRng rng(7, 0);
  EstimatorConfig cfg;
  cfg.samples = 200;
  cfg.restarts = 3;
  cfg.master_seed = 99;

  SUBCASE("isometric channel has a pure output") {
    const StinespringChannel id = random_stinespring(rng, 4, 1, 4);
    const MinEntropyEstimate e = min_output_entropy_estimate(id, RenyiOrder(2.0), cfg);
    CHECK(std::abs(e.hmin_hat) < 1e-10);
  }
  SUBCASE("completely depolarizing channel") {
    const MinEntropyEstimate e = min_output_entropy_estimate(RandomUnitaryChannel::pauli(), RenyiOrder(2.0), cfg);
    CHECK(std::abs(e.hmin_hat - std::log(2.0)) < 1e-12);
  }
  SUBCASE("estimate is the entropy of the returned input and is reproducible") {
    const StinespringChannel n = random_stinespring(rng, 3, 3, 4);
    for (const RenyiOrder& p : {RenyiOrder(1.0), RenyiOrder(2.0), RenyiOrder::infinity()}) {
      const MinEntropyEstimate e = min_output_entropy_estimate(n, p, cfg);
      const Matrix out = oracle::stinespring(n.isometry().matrix(), 3, 3, e.argmin.projector());
      const Spectrum s = eigen_spectrum_unchecked(out);
      CHECK(std::abs(e.hmin_hat - renyi_oracle(s.clamped(), p.value())) < 1e-10);
      CHECK(e.hmin_hat <= e.sampling_hmin);
      CHECK(e.hmin_hat == std::min(e.sampling_hmin, e.optimizer_hmin));
      CHECK(min_output_entropy_estimate(n, p, cfg).hmin_hat == e.hmin_hat);
    }
  }
  SUBCASE("local search beats sampling on a generic channel") {
    const StinespringChannel n = random_stinespring(rng, 6, 6, 12);
    const MinEntropyEstimate e = min_output_entropy_estimate(n, RenyiOrder(2.0), cfg);
    CHECK(e.optimizer_hmin < e.sampling_hmin);
    CHECK(!e.trace.empty());
  }
  SUBCASE("config validation") {
    EstimatorConfig bad = cfg;
    bad.samples = 0;
    CHECK_THROWS_AS(min_output_entropy_estimate(RandomUnitaryChannel::pauli(), RenyiOrder(2.0), bad),
                    std::invalid_argument);
  }
}

TEST_CASE("product inputs give additive output entropy") {
  SeededRng rng(8, 0);
  for (int t = 0; t < 100; ++t) {
    const StinespringChannel n = random_stinespring(rng, 3, 2, 2);
    const RandomUnitaryChannel m = RandomUnitaryChannel::haar(rng, 3, 2);
    const PureState psi = random_pure_state(rng, 2);
    const PureState phi = random_pure_state(rng, 3);
    const Spectrum joint = eigen_spectrum(apply_product_to_state(n, m, tensor_product(psi, phi)));
    for (const RenyiOrder& p : kGrid) {
      const double sum = output_entropy(n, psi.amplitudes(), p) + output_entropy(m, phi.amplitudes(), p);
      CAPTURE(p.value());
      CHECK(std::abs(renyi_entropy(joint, p) - sum) < 1e-8);
    }
  }
}

TEST_CASE("subspace dimension bound") {
  const double c = 1.0 / (72.0 * std::pow(std::numbers::pi, 3));
  BoundsParams bp;
  CHECK(bp.c == doctest::Approx(c).epsilon(1e-15));

  SUBCASE("p = infinity drops the dimA factor") {
    const SubspaceBound sb = subspace_dimension_bound(RenyiOrder::infinity(), {1024, 1024}, bp);
    const double expected = c / 16.0 / std::log(10.0) * 1024.0;
    CHECK(std::abs(sb.dim_s_real - expected) < 1e-12 * expected);
    CHECK(sb.dim_s == 0);
    CHECK(sb.vacuous());
    CHECK(std::abs(sb.log_failure_prob - (std::log(2.0) - c * 0.25 * 1024.0)) < 1e-12);
  }
  SUBCASE("finite p") {
    const SubspaceBound sb = subspace_dimension_bound(RenyiOrder(2.0), {64, 256}, bp);
    const double expected = c / 4.0 * 0.25 * 0.25 / std::log(10.0) * 8.0 * 256.0;
    CHECK(std::abs(sb.dim_s_real - expected) < 1e-12 * expected);
    CHECK(sb.beta == doctest::Approx(3.0 * 0.5));
    CHECK(sb.entropy_floor == doctest::Approx(std::log(64.0) - 0.5 - 1.5 + std::log(0.5)));
  }
  SUBCASE("equal dims make beta equal gamma") {
    CHECK(subspace_dimension_bound(RenyiOrder(3.0), {50, 50}, bp).beta == bp.gamma);
  }
  SUBCASE("large scale bound is informative") {
    const SubspaceBound sb = subspace_dimension_bound(RenyiOrder::infinity(), {1 << 20, 1 << 30}, bp);
    CHECK(sb.dim_s >= 1);
    CHECK(sb.failure_prob_bound < 1.0);
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(subspace_dimension_bound(RenyiOrder(1.0), {4, 4}, bp), std::domain_error);
    CHECK_THROWS_AS(subspace_dimension_bound(RenyiOrder(2.0), {8, 4}, bp), DimensionError);
  }
}

TEST_CASE("Lipschitz bound") {
  CHECK(lipschitz_bound(RenyiOrder::infinity(), 64) == doctest::Approx(16.0));
  CHECK(lipschitz_bound(RenyiOrder(2.0), 16) == doctest::Approx(4.0 * 2.0));
  CHECK_THROWS_AS(lipschitz_bound(RenyiOrder(1.0), 4), std::domain_error);

  // ln L = ln(2p/(p-1)) + (1/2 - 1/2p) ln A has derivative -1/(p(p-1)) + ln A/(2p^2),
  // so it is nonincreasing in p when ln A <= 2 and has an interior minimum otherwise.
  double prev = std::numeric_limits<double>::infinity();
  for (double p = 1.1; p < 50.0; p *= 1.2) {
    const double v = lipschitz_bound(RenyiOrder(p), 7);
    CHECK(v <= prev);
    prev = v;
  }
  const double a = 1024.0;
  const double p_star = std::log(a) / (std::log(a) - 2.0);
  const double at_min = lipschitz_bound(RenyiOrder(p_star), 1024);
  CHECK(at_min < lipschitz_bound(RenyiOrder(p_star * 0.8), 1024));
  CHECK(at_min < lipschitz_bound(RenyiOrder(p_star * 1.5), 1024));
  CHECK(at_min < lipschitz_bound(RenyiOrder::infinity(), 1024));
}

TEST_CASE("product output entropy bound and randomizing bound") {
  CHECK(std::abs(product_output_entropy_bound(RenyiOrder(2.0), {24, 24}, 192) - 2.0 * std::log(3.0)) < 1e-14);
  CHECK(std::abs(product_output_entropy_bound(RenyiOrder::infinity(), {24, 24}, 192) - std::log(3.0)) < 1e-14);
  CHECK(product_output_entropy_bound(RenyiOrder(2.0), {3, 3}, 9) == 0.0);
  const double single = randomizing_p_norm_bound(0.0, 2, RenyiOrder(4.0));
  CHECK(std::abs(single - std::pow(0.5, 0.75)) < 1e-15);
  CHECK(std::abs(single * single - 0.35355339059327373) < 1e-15);
  CHECK(randomizing_p_norm_bound(0.5, 4, RenyiOrder::infinity()) == doctest::Approx(1.5 / 4.0));
  CHECK_THROWS_AS(randomizing_p_norm_bound(-0.1, 4, RenyiOrder(2.0)), std::domain_error);
}
