#pragma once

#include "pnl/tensor_core.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace pnl {

/// Deterministic random stream identified by (master_seed, stream_id).
///
/// The engine state is derived by hashing both identifiers with SplitMix64, so
/// streams never share state and can be consumed in any order. Normal deviates
/// come from Box-Muller on top of the raw 64-bit output rather than from
/// std::normal_distribution, whose algorithm is implementation-defined.
class SeededRng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64-stream/box-muller";
  static constexpr int kAlgorithmVersion = 1;

  SeededRng(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Real and imaginary parts i.i.d. N(0, 1/2).
  Complex complex_normal();

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Unnormalized complex Gaussian vector, E|z_i|^2 = 1.
Vector gaussian_vector(SeededRng& rng, Index dim);

/// Uniformly distributed unit vector.
PureState random_pure_state(SeededRng& rng, Index dim);

/// Haar unitary from a Ginibre matrix via QR with the diagonal phases of R
/// moved into Q.
Matrix haar_unitary(SeededRng& rng, Index d);

class Isometry;

/// The first dim_s columns of a Haar unitary on A (x) B.
Isometry random_isometry(SeededRng& rng, Index dim_s, BipartiteDims dims);

}  // namespace pnl
