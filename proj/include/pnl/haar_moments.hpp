#pragma once

// Weingarten calculus for low-order moments of Haar unitaries, and the exact
// average purity of (N (x) conj N)(Phi) over Haar-random Stinespring channels.

#include "pnl/tensor_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace pnl {

/// Permutation of {0, ..., N-1}; composition (p * q)(i) = p(q(i)).
template <std::size_t N>
class Permutation {
 public:
  Permutation() { std::iota(images_.begin(), images_.end(), 0); }

  explicit Permutation(const std::array<int, N>& images) : images_(images) {
    std::array<bool, N> seen{};
    for (int v : images_) {
      if (v < 0 || v >= static_cast<int>(N) || seen[static_cast<std::size_t>(v)])
        throw std::invalid_argument("Permutation: images are not a bijection");
      seen[static_cast<std::size_t>(v)] = true;
    }
  }

  /// Builds from disjoint cycles written with 1-based labels, e.g. {{1, 4}, {2, 3}}.
  static Permutation from_cycles(std::initializer_list<std::initializer_list<int>> cycles) {
    std::array<int, N> img{};
    std::iota(img.begin(), img.end(), 0);
    for (const auto& cycle : cycles) {
      std::vector<int> c(cycle);
      for (std::size_t k = 0; k < c.size(); ++k)
        img[static_cast<std::size_t>(c[k] - 1)] = c[(k + 1) % c.size()] - 1;
    }
    return Permutation(img);
  }

  static std::vector<Permutation> all() {
    std::vector<Permutation> out;
    std::array<int, N> img{};
    std::iota(img.begin(), img.end(), 0);
    do {
      out.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
  }

  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::array<int, N>& images() const { return images_; }

  Permutation operator*(const Permutation& rhs) const {
    std::array<int, N> img{};
    for (std::size_t i = 0; i < N; ++i) img[i] = images_[static_cast<std::size_t>(rhs.images_[i])];
    return Permutation(img);
  }

  Permutation inverse() const {
    std::array<int, N> img{};
    for (std::size_t i = 0; i < N; ++i) img[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
    return Permutation(img);
  }

  /// Cycle lengths, longest first.
  std::vector<int> cycle_type() const {
    std::vector<int> lengths;
    std::array<bool, N> seen{};
    for (std::size_t start = 0; start < N; ++start) {
      if (seen[start]) continue;
      int len = 0;
      for (std::size_t j = start; !seen[j]; j = static_cast<std::size_t>(images_[j])) {
        seen[j] = true;
        ++len;
      }
      lengths.push_back(len);
    }
    std::sort(lengths.begin(), lengths.end(), std::greater<>());
    return lengths;
  }

  int cycle_count() const { return static_cast<int>(cycle_type().size()); }
  /// Minimal number of transpositions.
  int length() const { return static_cast<int>(N) - cycle_count(); }
  bool is_identity() const { return *this == Permutation(); }

  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::array<int, N> images_;
};

using PermutationS4 = Permutation<4>;
using CycleType = std::vector<int>;

struct WeingartenSolution {
  std::vector<double> values;  // indexed like Permutation<N>::all()
  double residual;             // max |G w - e_identity|
};

/// Solves the Gram system sum_tau D^{cycles(sigma tau^{-1})} Wg(tau) = [sigma = e]
/// for Permutation<N>::all(), with one round of iterative refinement.
/// Requires D >= N (the Gram matrix is singular otherwise).
template <std::size_t N>
WeingartenSolution solve_weingarten(double dim) {
  if (!(dim >= static_cast<double>(N))) throw DimensionError("Weingarten Gram matrix is singular for D < n");
  const auto perms = Permutation<N>::all();
  const Index m = static_cast<Index>(perms.size());
  // Scaled by D^{-N} so the entries lie in (0, 1] and the identity dominates.
  Eigen::MatrixXd g(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const int c = (perms[static_cast<std::size_t>(i)] * perms[static_cast<std::size_t>(j)].inverse()).cycle_count();
      g(i, j) = std::pow(dim, c - static_cast<int>(N));
    }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  e(0) = 1.0;  // all() starts at the identity
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(g);
  Eigen::VectorXd w = lu.solve(e);
  w += lu.solve(e - g * w);
  const double residual = (g * w - e).cwiseAbs().maxCoeff();
  const double unscale = std::pow(dim, -static_cast<double>(N));
  WeingartenSolution out{std::vector<double>(static_cast<std::size_t>(m)), residual};
  for (Index i = 0; i < m; ++i) out.values[static_cast<std::size_t>(i)] = w(i) * unscale;
  return out;
}

/// Weingarten function of S_4 at total dimension D, collapsed to conjugacy classes.
class WeingartenTable {
 public:
  explicit WeingartenTable(Index dim);

  Index dimension() const { return dim_; }
  double value(const PermutationS4& p) const { return by_class_.at(p.cycle_type()); }
  double value(const CycleType& type) const { return by_class_.at(type); }
  const std::map<CycleType, double>& by_class() const { return by_class_; }
  double gram_residual() const { return residual_; }

 private:
  Index dim_;
  std::map<CycleType, double> by_class_;
  double residual_;
};

WeingartenTable weingarten_table(Index dim);

/// Index wiring of the purity integrand. The eight Haar matrix entries carry
/// row labels s and column labels (a, b); pairing U entries with conj(U)
/// entries slot by slot, the s labels match as given (identity), while the A
/// labels of the conj(U) slots are the U-slot A labels permuted by (1 4)(2 3)
/// and the B labels by (1 2)(3 4).
struct ContractionWiring {
  PermutationS4 row;
  PermutationS4 col_a;
  PermutationS4 col_b;
};

ContractionWiring purity_wiring();

/// E_U Tr[((N (x) conj N)(Phi))^2] for N(rho) = Tr_B V rho V^dagger with V the
/// first dimS columns of a Haar unitary on A (x) B, summed exactly over
/// (sigma, tau) in S_4 x S_4.
double exact_avg_purity(BipartiteDims dims, Index dim_s);

/// Tr[((N (x) conj N)(Phi))^2] for one channel given by its isometry.
class StinespringChannel;
double phi_output_purity(const StinespringChannel& ch);

struct MonteCarloEstimate {
  double mean;
  double std_error;
  int samples;
};

/// Sample i draws its isometry from stream stream_base + i.
MonteCarloEstimate mc_avg_purity(BipartiteDims dims, Index dim_s, int samples, std::uint64_t master_seed,
                                 std::uint64_t stream_base = 0);

}  // namespace pnl
