#include "pnl/haar_moments.hpp"

#include "parallel.hpp"
#include "pnl/channels.hpp"
#include "pnl/random_ensembles.hpp"

#include <cmath>

namespace pnl {

namespace {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

WeingartenTable::WeingartenTable(Index dim) : dim_(dim) {
  if (dim < 4) throw DimensionError("weingarten_table: D must be >= 4");
  const WeingartenSolution sol = solve_weingarten<4>(static_cast<double>(dim));
  residual_ = sol.residual;
  const auto perms = PermutationS4::all();
  for (std::size_t i = 0; i < perms.size(); ++i) {
    const CycleType type = perms[i].cycle_type();
    const double v = sol.values[i];
    auto [it, inserted] = by_class_.emplace(type, v);
    if (!inserted && std::abs(it->second - v) > 1e-9 * std::abs(v))
      throw NumericalError("weingarten_table: solution is not a class function");
  }
}

WeingartenTable weingarten_table(Index dim) { return WeingartenTable(dim); }

ContractionWiring purity_wiring() {
  return {PermutationS4(), PermutationS4::from_cycles({{1, 4}, {2, 3}}),
          PermutationS4::from_cycles({{1, 2}, {3, 4}})};
}

double exact_avg_purity(BipartiteDims dims, Index dim_s) {
  const Index total = dims.total();
  if (dim_s < 1 || dim_s > total) throw DimensionError("exact_avg_purity: dimS must lie in [1, dimA * dimB]");
  if (total < 4) throw DimensionError("exact_avg_purity: dimA * dimB must be >= 4");

  const WeingartenTable wg(total);
  const ContractionWiring wiring = purity_wiring();
  const auto perms = PermutationS4::all();
  const double s = static_cast<double>(dim_s);
  const double a = static_cast<double>(dims.a);
  const double b = static_cast<double>(dims.b);

  CompensatedSum sum;
  for (const auto& sigma : perms) {
    const double row_loops = std::pow(s, (sigma * wiring.row).cycle_count());
    for (const auto& tau : perms) {
      const double col_loops = std::pow(a, (tau * wiring.col_a).cycle_count()) *
                               std::pow(b, (tau * wiring.col_b).cycle_count());
      sum.add(row_loops * col_loops * wg.value(sigma * tau.inverse()));
    }
  }
  return sum.value() / (s * s);
}

double phi_output_purity(const StinespringChannel& ch) {
  const Channel n = ch;
  const Channel nbar = ch.conjugate();
  const DensityOperator out = apply_product_to_state(n, nbar, make_max_entangled(ch.input_dim()));
  return out.matrix().squaredNorm();
}

MonteCarloEstimate mc_avg_purity(BipartiteDims dims, Index dim_s, int samples, std::uint64_t master_seed,
                                 std::uint64_t stream_base) {
  if (samples < 2) throw std::invalid_argument("mc_avg_purity: samples must be >= 2");
  if (dim_s < 1 || dim_s > dims.total()) throw DimensionError("mc_avg_purity: dimS out of range");

  const std::vector<double> values = detail::parallel_map<double>(samples, [&](int i) {
    SeededRng rng(master_seed, stream_base + static_cast<std::uint64_t>(i));
    return phi_output_purity(StinespringChannel(random_isometry(rng, dim_s, dims), dims));
  });

  CompensatedSum total;
  for (double v : values) total.add(v);
  const double mean = total.value() / samples;
  CompensatedSum sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  const double var = sq.value() / (samples - 1);
  return {mean, std::sqrt(var / samples), samples};
}

}  // namespace pnl
