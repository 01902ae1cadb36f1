#pragma once

// Seeded, replayable experiments behind the pnl-lab command line.
//
// Every command takes a fully populated parameter object and returns its
// scalar outputs as JSON, so a stored ExperimentRecord can be re-run from its
// params alone. File outputs are listed under outputs["files"] and are the
// only part of the outputs that a replay does not compare.

#include "pnl/entropy.hpp"
#include "pnl/lab/records.hpp"
#include "pnl/tensor_core.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pnl::lab {

inline constexpr std::uint64_t kChannelStream = 0;
inline constexpr std::uint64_t kEstimatorStreamN = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kEstimatorStreamNbar = std::uint64_t{2} << 20;

struct CommandOutcome {
  nlohmann::json outputs;
  std::vector<StreamRange> streams;
  std::string summary;
};

struct SpectrumRun {
  BipartiteDims dims;
  Index dim_s;
  std::vector<double> ascending;
  double lambda_max;
  double ratio_line;  // dimS / (dimA dimB)
  double flat_line;   // (1 - ratio) / dimA^2
  double tail_purity;
  double h1;
  double h2;
  GroupingDecomposition grouping;
};

/// Spectrum of (N (x) conj N)(Phi) for one Stinespring channel with
/// dimS = dimA dimB / dimR drawn from (seed, kChannelStream).
SpectrumRun spectrum_experiment(Index dim_a, Index dim_b, Index dim_r, std::uint64_t seed);

struct ViolationReport {
  RenyiOrder p;
  Index dim_a;
  Index dim_b;
  Index dim_s;
  double hmin_hat_n;
  double hmin_hat_nbar;
  double h_product_phi;
  double gap;
  double bound_check;
  std::uint64_t seed;

  /// Exactly the keys p, dim_a, dim_b, dim_s, hmin_hat_n, hmin_hat_nbar,
  /// h_product_phi, gap, bound_check, seed; p = inf is written as "inf".
  nlohmann::json to_json() const;
};

struct ViolationRun {
  ViolationReport report;
  MinEntropyEstimate est_n;
  MinEntropyEstimate est_nbar;
  double lambda_max;
};

ViolationRun violation_experiment(RenyiOrder p, BipartiteDims dims, Index dim_s, const EstimatorConfig& settings,
                                  std::uint64_t seed);

struct RuViolationRun {
  RenyiOrder p;
  Index dim;
  Index count;
  double overlap;        // <Phi|(N (x) conj N)(Phi)|Phi>, a lower bound on nu_p(N (x) conj N)
  double inverse_n;
  double epsilon_hat;    // lower-bound estimate of the randomizing parameter
  double single_bound;   // ((1 + eps_hat) / d)^{1 - 1/p}
  double conditional_upper_bound;  // single_bound^2, conditional on eps_hat being the true epsilon
  bool violation;        // overlap > conditional_upper_bound
  std::uint64_t seed;

  nlohmann::json to_json() const;
};

/// pauli = true replaces the Haar family with {I, X, Y, Z} (d = 2, n = 4).
RuViolationRun ru_violation_experiment(RenyiOrder p, Index dim, Index count, bool pauli,
                                       const EstimatorConfig& settings, std::uint64_t seed);

CommandOutcome run_spectrum(const nlohmann::json& params);
CommandOutcome run_violation(const nlohmann::json& params);
CommandOutcome run_ru_violation(const nlohmann::json& params);
CommandOutcome run_purity(const nlohmann::json& params);
CommandOutcome run_bounds(const nlohmann::json& params);
CommandOutcome run_command(const std::string& name, const nlohmann::json& params);

/// Runs, times and (when store is non-empty) appends one ExperimentRecord.
ExperimentRecord execute(const std::string& name, const nlohmann::json& params, const std::filesystem::path& store,
                         std::string* summary = nullptr);

struct ReplayCheck {
  bool identical;
  std::vector<std::string> mismatches;
};

/// Re-runs a record with file outputs disabled and compares every output
/// except outputs["files"] bit for bit.
ReplayCheck replay(const ExperimentRecord& rec);

}  // namespace pnl::lab
