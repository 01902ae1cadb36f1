#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pnl::lab {

/// Contiguous block of RNG streams consumed by one part of a command.
struct StreamRange {
  std::string role;
  std::uint64_t first;
  std::uint64_t count;
};

/// One line of the append-only JSONL results store.
struct ExperimentRecord {
  std::string command;
  nlohmann::json params;
  std::uint64_t master_seed = 0;
  std::vector<StreamRange> streams;
  std::string generator;
  std::string version;
  double duration_s = 0.0;
  nlohmann::json outputs;
  std::string timestamp;

  nlohmann::json to_json() const;
  static ExperimentRecord from_json(const nlohmann::json& j);
};

std::string artifact_version();
std::string generator_id();
std::string iso8601_utc_now();

/// Appends one JSON line under an exclusive advisory lock.
void append_record(const std::filesystem::path& store, const ExperimentRecord& rec);
std::vector<ExperimentRecord> read_records(const std::filesystem::path& store);

}  // namespace pnl::lab
