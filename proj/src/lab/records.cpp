#include "pnl/lab/records.hpp"

#include "pnl/random_ensembles.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <stdexcept>

#ifndef PNL_VERSION
#define PNL_VERSION "0.0.0"
#endif

namespace pnl::lab {

nlohmann::json ExperimentRecord::to_json() const {
  nlohmann::json streams_json = nlohmann::json::array();
  for (const StreamRange& s : streams)
    streams_json.push_back({{"role", s.role}, {"first", s.first}, {"count", s.count}});
  return {{"command", command},   {"params", params},         {"master_seed", master_seed},
          {"streams", streams_json}, {"generator", generator}, {"version", version},
          {"duration_s", duration_s}, {"outputs", outputs},   {"timestamp", timestamp}};
}

ExperimentRecord ExperimentRecord::from_json(const nlohmann::json& j) {
  ExperimentRecord r;
  r.command = j.at("command").get<std::string>();
  r.params = j.at("params");
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  for (const auto& s : j.at("streams"))
    r.streams.push_back({s.at("role").get<std::string>(), s.at("first").get<std::uint64_t>(),
                         s.at("count").get<std::uint64_t>()});
  r.generator = j.at("generator").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.duration_s = j.at("duration_s").get<double>();
  r.outputs = j.at("outputs");
  r.timestamp = j.at("timestamp").get<std::string>();
  return r;
}

std::string artifact_version() { return PNL_VERSION; }

std::string generator_id() {
  return std::string(SeededRng::kAlgorithm) + " v" + std::to_string(SeededRng::kAlgorithmVersion);
}

std::string iso8601_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void append_record(const std::filesystem::path& store, const ExperimentRecord& rec) {
  const std::string line = rec.to_json().dump() + "\n";
  const int fd = ::open(store.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw std::runtime_error("cannot open record store " + store.string() + ": " + std::strerror(errno));
  if (::flock(fd, LOCK_EX) != 0) {
    ::close(fd);
    throw std::runtime_error("cannot lock record store " + store.string());
  }
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::flock(fd, LOCK_UN);
      ::close(fd);
      throw std::runtime_error("write to record store failed");
    }
    written += static_cast<std::size_t>(n);
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
}

std::vector<ExperimentRecord> read_records(const std::filesystem::path& store) {
  std::ifstream in(store);
  if (!in) throw std::runtime_error("cannot read record store " + store.string());
  std::vector<ExperimentRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(ExperimentRecord::from_json(nlohmann::json::parse(line)));
  }
  return out;
}

}  // namespace pnl::lab
