// pnl-lab: seeded experiments on random quantum channels.
//
// Exit codes: 0 success, 1 unexpected failure or replay mismatch,
// 2 invalid arguments, 3 memory guard refused a dense allocation.

#include "pnl/lab/commands.hpp"
#include "pnl/lab/records.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

namespace {

using nlohmann::json;

struct EstimatorFlags {
  int samples = 1000;
  int restarts = 4;
  int max_iters = 200;
  double step_tol = 1e-9;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--samples", samples, "Random input states sampled before local search")->capture_default_str();
    cmd->add_option("--restarts", restarts, "Local-search restarts")->capture_default_str();
    cmd->add_option("--max-iters", max_iters, "Iterations per restart")->capture_default_str();
    cmd->add_option("--step-tol", step_tol, "Stop when gradient norm or improvement falls below this")
        ->capture_default_str();
  }
  void write(json& params) const {
    params["samples"] = samples;
    params["restarts"] = restarts;
    params["max_iters"] = max_iters;
    params["step_tol"] = step_tol;
  }
};

json p_param(const std::string& text) {
  // Validated here so that a bad p is reported before any work starts.
  const pnl::RenyiOrder p = pnl::RenyiOrder::parse(text);
  if (p.is_infinite()) return "inf";
  return p.value();
}

int run_and_report(const std::string& name, const json& params, const std::string& store) {
  std::string summary;
  const pnl::lab::ExperimentRecord rec = pnl::lab::execute(name, params, store, &summary);
  std::cout << summary;
  std::cout << "  (" << rec.duration_s << " s";
  if (!store.empty()) std::cout << ", record appended to " << store;
  std::cout << ")\n";
  return 0;
}

int run_replay(const std::string& path, std::optional<int> line) {
  const auto records = pnl::lab::read_records(path);
  if (records.empty()) throw std::invalid_argument("replay: no records in " + path);
  const int index = line ? *line : static_cast<int>(records.size());
  if (index < 1 || index > static_cast<int>(records.size()))
    throw std::invalid_argument("replay: line must lie in [1, " + std::to_string(records.size()) + "]");
  const auto& rec = records[static_cast<std::size_t>(index - 1)];
  if (rec.generator != pnl::lab::generator_id() || rec.version != pnl::lab::artifact_version())
    std::cout << "warning: record made by " << rec.generator << " / " << rec.version
              << "; bitwise agreement is only expected on the same build\n";
  const pnl::lab::ReplayCheck check = pnl::lab::replay(rec);
  if (check.identical) {
    std::cout << "replay of record " << index << " (" << rec.command << "): all outputs identical\n";
    return 0;
  }
  std::cout << "replay of record " << index << " (" << rec.command << "): " << check.mismatches.size()
            << " mismatches\n";
  for (const auto& m : check.mismatches) std::cout << "  " << m << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seeded experiments on the maximal output p-norm of random quantum channels"};
  app.require_subcommand(1);
  std::string store = "records.jsonl";
  app.add_option("--records", store, "JSON-lines file that receives one record per run (empty to disable)")
      ->capture_default_str();
  std::uint64_t seed = 1;
  std::string out;
  std::string p_text = "2";

  auto* spectrum = app.add_subcommand("spectrum", "Spectrum of (N (x) conj N)(Phi) for one random channel");
  long long sp_a = 24, sp_b = 24, sp_r = 3;
  std::string svg;
  bool log_y = false;
  spectrum->add_option("--dim-a", sp_a, "Output dimension")->capture_default_str();
  spectrum->add_option("--dim-b", sp_b, "Environment dimension")->capture_default_str();
  spectrum->add_option("--dim-r", sp_r, "dimS = dimA dimB / dimR")->capture_default_str();
  spectrum->add_option("--seed", seed)->capture_default_str();
  spectrum->add_option("--out", out, "CSV file for the ascending spectrum");
  spectrum->add_option("--svg", svg, "SVG plot with reference lines");
  spectrum->add_flag("--log-y", log_y, "Logarithmic eigenvalue axis in the SVG");

  auto* violation = app.add_subcommand("violation", "Additivity violation test for N and conj N");
  long long vi_a = 24, vi_b = 24, vi_s = 192;
  EstimatorFlags vi_est;
  violation->add_option("--p", p_text, "Renyi order > 1, or inf")->capture_default_str();
  violation->add_option("--dim-a", vi_a)->capture_default_str();
  violation->add_option("--dim-b", vi_b)->capture_default_str();
  violation->add_option("--dim-s", vi_s)->capture_default_str();
  violation->add_option("--seed", seed)->capture_default_str();
  violation->add_option("--out", out, "JSON report file");
  vi_est.add_to(violation);

  auto* ru = app.add_subcommand("ru-violation", "Multiplicativity test for a random unitary channel");
  long long ru_d = 32, ru_n = 4096;
  bool pauli = false;
  EstimatorFlags ru_est;
  ru->add_option("--p", p_text, "Renyi order > 1, or inf")->capture_default_str();
  ru->add_option("--dim", ru_d, "Dimension d")->capture_default_str();
  ru->add_option("--unitaries", ru_n, "Number of Haar unitaries n")->capture_default_str();
  ru->add_flag("--pauli", pauli, "Use the qubit Pauli family instead of Haar unitaries");
  ru->add_option("--seed", seed)->capture_default_str();
  ru->add_option("--out", out, "JSON report file");
  ru_est.add_to(ru);

  auto* purity = app.add_subcommand("purity", "Exact and Monte Carlo average purity of (N (x) conj N)(Phi)");
  long long pu_a = 3, pu_b = 3, pu_s = 4;
  int pu_samples = 1000;
  purity->add_option("--dim-a", pu_a)->capture_default_str();
  purity->add_option("--dim-b", pu_b)->capture_default_str();
  purity->add_option("--dim-s", pu_s)->capture_default_str();
  purity->add_option("--samples", pu_samples, "Monte Carlo samples")->capture_default_str();
  purity->add_option("--seed", seed)->capture_default_str();
  purity->add_option("--out", out, "JSON report file");

  auto* bounds = app.add_subcommand("bounds", "Concentration bounds for random subspaces");
  long long bo_a = 1024, bo_b = 1024;
  double alpha = 0.5, delta = 0.5, gamma = 3.0;
  bounds->add_option("--p", p_text, "Renyi order > 1, or inf")->capture_default_str();
  bounds->add_option("--dim-a", bo_a)->capture_default_str();
  bounds->add_option("--dim-b", bo_b)->capture_default_str();
  bounds->add_option("--alpha", alpha)->capture_default_str();
  bounds->add_option("--delta", delta)->capture_default_str();
  bounds->add_option("--gamma", gamma)->capture_default_str();

  auto* replay = app.add_subcommand("replay", "Re-run a stored record and compare outputs bit for bit");
  std::string replay_path;
  int replay_line = 0;
  replay->add_option("file", replay_path, "Records file (default: the --records file)");
  replay->add_option("--line", replay_line, "1-based record line (default: last)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*spectrum) {
      const json params = {{"dim_a", sp_a}, {"dim_b", sp_b}, {"dim_r", sp_r}, {"seed", seed},
                           {"out", out},    {"svg", svg},     {"log_y", log_y}};
      return run_and_report("spectrum", params, store);
    }
    if (*violation) {
      json params = {{"p", p_param(p_text)}, {"dim_a", vi_a}, {"dim_b", vi_b},
                     {"dim_s", vi_s},        {"seed", seed},  {"out", out}};
      vi_est.write(params);
      return run_and_report("violation", params, store);
    }
    if (*ru) {
      json params = {{"p", p_param(p_text)}, {"dim", ru_d}, {"unitaries", ru_n},
                     {"pauli", pauli},       {"seed", seed}, {"out", out}};
      ru_est.write(params);
      return run_and_report("ru-violation", params, store);
    }
    if (*purity) {
      const json params = {{"dim_a", pu_a}, {"dim_b", pu_b}, {"dim_s", pu_s},
                           {"samples", pu_samples}, {"seed", seed}, {"out", out}};
      return run_and_report("purity", params, store);
    }
    if (*bounds) {
      const json params = {{"p", p_param(p_text)}, {"dim_a", bo_a},   {"dim_b", bo_b},
                           {"alpha", alpha},       {"delta", delta}, {"gamma", gamma}};
      return run_and_report("bounds", params, store);
    }
    if (*replay) {
      return run_replay(replay_path.empty() ? store : replay_path, replay->count("--line") ? std::optional<int>(replay_line) : std::nullopt);
    }
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
