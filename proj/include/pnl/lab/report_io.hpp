#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace pnl::lab {

/// Header `index,eigenvalue`, 1-based index, values in ascending order with
/// 17 significant digits.
void write_spectrum_csv(const std::filesystem::path& path, const std::vector<double>& ascending);
std::vector<double> read_spectrum_csv(const std::filesystem::path& path);

struct ReferenceLine {
  double value;
  std::string color;
  bool dashed;
  std::string label;
};

/// Scatter plot of an ascending spectrum with horizontal reference lines.
void write_spectrum_svg(const std::filesystem::path& path, const std::vector<double>& ascending,
                        const std::vector<ReferenceLine>& lines, bool log_y);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace pnl::lab
