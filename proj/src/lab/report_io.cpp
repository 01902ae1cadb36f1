#include "pnl/lab/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pnl::lab {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

void write_spectrum_csv(const std::filesystem::path& path, const std::vector<double>& ascending) {
  std::ofstream out = open_out(path);
  out << "index,eigenvalue\n";
  for (std::size_t i = 0; i < ascending.size(); ++i) out << (i + 1) << ',' << fmt("%.17g", ascending[i]) << '\n';
}

std::vector<double> read_spectrum_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "index,eigenvalue")
    throw std::runtime_error("spectrum csv: unexpected header in " + path.string());
  std::vector<double> values;
  std::size_t expected = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("spectrum csv: malformed row '" + line + "'");
    if (std::stoull(line.substr(0, comma)) != expected++)
      throw std::runtime_error("spectrum csv: indices must be consecutive from 1");
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return values;
}

void write_spectrum_svg(const std::filesystem::path& path, const std::vector<double>& ascending,
                        const std::vector<ReferenceLine>& lines, bool log_y) {
  constexpr double width = 800, height = 500;
  constexpr double left = 80, right = 20, top = 20, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double ymax = 0.0;
  double ymin_pos = 1.0;
  for (double v : ascending) {
    ymax = std::max(ymax, v);
    if (v > 0.0) ymin_pos = std::min(ymin_pos, v);
  }
  for (const auto& l : lines) {
    ymax = std::max(ymax, l.value);
    if (l.value > 0.0) ymin_pos = std::min(ymin_pos, l.value);
  }
  ymax = ymax > 0.0 ? ymax * 1.05 : 1.0;
  const double lo = log_y ? std::log10(ymin_pos) - 0.5 : 0.0;
  const double hi = log_y ? std::log10(ymax) : ymax;

  auto ypix = [&](double v) {
    double t = log_y ? (std::log10(std::max(v, std::pow(10.0, lo))) - lo) / (hi - lo) : v / hi;
    t = std::clamp(t, 0.0, 1.0);
    return top + plot_h * (1.0 - t);
  };
  const double n = static_cast<double>(std::max<std::size_t>(ascending.size(), 1));
  auto xpix = [&](std::size_t i) { return left + plot_w * (static_cast<double>(i) + 0.5) / n; };

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double frac = k / 4.0;
    const double v = log_y ? std::pow(10.0, lo + frac * (hi - lo)) : frac * hi;
    const double y = ypix(v);
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << fmt("%.3g", v)
        << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">eigenvalue index (ascending)</text>\n";

  for (const auto& l : lines) {
    const double y = ypix(l.value);
    out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w << "\" y2=\"" << y
        << "\" stroke=\"" << l.color << "\"" << (l.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    out << "<text x=\"" << left + 6 << "\" y=\"" << y - 4 << "\" fill=\"" << l.color << "\">" << l.label
        << "</text>\n";
  }
  for (std::size_t i = 0; i < ascending.size(); ++i)
    out << "<circle cx=\"" << xpix(i) << "\" cy=\"" << ypix(ascending[i]) << "\" r=\"1.5\" fill=\"navy\"/>\n";
  out << "</svg>\n";
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace pnl::lab
