#include "abtool/output.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace abtool {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json();
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + file.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + file.string() + "'");
}

std::string write_table(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                        const std::string& format) {
  std::string text;
  std::string name;
  if (format == "json") {
    nlohmann::json j;
    j["columns"] = table.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& c : row) r.push_back(json_cell(c));
      j["rows"].push_back(std::move(r));
    }
    text = j.dump() + "\n";
    name = stem + ".json";
  } else {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (i) text += ',';
      text += table.columns[i];
    }
    text += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) text += ',';
        text += csv_cell(row[i]);
      }
      text += '\n';
    }
    name = stem + ".csv";
  }
  write_text(dir / name, text);
  return name;
}

std::string svg_panels(const std::string& title, const std::string& x_label, const std::vector<Series>& series) {
  constexpr double kWidth = 640.0;
  constexpr double kPanel = 200.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 20.0;
  constexpr double kTop = 40.0;
  constexpr double kGap = 30.0;
  const double height = kTop + series.size() * (kPanel + kGap) + 20.0;
  auto num = [](double v) { return format_double(std::round(v * 100.0) / 100.0); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                    num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + title + "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const double top = kTop + k * (kPanel + kGap);
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) {
      y0 -= 0.5;
      y1 += 0.5;
    }
    const double plot_w = kWidth - kLeft - kRight;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * plot_w; };
    auto py = [&](double y) { return top + kPanel - (y - y0) / (y1 - y0) * kPanel; };
    svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(top) + "\" width=\"" + num(plot_w) + "\" height=\"" +
           num(kPanel) + "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(top + 12) + "\" text-anchor=\"end\">" + format_double(y1) +
           "</text>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(top + kPanel) + "\" text-anchor=\"end\">" +
           format_double(y0) + "</text>\n";
    svg += "<text x=\"" + num(kLeft + 8) + "\" y=\"" + num(top + 16) + "\">" + s.label + "</text>\n";
    svg += "<text x=\"" + num(kLeft + plot_w) + "\" y=\"" + num(top + kPanel + 16) + "\" text-anchor=\"end\">" +
           x_label + " in [" + format_double(x0) + ", " + format_double(x1) + "]</text>\n";
    svg += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (!first) svg += ' ';
      first = false;
      svg += num(px(x)) + "," + num(py(y));
    }
    svg += "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace abtool
