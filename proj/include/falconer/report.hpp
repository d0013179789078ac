#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace falconer {

/// Minimal CSV writer with a stable schema: header row then data rows.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void add_row_values(const std::vector<double>& vals) {
    std::vector<std::string> row;
    for (double v : vals) row.push_back(num(v));
    rows_.push_back(std::move(row));
  }

  static std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
  }

  void write(std::ostream& out) const {
    write_line(out, header_);
    for (auto& r : rows_) write_line(out, r);
  }

  void write_json(std::ostream& out) const {
    out << "[";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      out << (r ? ",\n " : "\n ") << "{";
      for (std::size_t c = 0; c < header_.size() && c < rows_[r].size(); ++c) {
        if (c) out << ", ";
        out << '"' << header_[c] << "\": " << json_value(rows_[r][c]);
      }
      out << "}";
    }
    out << "\n]\n";
  }

 private:
  static std::string json_value(const std::string& s) {
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    bool numeric = end && *end == '\0' && !s.empty();
    return numeric ? s : "\"" + s + "\"";
  }

  static void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Polyline chart writer for bound curves and envelopes.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

  void add_series(std::string name, std::vector<std::array<double, 2>> pts,
                  bool dashed = false) {
    series_.push_back({std::move(name), std::move(pts), dashed});
  }

  void write(std::ostream& out) const {
    const double W = 720, H = 480, ml = 70, mr = 150, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& s : series_)
      for (auto& p : s.pts) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
      }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto Y = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title_ << "</text>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
        << H - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
      double x = xmin + (xmax - xmin) * k / 5.0;
      double y = ymin + (ymax - ymin) * k / 5.0;
      out << "<text x=\"" << X(x) << "\" y=\"" << H - mb + 18
          << "\" text-anchor=\"middle\" font-size=\"11\">" << trim(x) << "</text>\n";
      out << "<text x=\"" << ml - 8 << "\" y=\"" << Y(y) + 4
          << "\" text-anchor=\"end\" font-size=\"11\">" << trim(y) << "</text>\n";
    }
    out << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 10
        << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel_ << "</text>\n";
    out << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (mt + H - mb) / 2 << ")\">" << ylabel_ << "</text>\n";
    for (std::size_t i = 0; i < series_.size(); ++i) {
      const char* color = colors[i % 7];
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\""
          << (series_[i].dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
      for (auto& p : series_[i].pts) out << X(p[0]) << "," << Y(p[1]) << " ";
      out << "\"/>\n";
      double ly = mt + 18.0 * static_cast<double>(i);
      out << "<line x1=\"" << W - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - mr + 34
          << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << W - mr + 40 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
          << series_[i].name << "</text>\n";
    }
    out << "</svg>\n";
  }

 private:
  static std::string trim(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
  }

  struct Series {
    std::string name;
    std::vector<std::array<double, 2>> pts;
    bool dashed = false;
  };
  std::string title_, xlabel_, ylabel_;
  std::vector<Series> series_;
};

}  // namespace falconer
