#pragma once

// Flat-file outputs: CSV with 17 significant digits (doubles round-trip
// exactly), and dependency-free SVG line plots on a fixed 800x500 canvas.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "solistat/errors.hpp"
#include "solistat/simulate.hpp"

namespace solistat::cli {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw io_error("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path);
  if (!out.is_open()) throw io_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace detail

// Profile CSV: one row per sample point, columns eta,phi,dphi,ddphi.
inline void write_profile_csv(const std::filesystem::path& path,
                              const std::vector<double>& eta,
                              const std::vector<double>& phi,
                              const std::vector<double>& dphi,
                              const std::vector<double>& ddphi) {
  if (phi.size() != eta.size() || dphi.size() != eta.size() ||
      ddphi.size() != eta.size()) {
    throw domain_error("write_profile_csv: column length mismatch");
  }
  std::ofstream out = detail::open_for_write(path);
  out << "eta,phi,dphi,ddphi\n";
  for (std::size_t i = 0; i < eta.size(); ++i) {
    out << format_double(eta[i]) << ',' << format_double(phi[i]) << ','
        << format_double(dphi[i]) << ',' << format_double(ddphi[i]) << '\n';
  }
  if (!out.good()) throw io_error("write failed: " + path.string());
}

// Snapshot CSV: rows ordered by time then node, columns t,x,phi,v.
inline void write_snapshots_csv(const std::filesystem::path& path,
                                const std::vector<sim::Snapshot>& snapshots,
                                double x0, double h) {
  std::ofstream out = detail::open_for_write(path);
  out << "t,x,phi,v\n";
  for (const sim::Snapshot& s : snapshots) {
    for (std::size_t i = 0; i < s.phi.size(); ++i) {
      out << format_double(s.t) << ',' << format_double(x0 + h * i) << ','
          << format_double(s.phi[i]) << ',' << format_double(s.v[i]) << '\n';
    }
  }
  if (!out.good()) throw io_error("write failed: " + path.string());
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw io_error("cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty CSV: " + path.string());
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != table.header.size()) {
      throw io_error("ragged CSV row in " + path.string());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------
// SVG plots
// ---------------------------------------------------------------------------

struct Curve {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotAxes {
  std::string title;
  std::string x_label = "eta";
  std::string y_label = "value";
};

namespace detail {

inline const char* curve_color(std::size_t i) {
  static const char* kPalette[] = {"#1f6fb2", "#d1495b", "#3e8e41",
                                   "#8a4fbe", "#e0a100", "#3aabb5"};
  return kPalette[i % 6];
}

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

// Short tick labels; full precision belongs in the CSV, not the plot.
inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace detail

// Standalone SVG: polylines over linear axes with ticks and a legend.
inline void write_svg(const std::filesystem::path& path,
                      const std::vector<Curve>& curves, const PlotAxes& axes = {}) {
  if (curves.empty()) throw domain_error("write_svg: needs at least one curve");
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const Curve& c : curves) {
    if (c.x.size() != c.y.size() || c.x.empty()) {
      throw domain_error("write_svg: curve '" + c.name + "' is empty or ragged");
    }
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) {
        throw domain_error("write_svg: non-finite value in curve '" + c.name + "'");
      }
      if (first) {
        x_min = x_max = c.x[i];
        y_min = y_max = c.y[i];
        first = false;
      } else {
        x_min = std::min(x_min, c.x[i]);
        x_max = std::max(x_max, c.x[i]);
        y_min = std::min(y_min, c.y[i]);
        y_max = std::max(y_max, c.y[i]);
      }
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;
  const double pad_y = 0.05 * (y_max - y_min);
  y_min -= pad_y;
  y_max += pad_y;

  constexpr int kW = 800, kH = 500;
  constexpr int kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ofstream out = detail::open_for_write(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  if (!axes.title.empty()) {
    out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">"
        << detail::svg_escape(axes.title) << "</text>\n";
  }
  // frame
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
  // ticks
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = x_min + (x_max - x_min) * i / kTicks;
    const double yv = y_min + (y_max - y_min) * i / kTicks;
    out << "<line x1=\"" << px(xv) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
        << px(xv) << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << px(xv) << "\" y=\"" << kTop + plot_h + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << detail::tick_label(xv) << "</text>\n";
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << kLeft
        << "\" y2=\"" << py(yv) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << detail::tick_label(yv) << "</text>\n";
  }
  // axis labels
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << detail::svg_escape(axes.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << kTop + plot_h / 2 << ")\">"
      << detail::svg_escape(axes.y_label) << "</text>\n";
  // curves
  for (std::size_t k = 0; k < curves.size(); ++k) {
    out << "<polyline fill=\"none\" stroke=\"" << detail::curve_color(k)
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < curves[k].x.size(); ++i) {
      out << px(curves[k].x[i]) << ',' << py(curves[k].y[i]) << ' ';
    }
    out << "\"/>\n";
  }
  // legend
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const double ly = kTop + 16 + 18.0 * k;
    out << "<line x1=\"" << kLeft + 10 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + 34 << "\" y2=\"" << ly << "\" stroke=\"" << detail::curve_color(k)
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << detail::svg_escape(curves[k].name) << "</text>\n";
  }
  out << "</svg>\n";
  if (!out.good()) throw io_error("write failed: " + path.string());
}

}  // namespace solistat::cli
