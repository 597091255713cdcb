#ifndef CCDEG_CLI_SVG_HPP
#define CCDEG_CLI_SVG_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ccdeg/core.hpp"

namespace ccdeg::cli {

/// Minimal 2-d line plot: polylines, segments and markers over a data
/// rectangle, with tick labels on both axes.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

  void polyline(std::vector<std::pair<double, double>> pts, std::string color, double width = 1.5) {
    for (const auto& p : pts) extend(p);
    items_.push_back({Item::line, std::move(pts), std::move(color), width});
  }
  void segment(double x0, double y0, double x1, double y1, std::string color, double width = 2.0) {
    polyline({{x0, y0}, {x1, y1}}, std::move(color), width);
  }
  void marker(double x, double y, std::string color, double r = 3.0) {
    extend({x, y});
    items_.push_back({Item::dot, {{x, y}}, std::move(color), r});
  }

  std::string render() const {
    double x0 = xmin_, x1 = xmax_, y0 = ymin_, y1 = ymax_;
    if (!(x0 < x1)) x0 -= 1.0, x1 += 1.0;
    if (!(y0 < y1)) y0 -= 1.0, y1 += 1.0;
    const double padx = 0.04 * (x1 - x0), pady = 0.06 * (y1 - y0);
    x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
    auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); };
    auto sy = [&](double y) { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) + "\" height=\"" + num(kH) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(kW / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" + esc(title_) + "</text>\n";
    s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kW - kLeft - kRight) + "\" height=\"" +
         num(kH - kTop - kBottom) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
      s += "<text x=\"" + num(sx(xv)) + "\" y=\"" + num(kH - kBottom + 16) + "\" text-anchor=\"middle\" font-size=\"10\">" +
           tick(xv) + "</text>\n";
      s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(sy(yv) + 3) + "\" text-anchor=\"end\" font-size=\"10\">" +
           tick(yv) + "</text>\n";
    }
    s += "<text x=\"" + num(kW / 2) + "\" y=\"" + num(kH - 6) + "\" text-anchor=\"middle\" font-size=\"12\">" +
         esc(xlabel_) + "</text>\n";
    s += "<text x=\"14\" y=\"" + num(kH / 2) + "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 " +
         num(kH / 2) + ")\">" + esc(ylabel_) + "</text>\n";
    for (const auto& it : items_) {
      if (it.kind == Item::dot) {
        s += "<circle cx=\"" + num(sx(it.pts[0].first)) + "\" cy=\"" + num(sy(it.pts[0].second)) + "\" r=\"" +
             num(it.width) + "\" fill=\"" + it.color + "\"/>\n";
        continue;
      }
      s += "<polyline fill=\"none\" stroke=\"" + it.color + "\" stroke-width=\"" + num(it.width) + "\" points=\"";
      for (std::size_t i = 0; i < it.pts.size(); ++i) {
        if (i) s += " ";
        s += num(sx(it.pts[i].first)) + "," + num(sy(it.pts[i].second));
      }
      s += "\"/>\n";
    }
    s += "</svg>\n";
    return s;
  }

 private:
  static constexpr double kW = 640, kH = 420, kLeft = 60, kRight = 20, kTop = 30, kBottom = 40;

  struct Item {
    enum Kind { line, dot } kind;
    std::vector<std::pair<double, double>> pts;
    std::string color;
    double width;
  };

  void extend(std::pair<double, double> p) {
    if (!std::isfinite(p.first) || !std::isfinite(p.second)) return;
    xmin_ = std::min(xmin_, p.first), xmax_ = std::max(xmax_, p.first);
    ymin_ = std::min(ymin_, p.second), ymax_ = std::max(ymax_, p.second);
  }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }
  static std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
  }
  static std::string esc(const std::string& t) {
    std::string o;
    for (char c : t) {
      if (c == '<') o += "&lt;";
      else if (c == '>') o += "&gt;";
      else if (c == '&') o += "&amp;";
      else o += c;
    }
    return o;
  }

  std::string title_, xlabel_, ylabel_;
  std::vector<Item> items_;
  double xmin_ = std::numeric_limits<double>::infinity(), xmax_ = -std::numeric_limits<double>::infinity();
  double ymin_ = std::numeric_limits<double>::infinity(), ymax_ = -std::numeric_limits<double>::infinity();
};

}  // namespace ccdeg::cli

#endif  // CCDEG_CLI_SVG_HPP
