#include "agepinn/cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "agepinn/error.hpp"

namespace agepinn::cli {
namespace {

constexpr double kLeft = 70, kTop = 30, kWidth = 600, kHeight = 400;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Viridis-like ramp, s in [0,1].
std::string color(double s) {
  static constexpr std::array<std::array<double, 3>, 5> stops = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  s = std::clamp(s, 0.0, 1.0) * (stops.size() - 1);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(s), stops.size() - 2);
  const double f = s - static_cast<double>(k);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
  return buf;
}

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text_at(double x, double y, const std::string& s, const char* anchor = "middle",
                    const std::string& extra = "") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" + s +
         "</text>\n";
}

std::string frame() {
  return "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" fill=\"none\" stroke=\"black\"/>\n";
}

}  // namespace

std::string field_heatmap_svg(const ref::FieldTable& field) {
  const std::size_t na = field.ages.size(), nt = field.years.size();
  if (na == 0 || nt == 0 || field.values.size() != na * nt) throw UsageError("empty or ragged field");
  const auto [lo_it, hi_it] = std::minmax_element(field.values.begin(), field.values.end());
  const double lo = *lo_it, hi = *hi_it;
  const double span = hi > lo ? hi - lo : 1.0;

  // At most 200 rows and 300 columns of cells.
  const std::size_t sa = (na + 199) / 200, st = (nt + 299) / 300;
  const std::size_t rows = (na + sa - 1) / sa, cols = (nt + st - 1) / st;
  const double cw = kWidth / static_cast<double>(cols), ch = kHeight / static_cast<double>(rows);

  std::string s = header(kLeft + kWidth + 120, kTop + kHeight + 60);
  s += "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t i = r * sa;
    const double y = kTop + kHeight - static_cast<double>(r + 1) * ch;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t n = c * st;
      s += "<rect x=\"" + num(kLeft + static_cast<double>(c) * cw) + "\" y=\"" + num(y) + "\" width=\"" +
           num(cw) + "\" height=\"" + num(ch) + "\" fill=\"" +
           color((field.values[i * nt + n] - lo) / span) + "\"/>\n";
    }
  }
  s += "</g>\n" + frame();

  for (int k = 0; k <= 4; ++k) {
    const double f = k / 4.0;
    const double year = field.years.front() + f * (field.years.back() - field.years.front());
    const double age = field.ages.front() + f * (field.ages.back() - field.ages.front());
    s += text_at(kLeft + f * kWidth, kTop + kHeight + 18, label(year));
    s += text_at(kLeft - 8, kTop + kHeight - f * kHeight + 4, label(age), "end");
  }
  s += text_at(kLeft + kWidth / 2, kTop + kHeight + 40, "year");
  s += text_at(20, kTop + kHeight / 2, "age", "middle",
               " transform=\"rotate(-90 20 " + num(kTop + kHeight / 2) + ")\"");

  const double bx = kLeft + kWidth + 30;
  for (int k = 0; k < 50; ++k) {
    s += "<rect x=\"" + num(bx) + "\" y=\"" + num(kTop + kHeight - (k + 1) * kHeight / 50) +
         "\" width=\"20\" height=\"" + num(kHeight / 50) + "\" fill=\"" + color((k + 0.5) / 50) + "\"/>\n";
  }
  s += text_at(bx + 24, kTop + 10, label(hi), "start");
  s += text_at(bx + 24, kTop + kHeight, label(lo), "start");
  s += text_at(bx + 10, kTop - 10, "density");
  s += "</svg>\n";
  return s;
}

std::string loss_chart_svg(std::span<const train::EpochRecord> history) {
  if (history.empty()) throw UsageError("empty loss history");
  using Get = double (*)(const train::EpochRecord&);
  const std::array<std::pair<const char*, Get>, 4> series = {{
      {"total", [](const train::EpochRecord& r) { return r.total; }},
      {"pde", [](const train::EpochRecord& r) { return r.pde; }},
      {"ic", [](const train::EpochRecord& r) { return r.ic; }},
      {"bc", [](const train::EpochRecord& r) { return r.bc; }},
  }};
  const std::array<const char*, 4> colors = {"#000000", "#1f77b4", "#d62728", "#2ca02c"};

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : history) {
    for (const auto& [name, get] : series) {
      const double v = get(r);
      if (v > 0 && std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!(hi > 0)) lo = hi = 1.0;
  double dlo = std::floor(std::log10(lo)), dhi = std::ceil(std::log10(hi));
  if (dhi <= dlo) dhi = dlo + 1;
  const double e0 = static_cast<double>(history.front().epoch), e1 = static_cast<double>(history.back().epoch);
  const double espan = e1 > e0 ? e1 - e0 : 1.0;
  const auto px = [&](double e) { return kLeft + (e - e0) / espan * kWidth; };
  const auto py = [&](double v) {
    const double l = std::log10(std::max(v, std::pow(10.0, dlo)));
    return kTop + kHeight - (l - dlo) / (dhi - dlo) * kHeight;
  };

  std::string s = header(kLeft + kWidth + 100, kTop + kHeight + 60) + frame();
  for (double d = dlo; d <= dhi; d += 1) {
    s += "<line x1=\"" + num(kLeft) + "\" x2=\"" + num(kLeft + kWidth) + "\" y1=\"" + num(py(std::pow(10, d))) +
         "\" y2=\"" + num(py(std::pow(10, d))) + "\" stroke=\"#dddddd\"/>\n";
    s += text_at(kLeft - 8, py(std::pow(10, d)) + 4, "1e" + label(d), "end");
  }
  for (int k = 0; k <= 4; ++k) {
    const double e = e0 + k / 4.0 * espan;
    s += text_at(px(e), kTop + kHeight + 18, label(std::round(e)));
  }
  s += text_at(kLeft + kWidth / 2, kTop + kHeight + 40, "epoch");
  s += text_at(20, kTop + kHeight / 2, "loss", "middle",
               " transform=\"rotate(-90 20 " + num(kTop + kHeight / 2) + ")\"");

  for (std::size_t k = 0; k < series.size(); ++k) {
    s += "<polyline fill=\"none\" stroke=\"" + std::string(colors[k]) + "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < history.size(); ++i) {
      const double v = series[k].second(history[i]);
      s += (i ? " " : "") + num(px(static_cast<double>(history[i].epoch))) + "," +
           num(py(std::isfinite(v) && v > 0 ? v : 0.0));
    }
    s += "\"/>\n";
    const double ly = kTop + 15 + 18 * static_cast<double>(k);
    s += "<line x1=\"" + num(kLeft + kWidth + 15) + "\" x2=\"" + num(kLeft + kWidth + 35) + "\" y1=\"" + num(ly) +
         "\" y2=\"" + num(ly) + "\" stroke=\"" + colors[k] + "\"/>\n";
    s += text_at(kLeft + kWidth + 40, ly + 4, series[k].first, "start");
  }
  s += "</svg>\n";
  return s;
}

}  // namespace agepinn::cli
