#include "ordexp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "ordexp/report.hpp"

namespace ordexp {

namespace {

constexpr double kPanelW = 440.0;
constexpr double kPanelH = 300.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 130.0;  // legend column
constexpr double kTop = 40.0;
constexpr double kBottom = 45.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct PanelKey {
  int order;  // target·1000 + loss rank
  std::string loss;
  auto operator<=>(const PanelKey&) const = default;
};

struct Series {
  EstimatorId id;
  std::vector<std::pair<double, double>> points;
};

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(target, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

std::string render_rri_svg(const std::vector<mc::RiskRow>& rows, const std::string& title) {
  // Panels ordered by target then first appearance of the loss.
  std::vector<std::string> loss_order;
  for (const auto& r : rows)
    if (std::find(loss_order.begin(), loss_order.end(), r.loss) == loss_order.end())
      loss_order.push_back(r.loss);
  std::map<PanelKey, std::vector<Series>> panels;
  for (const auto& r : rows) {
    const int target = target_of(r.estimator) == Target::sigma1 ? 1 : 2;
    const int loss_rank =
        static_cast<int>(std::find(loss_order.begin(), loss_order.end(), r.loss) - loss_order.begin());
    auto& series = panels[{target * 1000 + loss_rank, r.loss}];
    auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) { return s.id == r.estimator; });
    if (it == series.end()) {
      series.push_back({r.estimator, {}});
      it = std::prev(series.end());
    }
    it->points.emplace_back(r.eta, r.rri);
  }

  const int columns = std::max<int>(1, static_cast<int>(loss_order.size()));
  int targets_present = 0;
  for (int t : {1, 2}) {
    if (std::any_of(panels.begin(), panels.end(), [&](const auto& p) { return p.first.order / 1000 == t; }))
      ++targets_present;
  }
  targets_present = std::max(targets_present, 1);
  const double width = columns * kPanelW;
  const double height = 30.0 + targets_present * kPanelH;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"" << fmt(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(title) << "</text>\n";
  }

  int row_index = -1;
  int last_target = 0;
  for (const auto& [key, series] : panels) {
    const int target = key.order / 1000;
    if (target != last_target) {
      ++row_index;
      last_target = target;
    }
    const int col = key.order % 1000;
    const double ox = col * kPanelW;
    const double oy = 30.0 + row_index * kPanelH;
    const double x0 = ox + kLeft;
    const double x1 = ox + kPanelW - kRight;
    const double y0 = oy + kPanelH - kBottom;
    const double y1 = oy + kTop;

    double ymin = 0.0;
    double ymax = 0.0;
    double xmax = 0.0;
    for (const auto& s : series) {
      for (const auto& [x, y] : s.points) {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
        xmax = std::max(xmax, x);
      }
    }
    if (ymax - ymin < 1e-9) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    const double xmin = 0.0;
    xmax = std::max(xmax, 1.0);
    auto px = [&](double x) { return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0); };
    auto py = [&](double y) { return y0 - (y - ymin) / (ymax - ymin) * (y0 - y1); };

    svg << "<g>\n";
    svg << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(oy + 22)
        << "\" text-anchor=\"middle\" font-size=\"12\">RRI for sigma" << target << "^k, loss "
        << escape(key.loss) << "</text>\n";
    svg << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1) << "\" y2=\""
        << fmt(y0) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x0) << "\" y2=\""
        << fmt(y1) << "\" stroke=\"black\"/>\n";
    for (double t : nice_ticks(xmin, xmax, 5)) {
      svg << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(px(t))
          << "\" y2=\"" << fmt(y0 + 5) << "\" stroke=\"black\"/>";
      svg << "<text x=\"" << fmt(px(t)) << "\" y=\"" << fmt(y0 + 17) << "\" text-anchor=\"middle\">"
          << format_number(t, 3) << "</text>\n";
    }
    for (double t : nice_ticks(ymin, ymax, 6)) {
      svg << "<line x1=\"" << fmt(x0 - 5) << "\" y1=\"" << fmt(py(t)) << "\" x2=\"" << fmt(x0)
          << "\" y2=\"" << fmt(py(t)) << "\" stroke=\"black\"/>";
      svg << "<text x=\"" << fmt(x0 - 8) << "\" y=\"" << fmt(py(t) + 4) << "\" text-anchor=\"end\">"
          << format_number(t, 3) << "</text>\n";
    }
    if (ymin < 0.0 && ymax > 0.0) {
      svg << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << fmt(x1)
          << "\" y2=\"" << fmt(py(0)) << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
    }
    svg << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(y0 + 35)
        << "\" text-anchor=\"middle\">eta = sigma1/sigma2</text>\n";
    svg << "<text transform=\"translate(" << fmt(ox + 14) << ' ' << fmt((y0 + y1) / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">RRI (%)</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
      const char* color = kPalette[i % std::size(kPalette)];
      auto points = series[i].points;
      std::stable_sort(points.begin(), points.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t j = 0; j < points.size(); ++j) {
        svg << (j ? " " : "") << fmt(px(points[j].first)) << ',' << fmt(py(points[j].second));
      }
      svg << "\"/>\n";
      const double ly = y1 + 14.0 * static_cast<double>(i);
      svg << "<line x1=\"" << fmt(x1 + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(x1 + 32)
          << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
      svg << "<text x=\"" << fmt(x1 + 36) << "\" y=\"" << fmt(ly + 4) << "\">"
          << to_string(series[i].id) << "</text>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ordexp
