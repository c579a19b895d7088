#include "argocast/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "argocast/errors.hpp"

namespace argocast::svg {

namespace {

constexpr int kWidth = 920;
constexpr int kPanelHeight = 300;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 46;
constexpr int kMarginBottom = 40;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf);
}

// Round y range up to a tidy tick step.
double nice_step(double span) {
  if (span <= 0) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::vector<Panel>& panels) {
  if (panels.empty()) throw ValidationError("chart needs at least one panel");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write chart: " + path.string());

  const int height = kMarginTop + static_cast<int>(panels.size()) * kPanelHeight + 24;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";

  // Shared legend on the first panel's series set.
  {
    int x = kMarginLeft;
    for (const auto& s : panels.front().series) {
      out << "<rect x=\"" << x << "\" y=\"30\" width=\"14\" height=\"4\" fill=\"" << s.color
          << "\"/>\n";
      out << "<text x=\"" << x + 18 << "\" y=\"36\" font-size=\"11\">" << s.label << "</text>\n";
      x += 18 + static_cast<int>(s.label.size()) * 7 + 16;
    }
  }

  for (size_t pi = 0; pi < panels.size(); ++pi) {
    const Panel& panel = panels[pi];
    const int top = kMarginTop + static_cast<int>(pi) * kPanelHeight;
    const int plot_w = kWidth - kMarginLeft - kMarginRight;
    const int plot_h = kPanelHeight - kMarginBottom - 24;

    Date x_min, x_max;
    double y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const auto& s : panel.series) {
      for (const auto& [d, v] : s.points) {
        if (first) {
          x_min = x_max = d;
          y_min = y_max = v;
          first = false;
        } else {
          x_min = std::min(x_min, d);
          x_max = std::max(x_max, d);
          y_min = std::min(y_min, v);
          y_max = std::max(y_max, v);
        }
      }
    }
    if (first) continue;  // empty panel
    y_min = std::min(0.0, y_min);
    if (y_max <= y_min) y_max = y_min + 1.0;
    const int x_span = std::max(1, x_max - x_min);

    auto px = [&](Date d) {
      return kMarginLeft + plot_w * static_cast<double>(d - x_min) / x_span;
    };
    auto py = [&](double v) { return top + 24 + plot_h * (1.0 - (v - y_min) / (y_max - y_min)); };

    out << "<text x=\"" << kMarginLeft << "\" y=\"" << top + 14 << "\" font-size=\"13\">"
        << panel.title << "</text>\n";
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << top + 24 << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#888\"/>\n";

    const double step = nice_step(y_max - y_min);
    for (double v = std::ceil(y_min / step) * step; v <= y_max + 1e-9; v += step) {
      out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(py(v)) << "\" x2=\""
          << kMarginLeft + plot_w << "\" y2=\"" << num(py(v))
          << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
      out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << num(py(v) + 4)
          << "\" text-anchor=\"end\" font-size=\"10\">" << num(v) << "</text>\n";
    }
    const int n_xticks = 6;
    for (int i = 0; i <= n_xticks; ++i) {
      const Date d = x_min + (x_span * i) / n_xticks;
      out << "<text x=\"" << num(px(d)) << "\" y=\"" << top + 24 + plot_h + 16
          << "\" text-anchor=\"middle\" font-size=\"10\">" << d.to_iso() << "</text>\n";
    }

    for (const auto& s : panel.series) {
      if (s.points.empty()) continue;
      auto pts = s.points;
      std::sort(pts.begin(), pts.end());
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\"";
      for (const auto& [d, v] : pts) out << num(px(d)) << ',' << num(py(v)) << ' ';
      out << "\"/>\n";
    }
  }
  out << "</svg>\n";
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace argocast::svg
