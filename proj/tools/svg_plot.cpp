#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "barotherm/errors.hpp"
#include "format.hpp"

namespace barotherm::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0.0, hi = 1.0;  // in transformed units

  double transform(double v) const { return log ? std::log10(v) : v; }
  double fraction(double v) const { return (transform(v) - lo) / (hi - lo); }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::ceil(lo - 1e-9); e <= hi + 1e-9; e += 1.0) out.push_back(std::pow(10.0, e));
      return out;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
      out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
  }
};

Axis make_axis(bool want_log, const std::vector<Series>& series, bool use_x) {
  Axis ax;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  bool positive = true;
  for (const auto& s : series) {
    for (double v : use_x ? s.x : s.y) {
      if (!std::isfinite(v)) throw DomainError("plot data must be finite");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      positive = positive && v > 0.0;
    }
  }
  ax.log = want_log && positive;
  ax.lo = ax.transform(lo);
  ax.hi = ax.transform(hi);
  if (ax.log) {
    ax.lo = std::floor(ax.lo);
    ax.hi = std::max(std::ceil(ax.hi), ax.lo + 1.0);
  } else if (ax.hi - ax.lo < 1e-300) {
    const double pad = std::max(1.0, std::abs(ax.lo));
    ax.lo -= pad;
    ax.hi += pad;
  }
  return ax;
}

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series) {
  if (series.empty()) throw DomainError("plot needs at least one series");
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || s.x.size() < 2) {
      throw DomainError("each series needs matching x/y of length >= 2");
    }
  }
  const Axis ax = make_axis(spec.log_x, series, true);
  const Axis ay = make_axis(spec.log_y, series, false);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto px = [&](double v) { return kLeft + pw * ax.fraction(v); };
  const auto py = [&](double v) { return kTop + ph * (1.0 - ay.fraction(v)); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(spec.title) << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ax.ticks()) {
    const double x = px(t);
    svg << "<line x1=\"" << x << "\" y1=\"" << kTop + ph << "\" x2=\"" << x << "\" y2=\"" << kTop + ph + 5
        << "\" stroke=\"black\"/>\n<text x=\"" << x << "\" y=\"" << kTop + ph + 19
        << "\" text-anchor=\"middle\">" << significant(t, 4) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">" << significant(t, 4) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
      << escape(spec.x_label) << "</text>\n"
      << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kTop + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (!s.dash.empty()) svg << " stroke-dasharray=\"" << s.dash << '"';
    svg << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg << (i ? " " : "") << significant(px(s.x[i]), 6) << ',' << significant(py(s.y[i]), 6);
    }
    svg << "\"/>\n";
    const double ly = kTop + 16 + 16 * static_cast<double>(k);
    svg << "<line x1=\"" << kLeft + pw - 120 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kLeft + pw - 95
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (!s.dash.empty()) svg << " stroke-dasharray=\"" << s.dash << '"';
    svg << "/>\n<text x=\"" << kLeft + pw - 90 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace barotherm::cli
