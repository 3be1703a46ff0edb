#include "wcmdp/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace wcmdp {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  std::replace(s.begin(), s.end(), ',', '.');
  return s;
}

std::string campaign_csv(const std::vector<CampaignResult>& rows) {
  std::string out = "N,policy,replications,mean,ci95,gap,updates_mean\n";
  for (const auto& r : rows) {
    out += std::to_string(r.N) + ',' + r.policy + ',' + std::to_string(r.replications) + ',' + format_number(r.mean) +
           ',' + format_number(r.ci95) + ',' + format_number(r.gap) + ',' + format_number(r.updates_mean) + '\n';
  }
  return out;
}

std::string casestudy_csv(const std::vector<CaseStudyRow>& rows) {
  std::string out = "scenario,fairness,policy,N,mean,ci95,gap,updates_mean\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    out += row.scenario + ',' + (row.fairness ? "on" : "off") + ',' + r.policy + ',' + std::to_string(r.N) + ',' +
           format_number(r.mean) + ',' + format_number(r.ci95) + ',' + format_number(r.gap) + ',' +
           format_number(r.updates_mean) + '\n';
  }
  return out;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Axis {
  double lo = 0.0;  // log10 bounds
  double hi = 1.0;
  double px0 = 0.0;
  double px1 = 1.0;
  double map(double v) const { return px0 + (std::log10(v) - lo) / (hi - lo) * (px1 - px0); }
};

void widen(Axis& ax) {
  if (!(ax.hi > ax.lo)) {
    ax.lo -= 0.5;
    ax.hi += 0.5;
  }
  const double pad = 0.05 * (ax.hi - ax.lo);
  ax.lo = std::floor((ax.lo - pad) * 10.0) / 10.0;
  ax.hi = std::ceil((ax.hi + pad) * 10.0) / 10.0;
}

void draw_panel(std::ostringstream& os, const PlotPanel& panel, double left, double width) {
  const double top = 50.0;
  const double bottom = kHeight - 60.0;
  const double x0 = left + 60.0;
  const double x1 = left + width - 20.0;

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& s : panel.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] > 0.0) || !(s.x[i] > 0.0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      const double e = i < s.err.size() ? s.err[i] : 0.0;
      ymin = std::min(ymin, s.y[i] - e > 0.0 ? s.y[i] - e : s.y[i]);
      ymax = std::max(ymax, s.y[i] + e);
    }
  }
  os << "<text x=\"" << fmt(left + width / 2) << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" << panel.title
     << "</text>\n";
  os << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(x1 - x0) << "\" height=\""
     << fmt(bottom - top) << "\" fill=\"none\" stroke=\"#000\"/>\n";
  if (!std::isfinite(xmin)) {
    os << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt((top + bottom) / 2)
       << "\" text-anchor=\"middle\">no positive values</text>\n";
    return;
  }
  Axis ax{std::log10(xmin), std::log10(xmax), x0, x1};
  Axis ay{std::log10(ymin), std::log10(ymax), bottom, top};
  widen(ax);
  widen(ay);

  // Decade ticks.
  for (int k = static_cast<int>(std::ceil(ax.lo)); k <= static_cast<int>(std::floor(ax.hi)); ++k) {
    const double px = ax.map(std::pow(10.0, k));
    os << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(bottom) << "\" x2=\"" << fmt(px) << "\" y2=\"" << fmt(bottom + 5)
       << "\" stroke=\"#000\"/><text x=\"" << fmt(px) << "\" y=\"" << fmt(bottom + 20)
       << "\" text-anchor=\"middle\" font-size=\"12\">1e" << k << "</text>\n";
  }
  for (int k = static_cast<int>(std::ceil(ay.lo)); k <= static_cast<int>(std::floor(ay.hi)); ++k) {
    const double py = ay.map(std::pow(10.0, k));
    os << "<line x1=\"" << fmt(x0 - 5) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(x0) << "\" y2=\"" << fmt(py)
       << "\" stroke=\"#000\"/><text x=\"" << fmt(x0 - 8) << "\" y=\"" << fmt(py + 4)
       << "\" text-anchor=\"end\" font-size=\"12\">1e" << k << "</text>\n";
  }
  os << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(kHeight - 20)
     << "\" text-anchor=\"middle\" font-size=\"13\">N</text>\n";
  os << "<text x=\"" << fmt(left + 15) << "\" y=\"" << fmt((top + bottom) / 2) << "\" font-size=\"13\" transform=\"rotate(-90 "
     << fmt(left + 15) << ' ' << fmt((top + bottom) / 2) << ")\" text-anchor=\"middle\">gap</text>\n";

  os << "<clipPath id=\"clip" << static_cast<int>(left) << "\"><rect x=\"" << fmt(x0) << "\" y=\"" << fmt(top)
     << "\" width=\"" << fmt(x1 - x0) << "\" height=\"" << fmt(bottom - top) << "\"/></clipPath>\n";
  os << "<g clip-path=\"url(#clip" << static_cast<int>(left) << ")\">\n";
  if (panel.reference_slopes && !panel.series.empty()) {
    const auto& s = panel.series.front();
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] > 0.0)) continue;
      const double xa = std::pow(10.0, ax.lo);
      const double xb = std::pow(10.0, ax.hi);
      for (double slope : {-0.5, -1.0}) {
        const double ya = s.y[i] * std::pow(xa / s.x[i], slope);
        const double yb = s.y[i] * std::pow(xb / s.x[i], slope);
        os << "<line x1=\"" << fmt(ax.map(xa)) << "\" y1=\"" << fmt(ay.map(ya)) << "\" x2=\"" << fmt(ax.map(xb))
           << "\" y2=\"" << fmt(ay.map(yb)) << "\" stroke=\"#888\" stroke-dasharray=\"" << (slope == -0.5 ? "6,4" : "2,3")
           << "\"/>\n";
      }
      break;
    }
  }
  for (std::size_t k = 0; k < panel.series.size(); ++k) {
    const auto& s = panel.series[k];
    const char* color = kColors[k % 6];
    std::string path;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] > 0.0) || !(s.x[i] > 0.0)) continue;
      const double px = ax.map(s.x[i]);
      const double py = ay.map(s.y[i]);
      path += (path.empty() ? "M" : " L") + fmt(px) + ',' + fmt(py);
      const double e = i < s.err.size() ? s.err[i] : 0.0;
      if (e > 0.0) {
        const double lo = s.y[i] - e > 0.0 ? ay.map(s.y[i] - e) : bottom;
        const double hi = ay.map(s.y[i] + e);
        os << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(lo) << "\" x2=\"" << fmt(px) << "\" y2=\"" << fmt(hi)
           << "\" stroke=\"" << color << "\"/>\n";
      }
      os << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    }
    if (!path.empty()) os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color << "\"/>\n";
  }
  os << "</g>\n";
  for (std::size_t k = 0; k < panel.series.size(); ++k) {
    const double ly = top + 18.0 + 18.0 * static_cast<double>(k);
    os << "<rect x=\"" << fmt(x1 - 150) << "\" y=\"" << fmt(ly - 10) << "\" width=\"10\" height=\"10\" fill=\""
       << kColors[k % 6] << "\"/><text x=\"" << fmt(x1 - 135) << "\" y=\"" << fmt(ly) << "\" font-size=\"12\">"
       << panel.series[k].name << "</text>\n";
  }
}

}  // namespace

std::string loglog_svg(const std::vector<PlotPanel>& panels) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"#fff\"/>\n";
  const double w = kWidth / static_cast<double>(std::max<std::size_t>(1, panels.size()));
  for (std::size_t i = 0; i < panels.size(); ++i) draw_panel(os, panels[i], w * static_cast<double>(i), w);
  os << "</svg>\n";
  return os.str();
}

std::string rate_study_svg(const RateStudy& study, const std::string& title) {
  PlotPanel panel;
  panel.title = title + " (slope " + (std::isnan(study.slope) ? std::string("n/a") : format_number(study.slope)) + ")";
  PlotSeries s;
  s.name = study.rows.empty() ? "gap" : study.rows.front().policy;
  for (const auto& r : study.rows) {
    s.x.push_back(static_cast<double>(r.N));
    s.y.push_back(r.gap);
    s.err.push_back(r.ci95);
  }
  panel.series.push_back(std::move(s));
  return loglog_svg({panel});
}

}  // namespace wcmdp
