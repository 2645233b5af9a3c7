#include "homog/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace homog {

std::string format_number(double v) {
  // shortest representation that round-trips: try increasing precision
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary); // binary: LF endings everywhere
  if (!out) throw ValidationError("write_csv: cannot open " + path);
  for (size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw ValidationError("write_csv: row width mismatch in " + path);
    for (size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c]))
        throw ValidationError("write_csv: non-finite value in " + path);
      out << (c ? "," : "") << format_number(row[c]);
    }
    out << "\n";
  }
  if (!out) throw ValidationError("write_csv: write failure for " + path);
}

namespace {

std::string xml_escape(const std::string& s) {
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

// fixed two-decimal pixel coordinates keep the file byte-deterministic
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

} // namespace

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series) {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size())
      throw ValidationError("write_loglog_svg: series '" + s.name + "' length mismatch");
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
        throw ValidationError("write_loglog_svg: nonpositive or non-finite point in series '" +
                              s.name + "'");
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        first = false;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  }
  if (first) throw ValidationError("write_loglog_svg: no data points");

  auto pad = [](double& lo, double& hi) {
    double llo = std::log10(lo), lhi = std::log10(hi);
    if (lhi - llo < 0.5) {
      double mid = 0.5 * (llo + lhi);
      llo = mid - 0.25;
      lhi = mid + 0.25;
    }
    double margin = 0.05 * (lhi - llo);
    lo = llo - margin;
    hi = lhi + margin;
  };
  double lx0 = xmin, lx1 = xmax, ly0 = ymin, ly1 = ymax;
  pad(lx0, lx1);
  pad(ly0, ly1);

  const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 55;
  auto X = [&](double v) { return ml + (std::log10(v) - lx0) / (lx1 - lx0) * (W - ml - mr); };
  auto Y = [&](double v) { return H - mb - (std::log10(v) - ly0) / (ly1 - ly0) * (H - mt - mb); };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg << "<text x=\"" << px(W / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";

  // decade grid lines and tick labels
  for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1)); ++e) {
    double x = X(std::pow(10.0, e));
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << px(mt) << "\" x2=\"" << px(x) << "\" y2=\""
        << px(H - mb) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << px(x) << "\" y=\"" << px(H - mb + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" << e
        << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1)); ++e) {
    double y = Y(std::pow(10.0, e));
    svg << "<line x1=\"" << px(ml) << "\" y1=\"" << px(y) << "\" x2=\"" << px(W - mr)
        << "\" y2=\"" << px(y) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << px(ml - 6) << "\" y=\"" << px(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << e
        << "</text>\n";
  }
  svg << "<rect x=\"" << px(ml) << "\" y=\"" << px(mt) << "\" width=\"" << px(W - ml - mr)
      << "\" height=\"" << px(H - mt - mb)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << px(W / 2) << "\" y=\"" << px(H - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape(x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << px(H / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << px(H / 2) << ")\">" << xml_escape(y_label) << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 8];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < series[s].x.size(); ++i)
      svg << (i ? " " : "") << px(X(series[s].x[i])) << "," << px(Y(series[s].y[i]));
    svg << "\"/>\n";
    for (size_t i = 0; i < series[s].x.size(); ++i)
      svg << "<circle cx=\"" << px(X(series[s].x[i])) << "\" cy=\"" << px(Y(series[s].y[i]))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    double ly = mt + 16 + 16 * static_cast<double>(s);
    svg << "<line x1=\"" << px(W - mr - 150) << "\" y1=\"" << px(ly - 4) << "\" x2=\""
        << px(W - mr - 130) << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << px(W - mr - 124) << "\" y=\"" << px(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(series[s].name)
        << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("write_loglog_svg: cannot open " + path);
  out << svg.str();
  if (!out) throw ValidationError("write_loglog_svg: write failure for " + path);
}

} // namespace homog
