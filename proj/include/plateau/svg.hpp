// Static SVG plots, generated directly from persisted CSV columns so a plot
// can always be re-emitted offline from its data file.
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace plateau {
namespace io {

struct PlotSpec {
  std::string kind;  // profile | loglog-fit | window-scaling
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;
};

struct PlotSeries {
  std::vector<double> x, y, yerr;  // yerr optional (empty)
  bool line = true;
  bool points = true;
  std::string color = "#1f77b4";
};

namespace detail {

inline std::string fnum(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace detail

inline void emit_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series,
                      const std::string& annotation, const std::string& path) {
  if (series.empty()) throw std::invalid_argument("emit_plot: no data");
  const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 55;
  auto tx = [&](double v) { return spec.logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.logy ? std::log10(v) : v; };

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  std::size_t npts = 0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((spec.logx && s.x[i] <= 0) || (spec.logy && s.y[i] <= 0)) continue;
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
      ++npts;
    }
  if (npts == 0) throw std::invalid_argument("emit_plot: no plottable points");
  if (xmax - xmin < 1e-12) {
    xmax += 0.5;
    xmin -= 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymax += 0.5;
    ymin -= 0.5;
  }
  double xpad = 0.04 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;
  auto px = [&](double v) { return ml + (tx(v) - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (ty(v) - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<!-- plateau-plot kind=" << spec.kind << " xrange=[" << detail::fnum(xmin) << ","
      << detail::fnum(xmax) << "] yrange=[" << detail::fnum(ymin) << "," << detail::fnum(ymax)
      << "] points=" << npts << " -->\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
  // ticks
  for (int i = 0; i <= 4; ++i) {
    double fx = xmin + (xmax - xmin) * i / 4.0;
    double fy = ymin + (ymax - ymin) * i / 4.0;
    double sx = ml + (W - ml - mr) * i / 4.0;
    double sy = H - mb - (H - mt - mb) * i / 4.0;
    out << "<line x1=\"" << sx << "\" y1=\"" << H - mb << "\" x2=\"" << sx << "\" y2=\""
        << H - mb + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << sx << "\" y=\"" << H - mb + 18 << "\" font-size=\"11\" text-anchor=\"middle\">"
        << detail::fnum(spec.logx ? std::pow(10.0, fx) : fx) << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy << "\" x2=\"" << ml << "\" y2=\"" << sy
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << sy + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
        << detail::fnum(spec.logy ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  out << "<text x=\"" << (W / 2) << "\" y=\"" << H - 12 << "\" font-size=\"13\" text-anchor=\"middle\">"
      << spec.xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << (H / 2) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (H / 2) << ")\">" << spec.ylabel << "</text>\n";
  out << "<text x=\"" << (W / 2) << "\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">"
      << spec.title << "</text>\n";

  for (const auto& s : series) {
    if (s.line) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if ((spec.logx && s.x[i] <= 0) || (spec.logy && s.y[i] <= 0)) continue;
        out << px(s.x[i]) << "," << py(s.y[i]) << " ";
      }
      out << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((spec.logx && s.x[i] <= 0) || (spec.logy && s.y[i] <= 0)) continue;
      if (!s.yerr.empty() && s.yerr[i] > 0 && !spec.logy) {
        out << "<line x1=\"" << px(s.x[i]) << "\" y1=\"" << py(s.y[i] - s.yerr[i]) << "\" x2=\""
            << px(s.x[i]) << "\" y2=\"" << py(s.y[i] + s.yerr[i]) << "\" stroke=\"" << s.color
            << "\"/>\n";
      }
      if (s.points)
        out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\""
            << s.color << "\"/>\n";
    }
  }
  if (!annotation.empty())
    out << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#444\">" << annotation << "</text>\n";
  out << "</svg>\n";
}

}  // namespace io
}  // namespace plateau
