#include "dobac/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dobac/errors.hpp"

namespace dobac {

namespace {

struct Series {
  std::string label;
  Eigen::VectorXd t, v;
  bool dashed = false;
};

struct Figure {
  std::string title, ylabel;
  std::vector<Series> series;
  std::vector<double> hlines;  // dashed horizontal guides
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string log_label(const RunLog& log) {
  if (log.meta.mode == "integrating")
    return log.meta.mode + " k_eta=" + fmt(log.meta.k_eta);
  return log.meta.mode;
}

Eigen::VectorXd decimated(const Eigen::VectorXd& v, Eigen::Index stride) {
  const Eigen::Index count = (v.size() + stride - 1) / stride;
  Eigen::VectorXd out(count);
  for (Eigen::Index i = 0; i < count; ++i) out[i] = v[std::min(i * stride, v.size() - 1)];
  return out;
}

void add_series(Figure& fig, const RunLog& log, const Eigen::VectorXd& v,
                const std::string& label, bool dashed = false) {
  const Eigen::Index stride = std::max<Eigen::Index>(1, log.rows() / 1500);
  Series s;
  s.label = label;
  s.t = decimated(log.time(), stride);
  s.v = decimated(v, stride);
  s.dashed = dashed;
  fig.series.push_back(std::move(s));
}

Figure build_figure(const std::vector<RunLog>& logs, PlotKind kind) {
  Figure fig;
  switch (kind) {
    case PlotKind::Tracking: {
      const RunLog& log = logs.front();
      fig.title = "first state and its reference";
      fig.ylabel = "x1";
      add_series(fig, log, log.series("x1"), "x1");
      add_series(fig, log, log.series("xr1"), "xr1", true);
      break;
    }
    case PlotKind::ErrorComparison: {
      fig.title = "tracking error norm";
      fig.ylabel = "||e||";
      for (const RunLog& log : logs)
        add_series(fig, log, log.block_norm("e", log.meta.n), log_label(log));
      break;
    }
    case PlotKind::UDrj: {
      fig.title = "rejection input";
      fig.ylabel = "u_drj";
      for (const RunLog& log : logs)
        add_series(fig, log, log.series("u_drj"), log_label(log));
      fig.hlines = {logs.front().meta.u_bar, -logs.front().meta.u_bar};
      break;
    }
    case PlotKind::DVsDhat: {
      const RunLog& log = logs.front();
      fig.title = "disturbance and its estimate";
      fig.ylabel = "d";
      add_series(fig, log, log.series("d"), "d", true);
      add_series(fig, log, log.series("dhat"), "d_hat");
      break;
    }
    case PlotKind::Eta: {
      fig.title = "rejection residual";
      fig.ylabel = "eta";
      for (const RunLog& log : logs)
        add_series(fig, log, log.series("eta"), log_label(log));
      break;
    }
  }
  return fig;
}

double nice_step(double range, int target) {
  if (!(range > 0.0)) return 1.0;
  const double raw = range / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace

PlotKind plot_kind_from_string(const std::string& name) {
  if (name == "tracking") return PlotKind::Tracking;
  if (name == "error-comparison") return PlotKind::ErrorComparison;
  if (name == "u-drj") return PlotKind::UDrj;
  if (name == "d-vs-dhat") return PlotKind::DVsDhat;
  if (name == "eta") return PlotKind::Eta;
  throw ConfigError("unknown plot kind \"" + name + "\"");
}

std::vector<std::string> plot_kind_names() {
  return {"tracking", "error-comparison", "u-drj", "d-vs-dhat", "eta"};
}

std::string render_svg(const std::vector<RunLog>& logs, PlotKind kind) {
  if (logs.empty()) throw ConfigError("plotting needs at least one log");
  for (const RunLog& log : logs)
    if (log.schema != logs.front().schema)
      throw SchemaMismatch("cannot combine logs with schemas \"" +
                           logs.front().schema + "\" and \"" + log.schema + "\"");

  const Figure fig = build_figure(logs, kind);

  const double W = 960, H = 540, ml = 70, mr = 24, mt = 44, mb = 52;
  const double pw = W - ml - mr, ph = H - mt - mb;

  double tmin = 0, tmax = 1, vmin = 0, vmax = 1;
  bool first = true;
  for (const Series& s : fig.series) {
    if (s.t.size() == 0) continue;
    const double a = s.t.minCoeff(), b = s.t.maxCoeff();
    const double c = s.v.minCoeff(), d = s.v.maxCoeff();
    if (first) {
      tmin = a; tmax = b; vmin = c; vmax = d;
      first = false;
    } else {
      tmin = std::min(tmin, a); tmax = std::max(tmax, b);
      vmin = std::min(vmin, c); vmax = std::max(vmax, d);
    }
  }
  for (double hline : fig.hlines) {
    vmin = std::min(vmin, hline);
    vmax = std::max(vmax, hline);
  }
  if (!(tmax > tmin)) tmax = tmin + 1.0;
  if (!(vmax > vmin)) { vmax += 0.5; vmin -= 0.5; }
  const double vpad = 0.06 * (vmax - vmin);
  vmin -= vpad;
  vmax += vpad;

  auto X = [&](double t) { return ml + (t - tmin) / (tmax - tmin) * pw; };
  auto Y = [&](double v) { return mt + (vmax - v) / (vmax - vmin) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
      << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
      << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\""
      << " text-anchor=\"middle\" fill=\"#222\">" << fig.title << "</text>\n";

  // Gridlines and tick labels.
  const double xstep = nice_step(tmax - tmin, 8);
  for (double t = std::ceil(tmin / xstep) * xstep; t <= tmax + 1e-9 * xstep; t += xstep) {
    const double px = X(t);
    svg << "<line x1=\"" << px << "\" y1=\"" << mt << "\" x2=\"" << px << "\" y2=\""
        << mt + ph << "\" stroke=\"#e0e0e0\"/>\n"
        << "<text x=\"" << px << "\" y=\"" << mt + ph + 18
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\""
        << " fill=\"#444\">" << fmt(t) << "</text>\n";
  }
  const double ystep = nice_step(vmax - vmin, 6);
  for (double v = std::ceil(vmin / ystep) * ystep; v <= vmax + 1e-9 * ystep; v += ystep) {
    const double py = Y(v);
    svg << "<line x1=\"" << ml << "\" y1=\"" << py << "\" x2=\"" << ml + pw << "\" y2=\""
        << py << "\" stroke=\"#e0e0e0\"/>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << py + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\""
        << " fill=\"#444\">" << fmt(v) << "</text>\n";
  }
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\""
      << ph << "\" fill=\"none\" stroke=\"#888\"/>\n"
      << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 14
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
      << " fill=\"#222\">t [s]</text>\n"
      << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
      << " fill=\"#222\" transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">"
      << fig.ylabel << "</text>\n";

  for (double hline : fig.hlines)
    svg << "<line x1=\"" << ml << "\" y1=\"" << Y(hline) << "\" x2=\"" << ml + pw
        << "\" y2=\"" << Y(hline)
        << "\" stroke=\"#999\" stroke-dasharray=\"3 3\"/>\n";

  const int npal = static_cast<int>(sizeof(kPalette) / sizeof(kPalette[0]));
  for (std::size_t i = 0; i < fig.series.size(); ++i) {
    const Series& s = fig.series[i];
    svg << "<polyline fill=\"none\" stroke=\"" << kPalette[i % npal]
        << "\" stroke-width=\"1.5\"";
    if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << " points=\"";
    for (Eigen::Index k = 0; k < s.t.size(); ++k)
      svg << fmt(X(s.t[k])) << ',' << fmt(Y(s.v[k])) << ' ';
    svg << "\"/>\n";
  }

  // Legend, top right of the plot area.
  for (std::size_t i = 0; i < fig.series.size(); ++i) {
    const double ly = mt + 16 + 18 * static_cast<double>(i);
    const double lx = ml + pw - 190;
    svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 26
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << kPalette[i % npal]
        << "\" stroke-width=\"2\"";
    if (fig.series[i].dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << "/>\n<text x=\"" << lx + 32 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">"
        << fig.series[i].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_svg(const std::string& path, const std::string& svg) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << svg;
  if (!out) throw IoError("write to \"" + path + "\" failed");
}

}  // namespace dobac
