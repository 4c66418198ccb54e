// svg_plot.cpp : dependency-free Bland-Altman SVG rendering
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "radiomics/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "radiomics/report.hpp"

namespace radiomics {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Largest of {1,2,5}*10^k not exceeding the raw step.
double nice_step(double range, int ticks) {
  if (!(range > 0.0)) return 1.0;
  const double raw = range / ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {5.0, 2.0, 1.0})
    if (m * mag <= raw) return m * mag;
  return mag;
}

struct Range {
  double lo, hi;
  double span() const { return hi - lo; }
};

Range padded(double lo, double hi, double frac) {
  if (lo > hi) std::swap(lo, hi);
  double pad = (hi - lo) * frac;
  if (pad == 0.0) pad = std::max(1.0, std::abs(hi)) * frac;
  return {lo - pad, hi + pad};
}

}  // namespace

std::string bland_altman_svg(const std::string& feature_id,
                             std::span<const double> pair_means,
                             std::span<const double> diffs_pct,
                             const BlandAltmanResult& ba,
                             const std::string& manifest_hash) {
  double x_lo = 0.0, x_hi = 1.0, y_lo = ba.lower_pct, y_hi = ba.upper_pct;
  bool first = true;
  for (std::size_t i = 0; i < pair_means.size() && i < diffs_pct.size(); ++i) {
    if (!std::isfinite(diffs_pct[i]) || !std::isfinite(pair_means[i])) continue;
    if (first) {
      x_lo = x_hi = pair_means[i];
      first = false;
    } else {
      x_lo = std::min(x_lo, pair_means[i]);
      x_hi = std::max(x_hi, pair_means[i]);
    }
    y_lo = std::min(y_lo, diffs_pct[i]);
    y_hi = std::max(y_hi, diffs_pct[i]);
  }
  y_lo = std::min(y_lo, 0.0);
  y_hi = std::max(y_hi, 0.0);
  const Range xr = padded(x_lo, x_hi, 0.06);
  const Range yr = padded(y_lo, y_hi, 0.10);

  auto sx = [&](double v) {
    return kLeft + (v - xr.lo) / xr.span() * (kWidth - kLeft - kRight);
  };
  auto sy = [&](double v) {
    return kHeight - kBottom - (v - yr.lo) / yr.span() * (kHeight - kTop - kBottom);
  };
  auto num = [](double v) { return format_double_text(v); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\">\n";
  s += "<!-- manifest " + manifest_hash + " -->\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"15\">" +
       feature_id + "</text>\n";

  // frame
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
       num(kWidth - kLeft - kRight) + "\" height=\"" + num(kHeight - kTop - kBottom) +
       "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // ticks
  const double xstep = nice_step(xr.span(), 6);
  for (double t = std::ceil(xr.lo / xstep) * xstep; t <= xr.hi + 1e-12 * xstep;
       t += xstep) {
    const double px = sx(t);
    s += "<line x1=\"" + num(px) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" +
         num(px) + "\" y2=\"" + num(kHeight - kBottom + 5) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    s += "<text x=\"" + num(px) + "\" y=\"" + num(kHeight - kBottom + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         fmt_tick(t) + "</text>\n";
  }
  const double ystep = nice_step(yr.span(), 6);
  for (double t = std::ceil(yr.lo / ystep) * ystep; t <= yr.hi + 1e-12 * ystep;
       t += ystep) {
    const double py = sy(t);
    s += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(kLeft) +
         "\" y2=\"" + num(py) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         fmt_tick(t) + "</text>\n";
  }

  // mean and repeatability limit lines
  auto hline = [&](double v, const char* color, bool dashed, const std::string& label) {
    if (v < yr.lo || v > yr.hi) return;
    const double py = sy(v);
    s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py) + "\" x2=\"" +
         num(kWidth - kRight) + "\" y2=\"" + num(py) + "\" stroke=\"" + color +
         "\" stroke-width=\"1.5\"" +
         (dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
    s += "<text x=\"" + num(kWidth - kRight - 4) + "\" y=\"" + num(py - 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\" fill=\"" +
         color + "\">" + label + "</text>\n";
  };
  hline(ba.mean_pct, "#1f77b4", false, "mean " + fmt_tick(ba.mean_pct));
  hline(ba.upper_pct, "#d62728", true, "+1.96 SD " + fmt_tick(ba.upper_pct));
  hline(ba.lower_pct, "#d62728", true, "-1.96 SD " + fmt_tick(ba.lower_pct));

  // points
  for (std::size_t i = 0; i < pair_means.size() && i < diffs_pct.size(); ++i) {
    if (!std::isfinite(diffs_pct[i]) || !std::isfinite(pair_means[i])) continue;
    s += "<circle cx=\"" + num(sx(pair_means[i])) + "\" cy=\"" + num(sy(diffs_pct[i])) +
         "\" r=\"3\" fill=\"#333333\" fill-opacity=\"0.75\"/>\n";
  }

  // axis labels
  s += "<text x=\"" + num(kLeft + (kWidth - kLeft - kRight) / 2) + "\" y=\"" +
       num(kHeight - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">pair mean"
       "</text>\n";
  s += "<text x=\"16\" y=\"" + num(kTop + (kHeight - kTop - kBottom) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       "transform=\"rotate(-90 16 " +
       num(kTop + (kHeight - kTop - kBottom) / 2) + ")\">difference (%)</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace radiomics
