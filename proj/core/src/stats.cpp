// stats.cpp : Bland-Altman, Shapiro-Wilk, reliability categories, Spearman, ICC
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

#include "radiomics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace radiomics {

namespace {

constexpr double kAlpha = 0.05;
constexpr double kLimitFactor = 1.96;
constexpr int kShapiroMaxN = 5000;

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

// Sample standard deviation (n-1).
double sd_of(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / double(v.size() - 1));
}

void check_series(const PairedSeries& s, std::size_t min_n) {
  if (s.test.size() != s.retest.size())
    throw_computation("paired series lengths differ for '" + s.feature_id + "'");
  if (s.test.size() < min_n)
    throw_computation("paired series too short for '" + s.feature_id + "' (n=" +
                      std::to_string(s.test.size()) + ")");
  for (std::size_t i = 0; i < s.test.size(); ++i)
    if (!std::isfinite(s.test[i]) || !std::isfinite(s.retest[i]))
      throw_computation("non-finite value in series '" + s.feature_id + "'");
}

}  // namespace

///////////////////////////////////////////////////////////////////////////
//                         Normal distribution                           //
///////////////////////////////////////////////////////////////////////////

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Inverse normal CDF by safeguarded Newton iteration on erfc; accurate to
// ~1e-14 over the p range the callers use.
double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw_computation("normal_quantile requires p in (0,1)");
  // crude initial guess
  double x;
  if (p < 0.02 || p > 0.98) {
    const double q = p < 0.5 ? p : 1.0 - p;
    double t = std::sqrt(-2.0 * std::log(q));
    x = t - (2.30753 + 0.27061 * t) / (1.0 + 0.99229 * t + 0.04481 * t * t);
    if (p < 0.5) x = -x;
  } else {
    x = (p - 0.5) * std::sqrt(2.0 * std::numbers::pi);
  }
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 60; ++it) {
    const double f = normal_cdf(x) - p;
    (f > 0.0 ? hi : lo) = x;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    double step = pdf > 0.0 ? f / pdf : 0.0;
    double nx = x - step;
    if (!(nx > lo) || !(nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) < 1e-15 * std::max(1.0, std::abs(x))) return nx;
    x = nx;
  }
  return x;
}

// Regularized incomplete beta via Lentz's continued fraction.
static double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kTiny = 1e-300;
  constexpr double kEpsCf = 3e-16;

  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEpsCf) break;
  }
  return h;
}

static double incbeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
  if (dof <= 0.0) return 1.0;
  if (!std::isfinite(t)) return 0.0;
  const double x = dof / (dof + t * t);
  return incbeta(dof / 2.0, 0.5, x);
}

///////////////////////////////////////////////////////////////////////////
//                            Shapiro-Wilk                               //
///////////////////////////////////////////////////////////////////////////

// AS R94 (Royston 1995) approximation of the W statistic and its p-value.
double shapiro_wilk_p(std::span<const double> sample) {
  const int n = int(sample.size());
  if (n < 3 || n > kShapiroMaxN)
    throw_computation("shapiro_wilk requires 3 <= n <= 5000, got " + std::to_string(n));

  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  if (x.front() == x.back()) return 0.0;  // degenerate constant sample

  // Expected normal order statistics m and normalized weights a.
  std::vector<double> m(std::size_t(n), 0.0);
  double ssumm2 = 0.0;
  for (int i = 1; i <= n; ++i) {
    m[std::size_t(i - 1)] = normal_quantile((i - 0.375) / (n + 0.25));
    ssumm2 += m[std::size_t(i - 1)] * m[std::size_t(i - 1)];
  }

  std::vector<double> a(std::size_t(n), 0.0);
  if (n == 3) {
    a[0] = -std::numbers::sqrt2 / 2.0;
    a[1] = 0.0;
    a[2] = std::numbers::sqrt2 / 2.0;
  } else {
    const double rsn = 1.0 / std::sqrt(double(n));
    const double cn = m[std::size_t(n - 1)] / std::sqrt(ssumm2);
    const double an = -2.706056 * std::pow(rsn, 5) + 4.434685 * std::pow(rsn, 4) -
                      2.071190 * std::pow(rsn, 3) - 0.147981 * rsn * rsn +
                      0.221157 * rsn + cn;
    double an1 = 0.0;
    double phi;
    const double mn2 = m[std::size_t(n - 1)] * m[std::size_t(n - 1)];
    if (n > 5) {
      const double cn1 = m[std::size_t(n - 2)] / std::sqrt(ssumm2);
      an1 = -3.582633 * std::pow(rsn, 5) + 5.682633 * std::pow(rsn, 4) -
            1.752461 * std::pow(rsn, 3) - 0.293762 * rsn * rsn + 0.042981 * rsn + cn1;
      const double mn12 = m[std::size_t(n - 2)] * m[std::size_t(n - 2)];
      phi = (ssumm2 - 2.0 * mn2 - 2.0 * mn12) / (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
    } else {
      phi = (ssumm2 - 2.0 * mn2) / (1.0 - 2.0 * an * an);
    }
    const double sqrt_phi = std::sqrt(phi);
    for (int i = 0; i < n; ++i) a[std::size_t(i)] = m[std::size_t(i)] / sqrt_phi;
    a[std::size_t(n - 1)] = an;
    a[0] = -an;
    if (n > 5) {
      a[std::size_t(n - 2)] = an1;
      a[1] = -an1;
    }
  }

  const double xbar = mean_of(x);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += a[std::size_t(i)] * x[std::size_t(i)];
    den += (x[std::size_t(i)] - xbar) * (x[std::size_t(i)] - xbar);
  }
  double w = num * num / den;
  w = std::min(w, 1.0 - 1e-15);

  if (n == 3) {
    const double p = 6.0 / std::numbers::pi *
                     (std::asin(std::sqrt(w)) - std::asin(std::sqrt(0.75)));
    return std::clamp(p, 0.0, 1.0);
  }
  double z;
  if (n <= 11) {
    const double g = -2.273 + 0.459 * n;
    const double mu = 0.5440 - 0.39978 * n + 0.025054 * n * n - 0.0006714 * n * n * n;
    const double sig = std::exp(1.3822 - 0.77857 * n + 0.062767 * n * n -
                                0.0020322 * n * n * n);
    z = (-std::log(g - std::log1p(-w)) - mu) / sig;
  } else {
    const double ln_n = std::log(double(n));
    const double mu = -1.5861 - 0.31082 * ln_n - 0.083751 * ln_n * ln_n +
                      0.0038915 * ln_n * ln_n * ln_n;
    const double sig = std::exp(-0.4803 - 0.082676 * ln_n + 0.0030302 * ln_n * ln_n);
    z = (std::log1p(-w) - mu) / sig;
  }
  return std::clamp(1.0 - normal_cdf(z), 0.0, 1.0);
}

///////////////////////////////////////////////////////////////////////////
//                            Bland-Altman                               //
///////////////////////////////////////////////////////////////////////////

PercentDiffs percent_differences(const PairedSeries& s) {
  check_series(s, 1);
  PercentDiffs out;
  out.values.reserve(s.test.size());
  for (std::size_t i = 0; i < s.test.size(); ++i) {
    const double pair_mean = 0.5 * (s.test[i] + s.retest[i]);
    if (pair_mean == 0.0) {
      out.excluded_pairs++;
      continue;
    }
    out.values.push_back(100.0 * (s.retest[i] - s.test[i]) / pair_mean);
  }
  return out;
}

BlandAltmanResult bland_altman(const PairedSeries& s) {
  check_series(s, 3);
  PercentDiffs diffs = percent_differences(s);
  if (diffs.values.size() < 3)
    throw_computation("bland_altman: fewer than 3 usable pairs for '" +
                      s.feature_id + "'");

  BlandAltmanResult r;
  r.n = int(diffs.values.size());
  r.excluded_pairs = diffs.excluded_pairs;

  // Shapiro-Wilk tops out at n=5000; larger samples are tested on an
  // evenly strided subsample.
  double p;
  if (diffs.values.size() <= std::size_t(kShapiroMaxN)) {
    p = shapiro_wilk_p(diffs.values);
  } else {
    const std::size_t stride =
        (diffs.values.size() + kShapiroMaxN - 1) / std::size_t(kShapiroMaxN);
    std::vector<double> sub;
    sub.reserve(std::size_t(kShapiroMaxN));
    for (std::size_t i = 0; i < diffs.values.size(); i += stride)
      sub.push_back(diffs.values[i]);
    p = shapiro_wilk_p(sub);
  }
  r.normal = p >= kAlpha;

  if (r.normal) {
    r.mean_pct = mean_of(diffs.values);
    r.sd_pct = sd_of(diffs.values, r.mean_pct);
    r.lower_pct = r.mean_pct - kLimitFactor * r.sd_pct;
    r.upper_pct = r.mean_pct + kLimitFactor * r.sd_pct;
    return r;
  }

  // Log path: limits computed on ln(retest/test), back-transformed into
  // percent space.
  std::vector<double> ratios;
  ratios.reserve(s.test.size());
  for (std::size_t i = 0; i < s.test.size(); ++i) {
    if (!(s.test[i] > 0.0) || !(s.retest[i] > 0.0))
      throw_computation("bland_altman: nonpositive values on log path for '" +
                        s.feature_id + "'");
    ratios.push_back(std::log(s.retest[i] / s.test[i]));
  }
  const double m = mean_of(ratios);
  const double sd = sd_of(ratios, m);
  r.log_transformed = true;
  r.n = int(ratios.size());
  r.excluded_pairs = 0;
  r.mean_pct = 100.0 * std::expm1(m);
  r.sd_pct = 100.0 * std::expm1(sd);
  r.lower_pct = 100.0 * std::expm1(m - kLimitFactor * sd);
  r.upper_pct = 100.0 * std::expm1(m + kLimitFactor * sd);
  return r;
}

///////////////////////////////////////////////////////////////////////////
//                        Reliability categories                         //
///////////////////////////////////////////////////////////////////////////

std::string to_string(Reliability r) {
  switch (r) {
    case Reliability::very_reliable: return "very_reliable";
    case Reliability::reliable: return "reliable";
    case Reliability::moderately_reliable: return "moderately_reliable";
    case Reliability::poorly_reliable: return "poorly_reliable";
  }
  return "poorly_reliable";
}

Reliability reliability_from(const std::string& text) {
  if (text == "very_reliable") return Reliability::very_reliable;
  if (text == "reliable") return Reliability::reliable;
  if (text == "moderately_reliable") return Reliability::moderately_reliable;
  if (text == "poorly_reliable") return Reliability::poorly_reliable;
  throw_input("unknown reliability category '" + text + "'");
}

ReliabilityThresholds ReliabilityThresholds::from_voi_sd(double voi_rep_sd) {
  if (!(voi_rep_sd >= 0.0))
    throw_computation("reliability thresholds need voi_rep_sd >= 0");
  ReliabilityThresholds t;
  t.voi_rep_sd = voi_rep_sd;
  t.cut_very = 0.5 * voi_rep_sd;
  t.cut_reliable = 1.5 * voi_rep_sd;
  t.cut_moderate = 2.0 * voi_rep_sd;
  return t;
}

Reliability reliability_category(double feature_sd_pct,
                                 const ReliabilityThresholds& thresholds) {
  if (!(feature_sd_pct >= 0.0))
    throw_computation("reliability_category needs sd >= 0");
  if (feature_sd_pct <= thresholds.cut_very) return Reliability::very_reliable;
  if (feature_sd_pct <= thresholds.cut_reliable) return Reliability::reliable;
  if (feature_sd_pct <= thresholds.cut_moderate) return Reliability::moderately_reliable;
  return Reliability::poorly_reliable;
}

///////////////////////////////////////////////////////////////////////////
//                              Spearman                                 //
///////////////////////////////////////////////////////////////////////////

namespace {

// Average ranks (ties share the mean rank).
std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * double(i + j) + 1.0;  // 1-based average rank
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

CorrelationResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw_computation("spearman: series lengths differ");
  if (x.size() < 4)
    throw_computation("spearman: need n >= 4, got " + std::to_string(x.size()));

  CorrelationResult r;
  r.n = int(x.size());

  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mx = mean_of(rx), my = mean_of(ry);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx, dy = ry[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.rs = sxy / std::sqrt(sxx * syy);
  r.rs = std::clamp(r.rs, -1.0, 1.0);

  const double dof = double(r.n - 2);
  if (1.0 - r.rs * r.rs <= 0.0) {
    r.p_value = 0.0;
  } else {
    const double t = r.rs * std::sqrt(dof / (1.0 - r.rs * r.rs));
    r.p_value = student_t_two_sided_p(t, dof);
  }
  return r;
}

///////////////////////////////////////////////////////////////////////////
//                                 ICC                                   //
///////////////////////////////////////////////////////////////////////////

double icc_agreement(const PairedSeries& s) {
  check_series(s, 3);
  const std::size_t n = s.test.size();
  const double k = 2.0;

  const double grand = 0.5 * (mean_of(s.test) + mean_of(s.retest));
  const double col1 = mean_of(s.test), col2 = mean_of(s.retest);

  double ssr = 0.0, ssc = 0.0, sse = 0.0, sst = 0.0;
  ssc = double(n) * ((col1 - grand) * (col1 - grand) + (col2 - grand) * (col2 - grand));
  for (std::size_t i = 0; i < n; ++i) {
    const double row = 0.5 * (s.test[i] + s.retest[i]);
    ssr += k * (row - grand) * (row - grand);
    const double e1 = s.test[i] - row - col1 + grand;
    const double e2 = s.retest[i] - row - col2 + grand;
    sse += e1 * e1 + e2 * e2;
    sst += (s.test[i] - grand) * (s.test[i] - grand) +
           (s.retest[i] - grand) * (s.retest[i] - grand);
  }
  if (sst == 0.0) return 1.0;  // all values identical

  const double msr = ssr / double(n - 1);
  const double msc = ssc / (k - 1.0);
  const double mse = sse / (double(n - 1) * (k - 1.0));

  const double den = msr + (k - 1.0) * mse + k / double(n) * (msc - mse);
  if (den == 0.0) return 1.0;
  return (msr - mse) / den;
}

}  // namespace radiomics
