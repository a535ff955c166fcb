#include "critnoise/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace critnoise {

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean of empty sample");
  double acc = 0.0;
  for (const double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("variance needs two samples");
  const double m = mean(v);
  double acc = 0.0;
  for (const double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("bad quantile");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= x) ++ia;
    while (ib < b.size() && b[ib] <= x) ++ib;
    d = std::max(d, std::fabs(static_cast<double>(ia) / na -
                              static_cast<double>(ib) / nb));
  }
  return d;
}

double ks_threshold(std::size_t na, std::size_t nb, double alpha) {
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  const double n1 = static_cast<double>(na), n2 = static_cast<double>(nb);
  return c * std::sqrt((n1 + n2) / (n1 * n2));
}

double chi_square_gof_pvalue(const std::vector<std::uint64_t>& observed,
                             const std::vector<double>& expected,
                             double min_expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi-square bins mismatch");
  std::vector<double> obs_m, exp_m;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += static_cast<double>(observed[i]);
    e_acc += expected[i];
    if (e_acc >= min_expected) {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (o_acc > 0.0 || e_acc > 0.0) {
    if (exp_m.empty()) {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
    } else {
      obs_m.back() += o_acc;
      exp_m.back() += e_acc;
    }
  }
  if (exp_m.size() < 2) throw std::invalid_argument("not enough mass in bins");
  double stat = 0.0;
  for (std::size_t i = 0; i < exp_m.size(); ++i) {
    const double diff = obs_m[i] - exp_m[i];
    stat += diff * diff / exp_m[i];
  }
  boost::math::chi_squared dist(static_cast<double>(exp_m.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

double jackknife_stderr(const std::vector<double>& leave_one_out) {
  const std::size_t t = leave_one_out.size();
  if (t < 2) throw std::invalid_argument("jackknife needs two trials");
  const double m = mean(leave_one_out);
  double acc = 0.0;
  for (const double x : leave_one_out) acc += (x - m) * (x - m);
  return std::sqrt(acc * static_cast<double>(t - 1) / static_cast<double>(t));
}

double binomial_3sigma(double p, std::uint64_t trials) {
  const double q = std::min(std::max(p, 0.0), 1.0);
  return 3.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
}

}  // namespace critnoise
