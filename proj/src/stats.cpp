#include "rgqda/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/tools/roots.hpp>

#include "rgqda/error.hpp"

namespace rgqda::stats {

namespace {
constexpr double kMadConsistency = 1.482602218505602;  // 1 / Phi^{-1}(0.75)
}

double median_inplace(std::span<double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyDataset, "median of empty sample");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double median(std::vector<double> values) { return median_inplace(values); }

double mad_inplace(std::span<double> values, double center) {
  for (double& v : values) v = std::abs(v - center);
  return kMadConsistency * median_inplace(values);
}

double chi2_cdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  return boost::math::cdf(boost::math::chi_squared_distribution<double>(dof), x);
}

double chi2_quantile(double prob, double dof) {
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), prob);
}

double huber_truncated_mean(double k, int p) {
  // E[X; X <= t] = p F_{p+2}(t) for X ~ chi2_p.
  const double k2 = k * k;
  const double pd = static_cast<double>(p);
  const boost::math::chi_squared_distribution<double> chi2(pd);
  return pd * chi2_cdf(k2, pd + 2) + k2 * boost::math::cdf(boost::math::complement(chi2, k2));
}

double tukey_rho(double s, double b) noexcept {
  if (s >= b) return 1.0;
  const double u = (s / b) * (s / b);
  return u * (3.0 - 3.0 * u + u * u);
}

double tukey_weight(double s, double b) noexcept {
  if (s >= b) return 0.0;
  const double t = 1.0 - (s / b) * (s / b);
  return t * t;
}

double tukey_expected_rho(double b, int p) {
  const double t = b * b;
  const double pd = static_cast<double>(p);
  const double m1 = pd * chi2_cdf(t, pd + 2);
  const double m2 = pd * (pd + 2) * chi2_cdf(t, pd + 4);
  const double m3 = pd * (pd + 2) * (pd + 4) * chi2_cdf(t, pd + 6);
  return 3.0 * m1 / t - 3.0 * m2 / (t * t) + m3 / (t * t * t) + (1.0 - chi2_cdf(t, pd));
}

double tukey_constant(int p, double breakdown) {
  if (!(breakdown > 0.0 && breakdown <= 0.5)) {
    throw Error(ErrorKind::InvalidArgument, "tukey_constant: breakdown must lie in (0, 0.5]");
  }
  // E[rho] decreases from 1 to 0 as b grows.
  auto f = [&](double b) { return tukey_expected_rho(b, p) - breakdown; };
  double lo = 0.1;
  double hi = 1.0;
  while (f(hi) > 0.0) hi *= 2.0;
  while (f(lo) < 0.0) lo *= 0.5;
  boost::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (bracket.first + bracket.second);
}

}  // namespace rgqda::stats
