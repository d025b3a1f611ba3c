#pragma once

#include <span>
#include <vector>

namespace rgqda::stats {

/// Median of the values; the buffer is reordered. Even counts average the two
/// middle order statistics.
double median_inplace(std::span<double> values);

double median(std::vector<double> values);

/// Median absolute deviation about `center`, scaled by 1/Phi^{-1}(3/4) so it
/// estimates the standard deviation at the Normal model. Buffer is reordered.
double mad_inplace(std::span<double> values, double center);

double chi2_cdf(double x, double dof);
double chi2_quantile(double prob, double dof);

/// E[min(|Z|^2, k^2)] for Z ~ N_p(0, I), by adaptive quadrature against the
/// chi-square density.
double huber_truncated_mean(double k, int p);

/// Tukey biweight rho normalized to sup rho = 1:
///   rho(s) = 3u - 3u^2 + u^3 with u = (s/b)^2 for s < b, 1 beyond.
double tukey_rho(double s, double b) noexcept;

/// psi(s)/s up to the constant 6/b^2: (1 - (s/b)^2)^2 inside [0, b).
double tukey_weight(double s, double b) noexcept;

/// E[rho(|Z|)] for Z ~ N_p(0, I) with the normalized biweight, closed form in
/// chi-square distribution functions.
double tukey_expected_rho(double b, int p);

/// Tuning constant b with E[rho(|Z|)] = breakdown under N_p(0, I).
double tukey_constant(int p, double breakdown);

}  // namespace rgqda::stats
