#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rgqda/linalg.hpp"
#include "rgqda/rng.hpp"

namespace rgqda {

enum class EstimatorKind { Classical, Winsorized, MVE, MCD, MHuber, STukey, SD };

inline constexpr EstimatorKind kAllEstimators[] = {
    EstimatorKind::Classical, EstimatorKind::Winsorized, EstimatorKind::MVE, EstimatorKind::MCD,
    EstimatorKind::MHuber,    EstimatorKind::STukey,     EstimatorKind::SD};

/// Short report label: GQDA, W, MVE, MCD, M, S, SD.
std::string_view estimator_label(EstimatorKind kind) noexcept;

/// Accepts the report labels and a few long-form aliases, case-insensitive.
EstimatorKind parse_estimator(std::string_view name);

/// Whether the estimator consumes random draws.
bool is_stochastic(EstimatorKind kind) noexcept;

/// Estimator selection plus tuning constants. Unset optionals resolve to
/// data-dependent defaults at fit time.
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Classical;

  bool unbiased = false;           // Classical: divisor n-1 instead of n
  double winsor_fraction = 0.1;    // Winsorized
  std::optional<std::size_t> subset_size;  // MVE/MCD h; default floor((n+p+1)/2)
  std::size_t n_subsamples = 500;  // MVE/MCD/S random starts
  std::size_t n_refine = 10;       // MCD/S candidates refined to convergence
  std::optional<double> huber_k;   // M; default sqrt(chi2_p(0.95))
  double breakdown = 0.5;          // S
  std::optional<std::size_t> n_directions;  // SD; default max(1000, 200 p)
  double trim_fraction = 0.05;     // SD
  double tolerance = 1e-8;
  int max_iterations = 200;
  bool consistency_correction = true;  // MVE/MCD
  bool reweight = true;  // MVE: one reweighting step after the raw ellipsoid

  static EstimatorSpec of(EstimatorKind kind) {
    EstimatorSpec s;
    s.kind = kind;
    return s;
  }
};

/// Throws Error{InvalidArgument} for out-of-range tuning constants and
/// Error{TooFewObservations} unless n > p + 1.
void validate(const EstimatorSpec& spec, std::size_t n, std::size_t p);

std::size_t default_subset_size(std::size_t n, std::size_t p) noexcept;

struct LocationScatter {
  Vector location;
  SpdMatrix scatter;
  std::size_t n_used = 0;
  EstimatorKind estimator = EstimatorKind::Classical;
  // Estimator-specific optimum before consistency scaling: MCD log det of the
  // h-subset scatter, MVE log volume, S log scale. NaN where meaningless.
  double raw_objective = std::numeric_limits<double>::quiet_NaN();
  bool converged = true;
  int iterations = 0;
};

/// Dispatches on spec.kind. Deterministic for a fixed rng state.
LocationScatter fit(const Matrix& data, const EstimatorSpec& spec, Rng& rng);

LocationScatter fit_classical(const Matrix& data, bool unbiased = false);
LocationScatter fit_winsorized(const Matrix& data, double fraction);
LocationScatter fit_mve(const Matrix& data, const EstimatorSpec& spec, Rng& rng);
LocationScatter fit_m_huber(const Matrix& data, const EstimatorSpec& spec);
LocationScatter fit_s_tukey(const Matrix& data, const EstimatorSpec& spec, Rng& rng);
LocationScatter fit_sd(const Matrix& data, const EstimatorSpec& spec, Rng& rng);

/// Log determinants visited while refining the surviving MCD candidates, one
/// sequence per candidate.
struct McdTrace {
  std::vector<std::vector<double>> refinement_log_dets;
};

LocationScatter fit_mcd(const Matrix& data, const EstimatorSpec& spec, Rng& rng,
                        McdTrace* trace = nullptr);

/// Coordinate-wise winsorization: the floor(fraction*n) smallest values of each
/// column become the smallest retained value, likewise at the top.
Matrix winsorize(const Matrix& data, double fraction);

/// Projection outlyingness of each row: the maximum over directions normal to
/// hyperplanes through p random rows of |u'x - med| / MAD.
Vector sd_outlyingness(const Matrix& data, std::size_t n_directions, Rng& rng);

/// Affine-invariant residuals of the Huber M estimating equations at a fit:
/// |L^{-1} mean(w1 (x-l))| and |L^{-1} mean(w2 (x-l)(x-l)') L^{-T} - I|_F.
struct MEquationResiduals {
  double location = 0.0;
  double scatter = 0.0;
};
MEquationResiduals m_huber_residuals(const Matrix& data, const LocationScatter& fit, double k);

double default_huber_k(std::size_t p);

/// mean rho(d_i) - breakdown for the normalized biweight at the fit's
/// location and scatter.
double s_constraint_residual(const Matrix& data, const LocationScatter& fit, double breakdown);

}  // namespace rgqda
