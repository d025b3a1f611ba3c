#pragma once

#include <optional>
#include <vector>

#include "rgqda/estimators.hpp"

namespace rgqda::detail {

/// Factorization that reports singularity as nullopt instead of throwing.
std::optional<SpdMatrix> try_spd(const Matrix& m);

/// Factorization that maps singularity to Error{DegenerateData}.
SpdMatrix spd_or_degenerate(const Matrix& m, const char* who);

/// Draws a random (p+1)-subset and keeps adding random rows until its scatter
/// is nonsingular. nullopt if even the full sample is singular.
struct SubsetStart {
  std::vector<std::size_t> rows;
  Vector mean;
  SpdMatrix scatter;
};
std::optional<SubsetStart> draw_start(const Matrix& data, Rng& rng);

/// Indices of the h rows with the smallest values, ties broken by row index.
std::vector<std::size_t> smallest_indices(const Vector& values, std::size_t h);

/// Multiplier bringing median(d^2) to the chi-square median at dimension p.
double median_consistency_factor(const Vector& dist_sq, std::size_t p);

}  // namespace rgqda::detail
