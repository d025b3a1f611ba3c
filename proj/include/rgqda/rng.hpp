#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <boost/random/mersenne_twister.hpp>

namespace rgqda {

// Boost's engine and distributions are header code, so a given seed gives the
// same stream on every platform and standard library.
using Rng = boost::random::mt19937_64;

/// Mixes a master seed with a path of stream identifiers (replication index,
/// estimator index, class index, ...) into an independent child seed.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) noexcept;

/// k distinct indices from [0, n), in draw order.
std::vector<std::size_t> draw_distinct(Rng& rng, std::size_t n, std::size_t k);

}  // namespace rgqda
