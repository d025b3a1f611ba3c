#include "rgqda/rng.hpp"

#include <boost/random/uniform_int_distribution.hpp>

#include "rgqda/error.hpp"

namespace rgqda {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t id : path) h = splitmix64(h ^ splitmix64(id + 0x632be59bd9b4e019ULL));
  return h;
}

std::vector<std::size_t> draw_distinct(Rng& rng, std::size_t n, std::size_t k) {
  if (k > n) throw Error(ErrorKind::InvalidArgument, "draw_distinct: k exceeds n");
  std::vector<std::size_t> out;
  out.reserve(k);
  if (2 * k <= n) {
    // Sparse draw: rejection keeps the cost O(k) for the common p+1 subsets.
    boost::random::uniform_int_distribution<std::size_t> pick(0, n - 1);
    while (out.size() < k) {
      const std::size_t candidate = pick(rng);
      bool seen = false;
      for (std::size_t v : out) seen = seen || (v == candidate);
      if (!seen) out.push_back(candidate);
    }
    return out;
  }
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    boost::random::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
    out.push_back(pool[i]);
  }
  return out;
}

}  // namespace rgqda
