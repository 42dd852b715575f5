#include "gridlab/rng.hpp"

#include "gridlab/errors.hpp"

namespace gridlab {

std::uint64_t RngStream::below(std::uint64_t n) {
  require(n > 0, "RngStream::below: n must be positive");
  // Lemire's multiply-shift with rejection of the biased low region.
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

double draw_uniform(RngStream& stream, double lo, double hi) {
  require(lo <= hi, "draw_uniform: lo > hi");
  if (lo == hi) return lo;
  const double v = lo + (hi - lo) * stream.uniform01();
  return v < hi ? v : lo;
}

}  // namespace gridlab
