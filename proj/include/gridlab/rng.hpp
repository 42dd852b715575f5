#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gridlab {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Combines a root seed with integer salts into a child seed.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(root ^ 0x9e3779b97f4a7c15ULL) + mix64(a + 0x632be59bd9b4e019ULL) * 31 + b);
}

/// Counter-based random stream keyed by (seed, label).
///
/// Draw i is mix64(key + i * golden), so a stream's sequence depends only on
/// its seed, label and how many draws it has served. Streams with different
/// labels never share state.
class RngStream {
 public:
  RngStream() : RngStream(0, "default") {}
  RngStream(std::uint64_t seed, std::string label)
      : seed_(seed), label_(std::move(label)), key_(mix64(mix64(seed) ^ fnv1a64(label_))) {}

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  // Always consumes exactly one draw.
  bool bernoulli(double p) { return uniform01() < p; }

  bool operator==(const RngStream&) const = default;

 private:
  std::uint64_t seed_;
  std::string label_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Value in [lo, hi); lo == hi returns lo. lo > hi is a contract violation.
double draw_uniform(RngStream& stream, double lo, double hi);

}  // namespace gridlab
