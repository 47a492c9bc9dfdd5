#include "relay/random.hpp"

#include <cmath>
#include <numbers>

namespace relay {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t CounterStream::bits(std::uint64_t counter) const {
  return mix64(key_ + (counter + 1) * kGolden);
}

double CounterStream::uniform(std::uint64_t counter) const {
  return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
}

double CounterStream::exponential(std::uint64_t counter) const { return -std::log(uniform(counter)); }

std::complex<double> CounterStream::complex_normal(std::uint64_t index, double variance) const {
  // Box-Muller: |z|^2 is exponential with mean `variance`, phase uniform.
  const double radius = std::sqrt(-variance * std::log(uniform(2 * index)));
  const double phase = 2.0 * std::numbers::pi * uniform(2 * index + 1);
  return {radius * std::cos(phase), radius * std::sin(phase)};
}

}  // namespace relay
