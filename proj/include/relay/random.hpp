#ifndef RELAY_RANDOM_HPP
#define RELAY_RANDOM_HPP

#include <complex>
#include <cstdint>

namespace relay {

/// Stream identifiers for the normalized fading variables. Every consumer
/// that wants common random numbers draws |w|^2 for a link from the same
/// stream id.
enum class Link : std::uint64_t { SourceDestination = 0, SourceRelay = 1, RelayDestination = 2 };

inline constexpr std::uint64_t stream_id(Link link) { return static_cast<std::uint64_t>(link); }

/// Counter-based random stream: draw i is a pure function of
/// (seed, stream, i), so any sample can be produced by any worker in any
/// order.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t bits(std::uint64_t counter) const;

  /// Uniform on (0, 1].
  double uniform(std::uint64_t counter) const;

  /// Exponential(1), i.e. |w|^2 for w ~ CN(0,1).
  double exponential(std::uint64_t counter) const;

  /// Circularly-symmetric complex Gaussian with the given variance. Uses
  /// counters 2*index and 2*index+1.
  std::complex<double> complex_normal(std::uint64_t index, double variance) const;

 private:
  std::uint64_t key_;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace relay

#endif  // RELAY_RANDOM_HPP
