#ifndef RELAY_EXPECTATION_HPP
#define RELAY_EXPECTATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace relay {

enum class Method {
  MonteCarlo,
  GaussLaguerre,
  Exact,  // deterministic evaluation, no sampling error
};

std::string_view to_string(Method method);

/// How to evaluate E[F(X_1..X_dims)] for i.i.d. X_k ~ Exponential(1).
struct ExpectationSpec {
  int dims = 1;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  Method method = Method::MonteCarlo;
  int nodes = 64;
  /// Worker threads for Monte Carlo; 0 picks the hardware concurrency.
  /// Results do not depend on this value.
  unsigned workers = 1;

  void validate() const;
};

struct ExpectationResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  /// Largest integrand value seen (quadrature: over all nodes).
  double max_value = 0.0;
};

using Integrand = std::function<double(std::span<const double>)>;

/// Samples per reduction block. Blocks are summed in index order, which
/// fixes the floating-point reduction regardless of worker count.
inline constexpr std::size_t kBlockSize = 4096;

/// Expectation over independent exponential(1) variables.
///
/// Monte Carlo draws dimension k of sample i from
/// CounterStream(spec.seed, streams[k]) at counter i; `streams` defaults to
/// {0, 1, ..., dims-1}. Passing the same stream ids from two call sites gives
/// common random numbers. Gauss-Laguerre uses a tensor rule with
/// spec.nodes points per dimension and is limited to dims <= 2.
ExpectationResult expect_over_exponentials(const Integrand& integrand, const ExpectationSpec& spec,
                                           std::span<const std::uint64_t> streams = {});

/// Mean and standard error of sample(0..n-1) using fixed-shape blocked
/// summation. `sample` is called concurrently from `workers` threads.
ExpectationResult blocked_mean(std::size_t n, unsigned workers, const std::function<double(std::size_t)>& sample);

/// n-point Gauss-Laguerre rule for weight e^{-x} on [0, inf).
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

QuadratureRule gauss_laguerre_rule(int n);

/// Runs body(block) for every block index in [0, blocks) on `workers`
/// threads. Exceptions are rethrown on the calling thread.
void parallel_blocks(std::size_t blocks, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace relay

#endif  // RELAY_EXPECTATION_HPP
