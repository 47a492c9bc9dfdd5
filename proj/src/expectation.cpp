#include "relay/expectation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "relay/random.hpp"

namespace relay {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::MonteCarlo: return "monte-carlo";
    case Method::GaussLaguerre: return "gauss-laguerre";
    case Method::Exact: return "exact";
  }
  return "unknown";
}

void ExpectationSpec::validate() const {
  if (dims < 1 || dims > 3) throw std::invalid_argument("expectation dims must be 1, 2 or 3, got " + std::to_string(dims));
  switch (method) {
    case Method::MonteCarlo:
      if (samples == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
      break;
    case Method::GaussLaguerre:
      if (dims > 2) throw std::invalid_argument("Gauss-Laguerre quadrature is limited to dims <= 2");
      if (nodes < 8) throw std::invalid_argument("Gauss-Laguerre needs at least 8 nodes, got " + std::to_string(nodes));
      break;
    case Method::Exact:
      throw std::invalid_argument("exact method is not an expectation method");
  }
}

QuadratureRule gauss_laguerre_rule(int n) {
  if (n < 1 || n > 256) throw std::invalid_argument("Gauss-Laguerre order must be in [1,256], got " + std::to_string(n));
  // Golub-Welsch: symmetric Jacobi matrix of the Laguerre recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jacobi(i, i) = 2.0 * i + 1.0;
    if (i + 1 < n) {
      jacobi(i, i + 1) = i + 1.0;
      jacobi(i + 1, i) = i + 1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Gauss-Laguerre eigen-decomposition failed");

  QuadratureRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = solver.eigenvectors().row(0).transpose().array().square();
  return rule;
}

void parallel_blocks(std::size_t blocks, unsigned workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) body(b);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < blocks && !failed; b = next++) {
          try {
            body(b);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

namespace {

struct BlockMoments {
  double sum = 0.0;
  double m2 = 0.0;  // sum of squared deviations from the block mean
  double max = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;
};

void require_finite(double value) {
  if (!std::isfinite(value)) throw std::domain_error("integrand returned a non-finite value");
}

}  // namespace

ExpectationResult blocked_mean(std::size_t n, unsigned workers, const std::function<double(std::size_t)>& sample) {
  if (n == 0) throw std::invalid_argument("blocked_mean needs at least one sample");
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<BlockMoments> partial(blocks);

  parallel_blocks(blocks, workers, [&](std::size_t b) {
    const std::size_t begin = b * kBlockSize;
    const std::size_t end = std::min(n, begin + kBlockSize);
    std::vector<double> values(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      const double v = sample(i);
      require_finite(v);
      values[i - begin] = v;
    }
    BlockMoments& out = partial[b];
    out.count = values.size();
    for (double v : values) {
      out.sum += v;
      out.max = std::max(out.max, v);
    }
    const double mean = out.sum / static_cast<double>(out.count);
    for (double v : values) out.m2 += (v - mean) * (v - mean);
  });

  // Fixed-order merge (pairwise update for the second moment).
  double sum = 0.0, m2 = 0.0, max = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  for (const BlockMoments& p : partial) {
    if (count > 0) {
      const double na = static_cast<double>(count), nb = static_cast<double>(p.count);
      const double delta = p.sum / nb - sum / na;
      m2 += p.m2 + delta * delta * na * nb / (na + nb);
    } else {
      m2 = p.m2;
    }
    sum += p.sum;
    count += p.count;
    max = std::max(max, p.max);
  }

  ExpectationResult r;
  r.samples = n;
  r.mean = sum / static_cast<double>(n);
  r.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  r.max_value = max;
  return r;
}

namespace {

ExpectationResult monte_carlo(const Integrand& integrand, const ExpectationSpec& spec,
                              std::span<const std::uint64_t> streams) {
  std::vector<CounterStream> rng;
  for (int k = 0; k < spec.dims; ++k) rng.emplace_back(spec.seed, streams[k]);
  return blocked_mean(spec.samples, spec.workers, [&](std::size_t i) {
    std::array<double, 3> x{};
    for (int k = 0; k < spec.dims; ++k) x[k] = rng[k].exponential(i);
    return integrand(std::span<const double>(x.data(), spec.dims));
  });
}

ExpectationResult quadrature(const Integrand& integrand, const ExpectationSpec& spec) {
  const QuadratureRule rule = gauss_laguerre_rule(spec.nodes);
  const auto n = rule.nodes.size();
  ExpectationResult r;
  r.max_value = -std::numeric_limits<double>::infinity();
  std::array<double, 2> x{};
  double sum = 0.0;
  if (spec.dims == 1) {
    for (Eigen::Index i = 0; i < n; ++i) {
      x[0] = rule.nodes[i];
      const double v = integrand(std::span<const double>(x.data(), 1));
      require_finite(v);
      sum += rule.weights[i] * v;
      r.max_value = std::max(r.max_value, v);
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      x[0] = rule.nodes[i];
      double inner = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        x[1] = rule.nodes[j];
        const double v = integrand(std::span<const double>(x.data(), 2));
        require_finite(v);
        inner += rule.weights[j] * v;
        r.max_value = std::max(r.max_value, v);
      }
      sum += rule.weights[i] * inner;
    }
  }
  r.mean = sum;
  r.std_error = 0.0;
  r.samples = 0;
  return r;
}

}  // namespace

ExpectationResult expect_over_exponentials(const Integrand& integrand, const ExpectationSpec& spec,
                                           std::span<const std::uint64_t> streams) {
  spec.validate();
  std::array<std::uint64_t, 3> default_streams{0, 1, 2};
  if (streams.empty()) {
    streams = std::span<const std::uint64_t>(default_streams.data(), spec.dims);
  } else if (streams.size() != static_cast<std::size_t>(spec.dims)) {
    throw std::invalid_argument("stream id count does not match expectation dims");
  }
  if (spec.method == Method::GaussLaguerre) return quadrature(integrand, spec);
  return monte_carlo(integrand, spec, streams);
}

}  // namespace relay
