#include <doctest.h>

#include <cmath>
#include <random>

#include "relay/optimize.hpp"
#include "relay/oracle.hpp"

using namespace relay;

namespace {

ExpectationSpec mc(std::size_t samples, std::uint64_t seed = 1) {
  ExpectationSpec s;
  s.samples = samples;
  s.seed = seed;
  return s;
}

double high_snr_limit(int m) { return (std::sqrt(2.0 * m - 4.0) - 2.0) / (m - 4.0); }

}  // namespace

TEST_CASE("closed-form training fraction") {
  CHECK(optimal_delta_r(50, 100.0, 1.0, 1.0) == doctest::Approx(0.16984408733809747).epsilon(1e-12));
  const AllocationResult checked = checked_optimal_delta(50, 100.0, 1.0, 1.0);
  CHECK(checked.argument == doctest::Approx(0.16984408733809747).epsilon(1e-12));
  CHECK(checked.method == AllocationMethod::ClosedForm);

  auto coefficient = [](double d) { return training_gain_coefficient(d, 50, 100.0, 1.0, 1.0); };
  const AllocationResult grid = grid_argmax(coefficient, 0.0, 1.0, 1e-4);
  CHECK(std::abs(grid.argument - 0.16984408733809747) <= 1e-4);
}

TEST_CASE("high-SNR limit") {
  CHECK(high_snr_limit(50) == doctest::Approx(0.16952084719853722).epsilon(1e-14));
  CHECK(std::abs(optimal_delta_r(50, 1e6, 1.0, 1.0) - high_snr_limit(50)) <= 1e-4);
  for (int m : {6, 10, 100, 400}) {
    CHECK(std::abs(optimal_delta_r(m, 1e7, 1.0, 1.0) - high_snr_limit(m)) <= 1e-4);
  }
}

TEST_CASE("closed form stays in (0, 1/2) and agrees with a grid") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const int m = 6 + 2 * static_cast<int>(150 * u(gen));
    const double p = std::pow(10.0, -2.0 + 7.0 * u(gen));
    const double sigma = 0.1 + 4.0 * u(gen);
    const double n0 = 0.1 + 2.0 * u(gen);
    const double d = optimal_delta_r(m, p, sigma, n0);
    CHECK(d > 0.0);
    CHECK(d < 0.5);
    CHECK_NOTHROW(checked_optimal_delta(m, p, sigma, n0));
  }
  CHECK_THROWS_AS(optimal_delta_r(50, 0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("training fraction shrinks and converges as the relay link improves") {
  for (double pr : {1.0, 10.0, 100.0}) {
    double prev = 1.0;
    for (double s = 0.5; s <= 5.0 + 1e-9; s += 0.1) {
      const double d = optimal_delta_r(50, pr, s, 1.0);
      CHECK(d < prev);
      CHECK(d > high_snr_limit(50));
      prev = d;
    }
  }
  CHECK(optimal_delta_r(50, 100.0, 5.0, 1.0) - high_snr_limit(50) < 1e-3);
}

TEST_CASE("source training candidates") {
  const ChannelStats sym{2.0, 2.0, 1.0, 1.0};
  const SourceTrainingCandidates c = suboptimal_delta_s(50, 30.0, sym);
  CHECK(c.direct == c.relay);
  const ChannelStats asym{1.0, 4.0, 4.0, 1.0};
  const SourceTrainingCandidates a = suboptimal_delta_s(50, 30.0, asym);
  CHECK(a.direct == doctest::Approx(optimal_delta_r(50, 30.0, 1.0, 1.0)));
  CHECK(a.relay == doctest::Approx(optimal_delta_r(50, 30.0, 4.0, 1.0)));
  CHECK(a.relay < a.direct);
}

TEST_CASE("power split") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const PowerSplit split{1000.0 * u(gen), u(gen)};
    CHECK(split.source() + split.relay() == doctest::Approx(split.total).epsilon(1e-15));
    CHECK(split.relay() >= 0.0);
  }
  CHECK(PowerSplit{100.0, 1.0}.relay() == 0.0);
}

TEST_CASE("theta sweep without a usable relay sends everything from the source") {
  const ChannelStats stats{1.0, 1e-4, 1e-4, 1.0};
  const Sweep s = optimize_theta(100.0, stats, 50, 0.1, 0.1, Scheme::AmplifyForward, mc(20000), 0.01);
  CHECK(s.best.argument == 1.0);
  CHECK(s.curve.size() == 101);
}

TEST_CASE("theta sweep shapes") {
  const ExpectationSpec spec = mc(50000, 1);
  const Sweep balanced = optimize_theta(100.0, {1.0, 4.0, 4.0, 1.0}, 50, 0.1, 0.1, Scheme::AmplifyForward, spec);
  CHECK(balanced.best.argument >= 0.5);
  CHECK(balanced.best.argument <= 0.7);

  const Sweep weak = optimize_theta(100.0, {1.0, 2.0, 1.0, 1.0}, 50, 0.1, 0.1, Scheme::AmplifyForward, spec);
  CHECK(weak.best.argument > balanced.best.argument);

  const Sweep parallel = optimize_theta(100.0, {1.0, 2.0, 1.0, 1.0}, 50, 0.1, 0.1, Scheme::DfParallel, spec);
  CHECK(parallel.best.argument >= 0.8);

  for (const Sweep* sw : {&balanced, &weak, &parallel}) {
    CHECK(std::isfinite(sw->curve.front().rate.value));
    CHECK(std::isfinite(sw->curve.back().rate.value));
    for (const SweepPoint& p : sw->curve) CHECK(sw->best.rate.value >= p.rate.value);
  }
}

TEST_CASE("theta sweep argument validation") {
  const ChannelStats stats{1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(optimize_theta(10.0, stats, 50, 0.1, 0.1, Scheme::AmplifyForward, mc(100), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(optimize_theta(10.0, stats, 50, 0.1, 0.1, Scheme::AmplifyForward, mc(100), 0.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(optimize_theta(-1.0, stats, 50, 0.1, 0.1, Scheme::AmplifyForward, mc(100)),
                  std::invalid_argument);
}

TEST_CASE("global delta_r search") {
  const SystemConfig cfg{50, 50.0, 50.0, 0.1, 0.1, Scheme::AmplifyForward};
  const ChannelStats stats{1.0, 4.0, 4.0, 1.0};
  const Sweep s = global_delta_r(cfg, stats, mc(20000), 0.01);
  CHECK(s.best.argument > 0.0);
  CHECK(s.best.argument < 1.0);
  SystemConfig at = cfg;
  at.delta_r = optimal_delta_r(50, 50.0, 4.0, 1.0);
  CHECK(s.best.rate.value >= evaluate_rate(at, stats, mc(20000)).value - 5e-3);
}

TEST_CASE("joint allocation") {
  const ExpectationSpec spec = mc(20000, 3);
  const JointAllocation dead = joint_allocation(100.0, {1.0, 1e-4, 1e-4, 1.0}, 50, Scheme::AmplifyForward, spec);
  CHECK(dead.theta == 1.0);
  CHECK(dead.delta_r == 0.0);

  const ChannelStats sym{2.0, 2.0, 1.0, 1.0};
  const JointAllocation j = joint_allocation(100.0, sym, 50, Scheme::DfRepetition, spec);
  const double d = optimal_delta_r(50, j.theta * 100.0, 2.0, 1.0);
  CHECK(j.delta_s == doctest::Approx(d));

  for (Scheme scheme : {Scheme::AmplifyForward, Scheme::DfRepetition, Scheme::DfParallel}) {
    const ChannelStats stats{1.0, 4.0, 4.0, 1.0};
    const JointAllocation best = joint_allocation(100.0, stats, 50, scheme, spec);
    const SystemConfig fixed{50, 60.0, 40.0, 0.1, 0.1, scheme};
    CHECK(best.rate.value >= evaluate_rate(fixed, stats, spec).value);
    CHECK(best.evaluations > 0);
  }
}
