#include <doctest.h>

#include <cmath>
#include <random>

#include "relay/random.hpp"
#include "relay/rates.hpp"

using namespace relay;

namespace {

constexpr double kLogOnePlusExpMean = 0.59634736232319407;

ExpectationSpec mc(std::size_t samples = 100000, std::uint64_t seed = 1) {
  ExpectationSpec s;
  s.samples = samples;
  s.seed = seed;
  return s;
}

const ChannelStats kFig2Stats{1.0, 4.0, 4.0, 1.0};

SystemConfig cfg_of(double ps, double pr, double ds, double dr, Scheme scheme, int m = 50) {
  return {m, ps, pr, ds, dr, scheme};
}

}  // namespace

TEST_CASE("g vanishes without training or without data") {
  for (double b : {0.0, 1.0, 100.0}) {
    for (double c : {0.5, 1.0, 4.0}) {
      CHECK(snr_gain_g(0.0, b, c, 1.0, 50, 2.0) == 0.0);
      CHECK(snr_gain_g(1.0, b, c, 1.0, 50, 2.0) == 0.0);
    }
  }
}

TEST_CASE("g matches the ratio form") {
  const double g = snr_gain_g(0.1, 100.0, 1.0, 1.0, 50, 1.0);
  CHECK(g == doctest::Approx(4500000.0 / 33048.0).epsilon(1e-12));

  // Independent route: E_data * var_est / (E_data * var_err + N0).
  const double ratio = 187.5 * (500.0 / 501.0) / (187.5 / 501.0 + 1.0);
  CHECK(std::abs(g - ratio) / ratio <= 1e-9);

  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(gen), b = 200.0 * u(gen), c = 0.1 + 5.0 * u(gen), n0 = 0.1 + 3.0 * u(gen), w = 5.0 * u(gen);
    const int m = 6 + 2 * static_cast<int>(100 * u(gen));
    const auto q = mmse_quality(c, a, m, b, n0);
    const double energy = data_symbol_energy(a, m, b);
    const double expected = ratio_form_snr(energy, q, q.var_estimate * w, n0);
    CHECK(snr_gain_g(a, b, c, n0, m, w) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("g rejects invalid inputs") {
  CHECK_THROWS_AS(snr_gain_g(0.1, 100.0, 1.0, 0.0, 50, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(snr_gain_g(0.1, 100.0, 1.0, 1.0, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(snr_gain_g(0.1, 100.0, 1.0, 1.0, 50, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(snr_gain_g(1.1, 100.0, 1.0, 1.0, 50, 1.0), std::invalid_argument);
}

TEST_CASE("g is increasing in |w|^2, sigma and power") {
  double prev = 0.0;
  for (double w = 0.1; w < 10.0; w += 0.1) {
    const double g = snr_gain_g(0.2, 10.0, 1.0, 1.0, 50, w);
    CHECK(g > prev);
    prev = g;
  }
  prev = 0.0;
  for (double c = 0.05; c < 10.0; c += 0.05) {
    const double g = snr_gain_g(0.2, 10.0, c, 1.0, 50, 1.0);
    CHECK(g > prev);
    prev = g;
  }
  prev = 0.0;
  for (double b = 0.5; b < 1000.0; b *= 1.3) {
    const double g = snr_gain_g(0.2, b, 1.0, 1.0, 50, 1.0);
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("f combiner") {
  CHECK(f_combiner(0.0, 7.3) == 0.0);
  CHECK(f_combiner(1.0, 1.0) == doctest::Approx(1.0 / 3.0));
  CHECK(f_combiner(3.0, 3.0) == doctest::Approx(9.0 / 7.0));

  std::mt19937_64 gen(4);
  std::exponential_distribution<double> e(0.1);
  for (int i = 0; i < 1000; ++i) {
    const double x = e(gen), y = e(gen);
    CHECK(f_combiner(x, y) == f_combiner(y, x));
    CHECK(f_combiner(x, y) <= std::min(x, y));
    CHECK(f_combiner(x, y + 0.5) > f_combiner(x, y));
    CHECK(f_combiner(x + 0.5, y) > f_combiner(x, y));
  }
}

TEST_CASE("AF rate degenerate cases") {
  auto cfg = cfg_of(60.0, 40.0, 1.0, 0.1, Scheme::AmplifyForward);
  CHECK(af_rate(cfg, kFig2Stats, mc(10000)).value == 0.0);

  cfg.delta_s = 0.1;
  const ChannelStats dark{1e-9, 1e-9, 4.0, 1.0};
  CHECK(af_rate(cfg, dark, mc(10000)).value < 1e-20);

  ExpectationSpec quad;
  quad.method = Method::GaussLaguerre;
  CHECK_THROWS_AS(af_rate(cfg, kFig2Stats, quad), std::invalid_argument);
}

TEST_CASE("DF repetition degenerate cases") {
  auto cfg = cfg_of(60.0, 40.0, 0.1, 0.1, Scheme::DfRepetition);
  const ChannelStats weak_sr{1.0, 1e-9, 4.0, 1.0};
  const RateEstimate r = df_repetition_rate(cfg, weak_sr, mc(10000));
  CHECK(r.value < 1e-20);
  REQUIRE(r.df.has_value());
  CHECK(r.df->relay_binds());

  cfg.delta_s = cfg.delta_r = 1.0;
  CHECK(df_repetition_rate(cfg, kFig2Stats, mc(10000)).value == 0.0);
}

TEST_CASE("DF parallel degenerate case") {
  const auto cfg = cfg_of(60.0, 40.0, 0.1, 0.1, Scheme::DfParallel);
  const ChannelStats dark{1e-9, 1e-9, 1e-9, 1.0};
  CHECK(df_parallel_rate(cfg, dark, mc(10000)).value < 1e-20);
}

TEST_CASE("DF I_2 Monte Carlo agrees with 2-D quadrature") {
  // P = 100, theta = 0.6
  const auto cfg = cfg_of(60.0, 40.0, 0.1, 0.1, Scheme::DfRepetition);
  const RateEstimate r = df_repetition_rate(cfg, kFig2Stats, mc(100000, 3));
  ExpectationSpec quad;
  quad.method = Method::GaussLaguerre;
  quad.nodes = 64;
  const RateEstimate q = df_repetition_rate(cfg, kFig2Stats, quad);
  REQUIRE(r.df.has_value());
  REQUIRE(q.df.has_value());
  CHECK(q.std_error == 0.0);
  CHECK(q.samples == 0);
  CHECK(std::abs(r.df->destination.value - q.df->destination.value) <= 3.0 * r.df->destination.std_error);
  CHECK(std::abs(r.df->relay.value - q.df->relay.value) <= 3.0 * r.df->relay.std_error);
}

TEST_CASE("parallel-coding sub-term with unit coefficient") {
  const LinkGains k{1.0, 0.0, 0.0};
  auto term = [&](std::span<const double> w) { return df_parallel_destination_log_term(k, w[0], w[1]); };
  ExpectationSpec spec = mc(100000, 8);
  spec.dims = 2;
  const auto r = expect_over_exponentials(term, spec);
  CHECK(std::abs(r.mean - kLogOnePlusExpMean) <= 3.0 * r.std_error);
  spec.method = Method::GaussLaguerre;
  CHECK(expect_over_exponentials(term, spec).mean == doctest::Approx(kLogOnePlusExpMean).epsilon(1e-9));
}

TEST_CASE("parallel coding dominates repetition coding per sample") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const LinkGains k{1e3 * std::pow(u(gen), 4), 0.0, 1e3 * std::pow(u(gen), 4)};
    const double a = -std::log(u(gen) + 1e-300), b = -std::log(u(gen) + 1e-300);
    CHECK(df_parallel_destination_log_term(k, a, b) >= df_repetition_destination_log_term(k, a, b));
  }
  for (double sd : {0.5, 1.0, 3.0}) {
    for (double ps : {0.1, 1.0, 60.0}) {
      const auto cfg = cfg_of(ps, 40.0, 0.1, 0.2, Scheme::DfParallel);
      const ChannelStats s{sd, 2.0, 1.5, 1.0};
      CHECK(df_parallel_rate(cfg, s, mc(20000)).value >= df_repetition_rate(cfg, s, mc(20000)).value);
    }
  }
}

TEST_CASE("rates are non-decreasing in sigma and power (common random numbers)") {
  const ExpectationSpec spec = mc(20000, 12);
  for (Scheme scheme : {Scheme::AmplifyForward, Scheme::DfRepetition, Scheme::DfParallel}) {
    const auto base = cfg_of(30.0, 30.0, 0.1, 0.1, scheme);
    double prev = -1.0;
    for (double s = 0.25; s <= 6.0; s += 0.25) {
      const double r = evaluate_rate(base, ChannelStats{s, s, s, 1.0}, spec).value;
      CHECK(r >= prev);
      prev = r;
    }
    prev = -1.0;
    for (double p = 0.5; p <= 500.0; p *= 2.0) {
      const double r = evaluate_rate(cfg_of(p, p, 0.1, 0.1, scheme), kFig2Stats, spec).value;
      CHECK(r >= prev);
      prev = r;
    }
  }
}

TEST_CASE("rates are deterministic and thread-count independent") {
  for (Scheme scheme : {Scheme::AmplifyForward, Scheme::DfRepetition, Scheme::DfParallel}) {
    const auto cfg = cfg_of(60.0, 40.0, 0.1, 0.1, scheme);
    ExpectationSpec spec = mc(30000, 77);
    const RateEstimate a = evaluate_rate(cfg, kFig2Stats, spec);
    for (unsigned w : {1u, 2u, 8u}) {
      spec.workers = w;
      const RateEstimate b = evaluate_rate(cfg, kFig2Stats, spec);
      CHECK(a.value == b.value);
      CHECK(a.std_error == b.std_error);
    }
  }
}

TEST_CASE("rate lies within the normalization bound") {
  const auto cfg = cfg_of(60.0, 40.0, 0.1, 0.1, Scheme::AmplifyForward);
  const LinkGains k = link_gains(cfg, kFig2Stats);
  const RateEstimate r = af_rate(cfg, kFig2Stats, mc(5000));
  // Largest |w|^2 over 5000 exponential draws stays below 20.
  const double bound = rate_prefactor(cfg.m) * af_log_term(k, 20.0, 20.0, 20.0);
  CHECK(r.value >= 0.0);
  CHECK(r.value <= bound);
  CHECK(r.samples == 5000);
  CHECK(r.method == Method::MonteCarlo);
  CHECK_FALSE(r.df.has_value());
}

TEST_CASE("gain_scale perturbs the AF rate") {
  const auto cfg = cfg_of(60.0, 40.0, 0.1, 0.1, Scheme::AmplifyForward);
  CHECK(af_rate(cfg, kFig2Stats, mc(10000), 1.01).value > af_rate(cfg, kFig2Stats, mc(10000)).value);
}
