#include "relay/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "relay/random.hpp"

namespace relay {

std::string_view to_string(AllocationMethod method) {
  switch (method) {
    case AllocationMethod::ClosedForm: return "closed-form";
    case AllocationMethod::Grid: return "grid";
    case AllocationMethod::GoldenSection: return "golden-section";
  }
  return "unknown";
}

std::vector<double> grid_points(double lo, double hi, double step) {
  if (!(lo < hi) || !(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("grid needs finite lo < hi and step > 0");
  }
  const double span = hi - lo;
  const double ratio = span / step;
  const double whole = std::round(ratio);
  std::vector<double> points;
  if (std::abs(ratio - whole) <= 1e-9 * std::max(1.0, ratio)) {
    const auto n = static_cast<std::size_t>(whole);
    points.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k) points.push_back(lo + span * static_cast<double>(k) / whole);
  } else {
    const auto n = static_cast<std::size_t>(std::ceil(ratio));
    points.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k) points.push_back(lo + step * static_cast<double>(k));
  }
  points.push_back(hi);
  return points;
}

EmpiricalQuality simulate_training_quality(double sigma, double delta, int m, double p, double n0,
                                           std::size_t trials, std::uint64_t seed) {
  check_block_length(m);
  check_nonnegative(sigma, "sigma");
  check_fraction(delta, "delta");
  check_nonnegative(p, "p");
  check_positive(n0, "n0");
  if (trials < 2) throw std::invalid_argument("simulate_training_quality needs at least 2 trials");

  const CounterStream channel(seed, kOracleStreamBase + 1);
  const CounterStream noise(seed, kOracleStreamBase + 2);
  const double var = sigma * sigma;
  const double amplitude = std::sqrt(delta * m * p);
  const double gain = var * amplitude / (var * amplitude * amplitude + n0);

  double sum_est = 0.0, sum_est2 = 0.0, sum_err = 0.0, sum_err2 = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    const std::complex<double> h = channel.complex_normal(i, var);
    const std::complex<double> y = h * amplitude + noise.complex_normal(i, n0);
    const std::complex<double> h_hat = gain * y;
    const double e = std::norm(h_hat);
    const double r = std::norm(h - h_hat);
    sum_est += e;
    sum_est2 += e * e;
    sum_err += r;
    sum_err2 += r * r;
  }
  const double n = static_cast<double>(trials);
  auto std_error = [n](double s, double s2) {
    const double mean = s / n;
    return std::sqrt(std::max(0.0, (s2 / n - mean * mean) * n / (n - 1.0)) / n);
  };

  EmpiricalQuality out;
  out.quality.var_estimate = sum_est / n;
  out.quality.var_error = sum_err / n;
  out.se_estimate = std_error(sum_est, sum_est2);
  out.se_error = std_error(sum_err, sum_err2);
  out.trials = trials;
  return out;
}

DataPhase data_phase(const SystemConfig& cfg, const ChannelStats& stats) {
  cfg.validate();
  stats.validate();
  DataPhase d;
  d.source_energy = data_symbol_energy(cfg.delta_s, cfg.m, cfg.p_s);
  d.relay_energy = data_symbol_energy(cfg.delta_r, cfg.m, cfg.p_r);
  d.sd = mmse_quality(stats.sigma_sd, cfg.delta_s, cfg.m, cfg.p_s, stats.n0);
  d.sr = mmse_quality(stats.sigma_sr, cfg.delta_s, cfg.m, cfg.p_s, stats.n0);
  d.rd = mmse_quality(stats.sigma_rd, cfg.delta_r, cfg.m, cfg.p_r, stats.n0);
  d.n0 = stats.n0;
  return d;
}

VectorChannelSample af_vector_channel(const DataPhase& phase, std::complex<double> h_sd, std::complex<double> h_sr,
                                      std::complex<double> h_rd) {
  // Diagonal of E[z z^H]: estimation error leaks the data symbol into noise.
  const double z_r = phase.sr.var_error * phase.source_energy + phase.n0;
  const double z_d = phase.sd.var_error * phase.source_energy + phase.n0;
  const double z_dr = phase.rd.var_error * phase.relay_energy + phase.n0;

  VectorChannelSample s;
  s.h_hat_sd = h_sd;
  s.h_hat_sr = h_sr;
  s.h_hat_rd = h_rd;
  s.beta = std::sqrt(phase.relay_energy / (std::norm(h_sr) * phase.source_energy + z_r));
  s.a_vec << h_sd, h_rd * s.beta * h_sr;

  Eigen::Matrix<std::complex<double>, 2, 3> b;
  b << 0.0, 1.0, 0.0, h_rd * s.beta, 0.0, 1.0;
  const Eigen::Vector3cd z_cov(z_r, z_d, z_dr);
  s.noise_cov = b * z_cov.asDiagonal() * b.adjoint();
  return s;
}

double af_logdet_term(const VectorChannelSample& sample, double source_energy) {
  const Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity() +
                             source_energy * sample.a_vec * sample.a_vec.adjoint() * sample.noise_cov.inverse();
  return std::log(m.determinant().real());
}

double af_ratio_term(const DataPhase& phase, std::complex<double> h_sd, std::complex<double> h_sr,
                     std::complex<double> h_rd) {
  const double snr_sd = ratio_form_snr(phase.source_energy, phase.sd, std::norm(h_sd), phase.n0);
  const double snr_sr = ratio_form_snr(phase.source_energy, phase.sr, std::norm(h_sr), phase.n0);
  const double snr_rd = ratio_form_snr(phase.relay_energy, phase.rd, std::norm(h_rd), phase.n0);
  return std::log1p(snr_sd + f_combiner(snr_sr, snr_rd));
}

RateEstimate af_rate_logdet(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec) {
  if (spec.method != Method::MonteCarlo) throw std::invalid_argument("af_rate_logdet supports Monte Carlo only");
  if (spec.samples == 0) throw std::invalid_argument("af_rate_logdet needs at least one sample");
  const DataPhase phase = data_phase(cfg, stats);
  const CounterStream sd(spec.seed, kOracleStreamBase + 0x10);
  const CounterStream sr(spec.seed, kOracleStreamBase + 0x11);
  const CounterStream rd(spec.seed, kOracleStreamBase + 0x12);

  const ExpectationResult r = blocked_mean(spec.samples, spec.workers, [&](std::size_t i) {
    const VectorChannelSample s = af_vector_channel(phase, sd.complex_normal(i, phase.sd.var_estimate),
                                                    sr.complex_normal(i, phase.sr.var_estimate),
                                                    rd.complex_normal(i, phase.rd.var_estimate));
    return af_logdet_term(s, phase.source_energy);
  });

  const double pre = rate_prefactor(cfg.m);
  RateEstimate out;
  out.value = pre * r.mean;
  out.std_error = pre * r.std_error;
  out.samples = r.samples;
  out.method = Method::MonteCarlo;
  return out;
}

AllocationResult grid_argmax(const std::function<double(double)>& objective, double lo, double hi, double step) {
  if (!(lo < hi)) throw std::invalid_argument("grid_argmax needs lo < hi");
  if (!(step > 0.0) || step > (hi - lo) / 10.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("grid_argmax step must be in (0, (hi-lo)/10]");
  }
  AllocationResult best;
  best.method = AllocationMethod::Grid;
  best.rate.method = Method::Exact;
  bool first = true;
  for (double x : grid_points(lo, hi, step)) {
    const double v = objective(x);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "grid_argmax: objective is not finite at x=" << x;
      throw std::domain_error(os.str());
    }
    ++best.evaluations;
    if (first || v > best.rate.value) {
      best.argument = x;
      best.rate.value = v;
      first = false;
    }
  }
  return best;
}

}  // namespace relay
