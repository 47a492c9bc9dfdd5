#include "relay/rates.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include "relay/random.hpp"

namespace relay {

LinkGains link_gains(const SystemConfig& cfg, const ChannelStats& stats) {
  cfg.validate();
  stats.validate();
  LinkGains k;
  k.sd = snr_gain_g(cfg.delta_s, cfg.p_s, stats.sigma_sd, stats.n0, cfg.m, 1.0);
  k.sr = snr_gain_g(cfg.delta_s, cfg.p_s, stats.sigma_sr, stats.n0, cfg.m, 1.0);
  k.rd = snr_gain_g(cfg.delta_r, cfg.p_r, stats.sigma_rd, stats.n0, cfg.m, 1.0);
  return k;
}

double af_log_term(const LinkGains& k, double w_sd, double w_sr, double w_rd) {
  return std::log1p(k.sd * w_sd + f_combiner(k.sr * w_sr, k.rd * w_rd));
}

double relay_decoding_log_term(const LinkGains& k, double w_sr) { return std::log1p(k.sr * w_sr); }

double df_repetition_destination_log_term(const LinkGains& k, double w_sd, double w_rd) {
  return std::log1p(k.sd * w_sd + k.rd * w_rd);
}

double df_parallel_destination_log_term(const LinkGains& k, double w_sd, double w_rd) {
  // ln(1+x) + ln(1+y) written as ln(1+x+y) + ln(1 + xy/(1+x+y)); the second
  // term is >= 0, so this never rounds below the repetition-coding term.
  const double x = k.sd * w_sd;
  const double y = k.rd * w_rd;
  return std::log1p(x + y) + std::log1p(f_combiner(x, y));
}

namespace {

ExpectationSpec with_dims(ExpectationSpec spec, int dims) {
  spec.dims = dims;
  return spec;
}

SubRate scaled(const ExpectationResult& r, int m) {
  const double pre = rate_prefactor(m);
  // Normalization sanity bound: the mean can never exceed the largest sample.
  if (r.mean < 0.0 || r.mean > r.max_value * (1.0 + 1e-12) + 1e-300) {
    throw std::logic_error("rate expectation outside [0, max integrand]");
  }
  return {pre * r.mean, pre * r.std_error};
}

constexpr std::array<std::uint64_t, 3> kAfStreams{stream_id(Link::SourceDestination), stream_id(Link::SourceRelay),
                                                  stream_id(Link::RelayDestination)};
constexpr std::array<std::uint64_t, 1> kRelayStreams{stream_id(Link::SourceRelay)};
constexpr std::array<std::uint64_t, 2> kDestinationStreams{stream_id(Link::SourceDestination),
                                                           stream_id(Link::RelayDestination)};

template <typename DestinationTerm>
RateEstimate df_rate(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec,
                     DestinationTerm destination_term) {
  const LinkGains k = link_gains(cfg, stats);
  const ExpectationResult relay = expect_over_exponentials(
      [&](std::span<const double> w) { return relay_decoding_log_term(k, w[0]); }, with_dims(spec, 1), kRelayStreams);
  const ExpectationResult destination = expect_over_exponentials(
      [&](std::span<const double> w) { return destination_term(k, w[0], w[1]); }, with_dims(spec, 2),
      kDestinationStreams);

  DfTerms terms{scaled(relay, cfg.m), scaled(destination, cfg.m)};
  const SubRate& binding = terms.relay_binds() ? terms.relay : terms.destination;
  RateEstimate out;
  out.value = binding.value;
  out.std_error = binding.std_error;
  out.samples = spec.method == Method::MonteCarlo ? spec.samples : 0;
  out.method = spec.method;
  out.df = terms;
  return out;
}

}  // namespace

RateEstimate af_rate(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec,
                     double gain_scale) {
  LinkGains k = link_gains(cfg, stats);
  k.sd *= gain_scale;
  k.sr *= gain_scale;
  k.rd *= gain_scale;
  const ExpectationResult r = expect_over_exponentials(
      [&](std::span<const double> w) { return af_log_term(k, w[0], w[1], w[2]); }, with_dims(spec, 3), kAfStreams);
  const SubRate s = scaled(r, cfg.m);
  RateEstimate out;
  out.value = s.value;
  out.std_error = s.std_error;
  out.samples = r.samples;
  out.method = spec.method;
  return out;
}

RateEstimate df_repetition_rate(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec) {
  return df_rate(cfg, stats, spec, df_repetition_destination_log_term);
}

RateEstimate df_parallel_rate(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec) {
  return df_rate(cfg, stats, spec, df_parallel_destination_log_term);
}

RateEstimate evaluate_rate(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec) {
  switch (cfg.scheme) {
    case Scheme::AmplifyForward: return af_rate(cfg, stats, spec);
    case Scheme::DfRepetition: return df_repetition_rate(cfg, stats, spec);
    case Scheme::DfParallel: return df_parallel_rate(cfg, stats, spec);
  }
  throw std::invalid_argument("unknown scheme");
}

}  // namespace relay
