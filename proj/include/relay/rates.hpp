#ifndef RELAY_RATES_HPP
#define RELAY_RATES_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

#include "relay/channel.hpp"
#include "relay/expectation.hpp"

namespace relay {

/// Effective SNR of one trained link as a function of the normalized
/// estimate power w_sq = |w|^2, w ~ CN(0,1):
///
///   g = 2a(1-a) m^2 b^2 c^4 w_sq / [2(1-a) m b c^2 N0 + (m-2)(c^2 a m b + N0) N0]
///
/// with a the training fraction, b the power and c the fading std. dev.
template <typename Scalar>
Scalar snr_gain_g(Scalar a, Scalar b, Scalar c, Scalar n0, int m, Scalar w_sq) {
  check_block_length(m);
  check_fraction(a, "training fraction");
  check_nonnegative(b, "power");
  check_nonnegative(c, "fading std. dev.");
  check_positive(n0, "n0");
  check_nonnegative(w_sq, "|w|^2");

  const Scalar md = Scalar(m);
  const Scalar c2 = c * c;
  const Scalar num = Scalar(2) * a * (Scalar(1) - a) * md * md * b * b * c2 * c2;
  const Scalar den = Scalar(2) * (Scalar(1) - a) * md * b * c2 * n0 + Scalar(m - 2) * (c2 * a * md * b + n0) * n0;
  return num / den * w_sq;
}

/// End-to-end SNR of a two-hop amplified path, xy / (1 + x + y).
template <typename Scalar>
Scalar f_combiner(Scalar x, Scalar y) {
  return x * y / (Scalar(1) + (x + y));
}

/// SNR after treating the estimation error as additive noise:
/// E |h_hat|^2 / (E var_error + N0).
template <typename Scalar>
Scalar ratio_form_snr(Scalar energy, const EstimationQuality<Scalar>& q, Scalar h_hat_sq, Scalar n0) {
  return energy * h_hat_sq / (energy * q.var_error + n0);
}

/// Fraction of the block that carries source data: (m-2)/(2m).
inline double rate_prefactor(int m) { return static_cast<double>(m - 2) / (2.0 * m); }

/// Per-link coefficients of |w|^2 in g, i.e. g_link = coefficient * |w|^2.
struct LinkGains {
  double sd = 0.0;
  double sr = 0.0;
  double rd = 0.0;
};

LinkGains link_gains(const SystemConfig& cfg, const ChannelStats& stats);

/// Per-sample integrands (natural log) of the three rate expressions.
double af_log_term(const LinkGains& k, double w_sd, double w_sr, double w_rd);
double relay_decoding_log_term(const LinkGains& k, double w_sr);
double df_repetition_destination_log_term(const LinkGains& k, double w_sd, double w_rd);
double df_parallel_destination_log_term(const LinkGains& k, double w_sd, double w_rd);

struct SubRate {
  double value = 0.0;
  double std_error = 0.0;
};

/// The two mutual-information constraints of a decode-and-forward rate.
struct DfTerms {
  SubRate relay;        // relay must decode (I_1)
  SubRate destination;  // destination combines both transmissions (I_2)

  bool relay_binds() const { return relay.value <= destination.value; }
};

/// Rate in nats per channel use.
struct RateEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  Method method = Method::MonteCarlo;
  std::optional<DfTerms> df;
};

/// Worst-case AF lower bound. `gain_scale` multiplies every g and exists only
/// so the verification harness can inject a known error.
RateEstimate af_rate(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec,
                     double gain_scale = 1.0);

RateEstimate df_repetition_rate(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec);

RateEstimate df_parallel_rate(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec);

/// Dispatches on cfg.scheme.
RateEstimate evaluate_rate(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec);

}  // namespace relay

#endif  // RELAY_RATES_HPP
