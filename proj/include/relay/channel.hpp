#ifndef RELAY_CHANNEL_HPP
#define RELAY_CHANNEL_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace relay {

/// Relaying strategy used during the data phase.
enum class Scheme { AmplifyForward, DfRepetition, DfParallel };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

/// Fading standard deviations of the three links and the receiver noise
/// variance. Every field is strictly positive and finite.
struct ChannelStats {
  double sigma_sd = 1.0;
  double sigma_sr = 1.0;
  double sigma_rd = 1.0;
  double n0 = 1.0;

  void validate() const;
};

/// One coherence block: m symbols, two of which are pilots (one from the
/// source, one from the relay). The remaining m-2 symbols are split evenly
/// between the source and relay transmissions.
struct SystemConfig {
  int m = 50;
  double p_s = 0.0;
  double p_r = 0.0;
  double delta_s = 0.1;
  double delta_r = 0.1;
  Scheme scheme = Scheme::AmplifyForward;

  void validate() const;
};

/// Second-order statistics of an MMSE channel estimate h = h_hat + h_err.
template <typename Scalar>
struct EstimationQuality {
  Scalar var_estimate{};
  Scalar var_error{};
};

void check_block_length(int m);
void check_fraction(double value, const char* name);
void check_nonnegative(double value, const char* name);
void check_positive(double value, const char* name);

/// MMSE estimation quality after a single pilot carrying energy delta*m*p.
///
/// The error variance is sigma^2 N0 / (sigma^2 delta m p + N0) and the
/// estimate variance is the remainder of sigma^2. A zero sigma is accepted
/// and describes a deterministic zero channel.
template <typename Scalar>
EstimationQuality<Scalar> mmse_quality(Scalar sigma, Scalar delta, int m, Scalar p, Scalar n0) {
  check_block_length(m);
  if (!(sigma >= Scalar(0)) || !std::isfinite(sigma)) {
    throw std::invalid_argument("mmse_quality: sigma must be nonnegative and finite, got " +
                                std::to_string(sigma));
  }
  check_fraction(delta, "delta");
  check_nonnegative(p, "p");
  check_positive(n0, "n0");

  const Scalar var = sigma * sigma;
  const Scalar pilot_snr = var * delta * Scalar(m) * p;
  const Scalar denom = pilot_snr + n0;
  EstimationQuality<Scalar> q;
  q.var_error = var * n0 / denom;
  q.var_estimate = var * pilot_snr / denom;
  return q;
}

/// Per-symbol energy of each (m-2)/2-long data vector once the pilot has
/// consumed its share of the block energy m*p.
template <typename Scalar>
Scalar data_symbol_energy(Scalar delta, int m, Scalar p) {
  if (m < 4 || m % 2 != 0) throw std::invalid_argument("data_symbol_energy: m must be even and >= 4");
  check_fraction(delta, "delta");
  check_nonnegative(p, "p");
  return Scalar(2) * (Scalar(1) - delta) * Scalar(m) * p / Scalar(m - 2);
}

/// Number of data symbols each transmitter sends per block.
inline int data_half_length(int m) { return (m - 2) / 2; }

}  // namespace relay

#endif  // RELAY_CHANNEL_HPP
