#ifndef RELAY_ORACLE_HPP
#define RELAY_ORACLE_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "relay/channel.hpp"
#include "relay/grid.hpp"
#include "relay/rates.hpp"

namespace relay {

// Independent reference evaluators. None of these reuse the normalized
// |w|^2 formulation of the rates module.

struct EmpiricalQuality {
  EstimationQuality<double> quality;
  double se_estimate = 0.0;
  double se_error = 0.0;
  std::size_t trials = 0;
};

/// Symbol-level pilot simulation: draws h ~ CN(0, sigma^2) and noise
/// n ~ CN(0, N0), observes y = h sqrt(delta m p) + n, applies the scalar MMSE
/// estimator and reports the empirical second moments of h_hat and h - h_hat.
EmpiricalQuality simulate_training_quality(double sigma, double delta, int m, double p, double n0,
                                           std::size_t trials, std::uint64_t seed);

/// Energies and estimation statistics seen during the data phase.
struct DataPhase {
  double source_energy = 0.0;  // E|x_s|^2 per symbol
  double relay_energy = 0.0;   // E|x_r|^2 per symbol
  EstimationQuality<double> sd, sr, rd;
  double n0 = 1.0;
};

DataPhase data_phase(const SystemConfig& cfg, const ChannelStats& stats);

/// Per-symbol AF channel y = A x_s + B z with z = (z_r, z_d, z_d^r).
struct VectorChannelSample {
  std::complex<double> h_hat_sd, h_hat_sr, h_hat_rd;
  double beta = 0.0;
  Eigen::Vector2cd a_vec;
  Eigen::Matrix2cd noise_cov;  // B E[z z^H] B^H
};

/// Builds A, B and the effective noise covariance with the relay gain at its
/// power limit, beta^2 = E|x_r|^2 / (|h_hat_sr|^2 E|x_s|^2 + E|z_r|^2).
VectorChannelSample af_vector_channel(const DataPhase& phase, std::complex<double> h_sd, std::complex<double> h_sr,
                                      std::complex<double> h_rd);

/// ln det(I + E|x_s|^2 A A^H (B E[zz^H] B^H)^{-1}).
double af_logdet_term(const VectorChannelSample& sample, double source_energy);

/// ln(1 + SNR_sd + f(SNR_sr, SNR_rd)) with each SNR in ratio form.
double af_ratio_term(const DataPhase& phase, std::complex<double> h_sd, std::complex<double> h_sr,
                     std::complex<double> h_rd);

/// Monte Carlo of the log-det AF rate over h_hat ~ CN(0, var_estimate).
/// Uses random streams disjoint from the rates module; only
/// Method::MonteCarlo is accepted.
RateEstimate af_rate_logdet(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec);

/// Stream id base used by the oracle's own draws.
inline constexpr std::uint64_t kOracleStreamBase = 0x4F52414300000000ULL;

/// Exhaustive search over grid_points(lo, hi, step). Ties go to the smallest
/// argument. Requires lo < hi and step <= (hi-lo)/10; a non-finite objective
/// value throws.
AllocationResult grid_argmax(const std::function<double(double)>& objective, double lo, double hi, double step);

}  // namespace relay

#endif  // RELAY_ORACLE_HPP
