#include "relay/optimize.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "relay/oracle.hpp"

namespace relay {

double training_gain_coefficient(double delta, int m, double p, double sigma, double n0) {
  return snr_gain_g(delta, p, sigma, n0, m, 1.0);
}

double optimal_delta_r(int m, double p, double sigma, double n0) {
  check_block_length(m);
  check_positive(p, "power");
  check_positive(sigma, "sigma");
  check_positive(n0, "n0");

  const double md = m;
  const double s2 = sigma * sigma;
  const double ps2 = p * s2;
  const double disc = -4.0 * md * md * ps2 * ps2 - 2.0 * md * md * ps2 * n0 + md * md * n0 * n0 -
                      4.0 * md * n0 * n0 + 4.0 * n0 * n0 + 2.0 * md * md * md * ps2 * ps2 +
                      md * md * md * ps2 * n0;
  const double den = -4.0 * md * ps2 + md * md * ps2;
  const double delta =
      disc >= 0.0 ? 0.5 * (-4.0 * md * ps2 - 2.0 * md * n0 + 4.0 * n0 + 2.0 * std::sqrt(disc)) / den : NAN;
  if (!(delta > 0.0 && delta < 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "closed-form training fraction invalid (" << delta << ") for m=" << m << " p=" << p << " sigma=" << sigma
       << " n0=" << n0;
    throw std::domain_error(os.str());
  }
  return delta;
}

AllocationResult checked_optimal_delta(int m, double p, double sigma, double n0) {
  const double closed = optimal_delta_r(m, p, sigma, n0);
  const AllocationResult grid =
      grid_argmax([&](double d) { return training_gain_coefficient(d, m, p, sigma, n0); }, 0.0, 1.0, 1e-4);
  if (std::abs(grid.argument - closed) > kClosedFormTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "closed-form training fraction " << closed << " disagrees with grid search " << grid.argument
       << " for m=" << m << " p=" << p << " sigma=" << sigma << " n0=" << n0;
    throw std::logic_error(os.str());
  }
  AllocationResult out;
  out.argument = closed;
  out.method = AllocationMethod::ClosedForm;
  out.rate.method = Method::Exact;
  out.rate.value = training_gain_coefficient(closed, m, p, sigma, n0);
  out.evaluations = grid.evaluations + 1;
  return out;
}

SourceTrainingCandidates suboptimal_delta_s(int m, double p_s, const ChannelStats& stats) {
  stats.validate();
  return {optimal_delta_r(m, p_s, stats.sigma_sd, stats.n0), optimal_delta_r(m, p_s, stats.sigma_sr, stats.n0)};
}

namespace {

void keep_best(Sweep& sweep, double argument, const RateEstimate& rate) {
  sweep.curve.push_back({argument, rate});
  ++sweep.best.evaluations;
  if (sweep.curve.size() == 1 || rate.value > sweep.best.rate.value) {
    sweep.best.argument = argument;
    sweep.best.rate = rate;
  }
}

}  // namespace

Sweep optimize_theta(double total_power, const ChannelStats& stats, int m, double delta_s, double delta_r,
                     Scheme scheme, const ExpectationSpec& spec, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.1)) throw std::invalid_argument("theta grid step must be in (0, 0.1]");
  check_nonnegative(total_power, "total power");
  stats.validate();

  Sweep sweep;
  sweep.best.method = AllocationMethod::Grid;
  for (double theta : grid_points(0.0, 1.0, grid_step)) {
    const PowerSplit split{total_power, theta};
    const SystemConfig cfg{m, split.source(), split.relay(), delta_s, delta_r, scheme};
    keep_best(sweep, theta, evaluate_rate(cfg, stats, spec));
  }
  return sweep;
}

Sweep global_delta_r(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec,
                     double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.1)) throw std::invalid_argument("delta grid step must be in (0, 0.1]");
  Sweep sweep;
  sweep.best.method = AllocationMethod::Grid;
  for (double delta : grid_points(0.0, 1.0, grid_step)) {
    SystemConfig c = cfg;
    c.delta_r = delta;
    keep_best(sweep, delta, evaluate_rate(c, stats, spec));
  }
  return sweep;
}

JointAllocation joint_allocation(double total_power, const ChannelStats& stats, int m, Scheme scheme,
                                 const ExpectationSpec& spec, const JointOptions& options) {
  if (!(options.theta_step > 0.0 && options.theta_step <= 0.1)) {
    throw std::invalid_argument("theta grid step must be in (0, 0.1]");
  }
  check_positive(total_power, "total power");
  stats.validate();

  JointAllocation best;
  bool first = true;
  for (double theta : grid_points(0.0, 1.0, options.theta_step)) {
    const PowerSplit split{total_power, theta};
    SystemConfig cfg{m, split.source(), split.relay(), 0.0, 0.0, scheme};

    SourceTrainingCandidates source{};
    if (cfg.p_s > 0.0) source = suboptimal_delta_s(m, cfg.p_s, stats);

    if (cfg.p_r > 0.0) {
      if (options.global_delta) {
        cfg.delta_s = source.direct;
        const Sweep g = global_delta_r(cfg, stats, spec, options.delta_step);
        best.evaluations += g.best.evaluations;
        cfg.delta_r = g.best.argument;
      } else {
        cfg.delta_r = optimal_delta_r(m, cfg.p_r, stats.sigma_rd, stats.n0);
      }
    }

    cfg.delta_s = source.direct;
    RateEstimate rate = evaluate_rate(cfg, stats, spec);
    ++best.evaluations;
    if (source.relay != source.direct) {
      SystemConfig alt = cfg;
      alt.delta_s = source.relay;
      const RateEstimate alt_rate = evaluate_rate(alt, stats, spec);
      ++best.evaluations;
      if (alt_rate.value > rate.value) {
        cfg = alt;
        rate = alt_rate;
      }
    }

    if (first || rate.value > best.rate.value) {
      best.theta = theta;
      best.delta_s = cfg.delta_s;
      best.delta_r = cfg.delta_r;
      best.rate = rate;
      first = false;
    }
  }
  return best;
}

}  // namespace relay
