#ifndef RELAY_OPTIMIZE_HPP
#define RELAY_OPTIMIZE_HPP

#include <cstddef>
#include <vector>

#include "relay/channel.hpp"
#include "relay/expectation.hpp"
#include "relay/grid.hpp"
#include "relay/rates.hpp"

namespace relay {

/// Split of a total power budget: the source gets theta*total and the relay
/// the remainder.
struct PowerSplit {
  double total = 0.0;
  double theta = 0.5;

  double source() const { return theta * total; }
  double relay() const { return total - source(); }
};

/// Coefficient of |w|^2 in g for a link with the given training fraction.
double training_gain_coefficient(double delta, int m, double p, double sigma, double n0);

/// Training fraction that maximizes training_gain_coefficient, in closed
/// form. Always lies in (0, 1/2) for valid inputs; throws std::domain_error
/// carrying the inputs if the expression leaves (0,1).
double optimal_delta_r(int m, double p, double sigma, double n0);

/// Closed form cross-checked against a step-1e-4 grid search of the same
/// coefficient. Throws std::logic_error when the two disagree by more than
/// kClosedFormTolerance.
AllocationResult checked_optimal_delta(int m, double p, double sigma, double n0);

inline constexpr double kClosedFormTolerance = 1e-3;

/// Per-link source training fractions: `direct` maximizes g on the
/// source-destination link, `relay` on the source-relay link.
struct SourceTrainingCandidates {
  double direct = 0.0;
  double relay = 0.0;
};

SourceTrainingCandidates suboptimal_delta_s(int m, double p_s, const ChannelStats& stats);

struct SweepPoint {
  double argument = 0.0;
  RateEstimate rate;
};

struct Sweep {
  AllocationResult best;
  std::vector<SweepPoint> curve;
};

/// Rate as a function of theta on grid_points(0, 1, grid_step). Every point
/// uses spec.seed, so all points see the same fading draws.
Sweep optimize_theta(double total_power, const ChannelStats& stats, int m, double delta_s, double delta_r,
                     Scheme scheme, const ExpectationSpec& spec, double grid_step = 0.01);

/// Grid search of delta_r against the full rate of `cfg` (all other fields
/// held fixed), with common random numbers across grid points.
Sweep global_delta_r(const SystemConfig& cfg, const ChannelStats& stats, const ExpectationSpec& spec,
                     double grid_step = 0.01);

struct JointOptions {
  double theta_step = 0.01;
  /// Replace the closed-form delta_r with global_delta_r at each theta.
  bool global_delta = false;
  double delta_step = 0.01;
};

struct JointAllocation {
  double theta = 0.0;
  double delta_s = 0.0;
  double delta_r = 0.0;
  RateEstimate rate;
  std::size_t evaluations = 0;
};

/// For each theta: closed-form delta_r for the relay link, the better of the
/// two source candidates by direct rate comparison, then keep the best triple.
/// A node with zero power gets training fraction 0.
JointAllocation joint_allocation(double total_power, const ChannelStats& stats, int m, Scheme scheme,
                                 const ExpectationSpec& spec, const JointOptions& options = {});

}  // namespace relay

#endif  // RELAY_OPTIMIZE_HPP
