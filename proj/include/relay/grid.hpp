#ifndef RELAY_GRID_HPP
#define RELAY_GRID_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "relay/rates.hpp"

namespace relay {

enum class AllocationMethod { ClosedForm, Grid, GoldenSection };

std::string_view to_string(AllocationMethod method);

/// Outcome of a one-dimensional allocation search (argument is a training
/// fraction or a power split).
struct AllocationResult {
  double argument = 0.0;
  RateEstimate rate;
  AllocationMethod method = AllocationMethod::Grid;
  std::size_t evaluations = 0;
};

/// Closed grid lo, lo+step, ..., hi. Both endpoints are always present; when
/// (hi-lo)/step is an integer N the points are lo + (hi-lo)*k/N so that
/// decimal steps land on their shortest decimal representation.
std::vector<double> grid_points(double lo, double hi, double step);

}  // namespace relay

#endif  // RELAY_GRID_HPP
