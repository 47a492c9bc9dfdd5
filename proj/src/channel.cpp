#include "relay/channel.hpp"

#include <sstream>

namespace relay {

namespace {

std::string describe(const char* name, double value, const char* requirement) {
  std::ostringstream os;
  os.precision(17);
  os << name << " must be " << requirement << ", got " << value;
  return os.str();
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::AmplifyForward: return "af";
    case Scheme::DfRepetition: return "df-rep";
    case Scheme::DfParallel: return "df-par";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "af") return Scheme::AmplifyForward;
  if (name == "df-rep") return Scheme::DfRepetition;
  if (name == "df-par") return Scheme::DfParallel;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (expected af, df-rep or df-par)");
}

void check_block_length(int m) {
  if (m < 6 || m % 2 != 0) {
    throw std::invalid_argument("block length m must be even and >= 6, got " + std::to_string(m));
  }
}

void check_fraction(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument(describe(name, value, "in [0,1]"));
}

void check_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(describe(name, value, "nonnegative and finite"));
  }
}

void check_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(describe(name, value, "positive and finite"));
  }
}

void ChannelStats::validate() const {
  check_positive(sigma_sd, "sigma_sd");
  check_positive(sigma_sr, "sigma_sr");
  check_positive(sigma_rd, "sigma_rd");
  check_positive(n0, "n0");
}

void SystemConfig::validate() const {
  check_block_length(m);
  check_nonnegative(p_s, "p_s");
  check_nonnegative(p_r, "p_r");
  check_fraction(delta_s, "delta_s");
  check_fraction(delta_r, "delta_r");
}

}  // namespace relay
