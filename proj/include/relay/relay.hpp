#ifndef RELAY_RELAY_HPP
#define RELAY_RELAY_HPP

#include "relay/channel.hpp"
#include "relay/expectation.hpp"
#include "relay/grid.hpp"
#include "relay/optimize.hpp"
#include "relay/oracle.hpp"
#include "relay/random.hpp"
#include "relay/rates.hpp"

#endif  // RELAY_RELAY_HPP
