#pragma once

#include "phasekit/random.hpp"

namespace phasekit::testing {
using phasekit::Rng;
}  // namespace phasekit::testing
