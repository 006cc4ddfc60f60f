#pragma once

#include <string>
#include <vector>

#include "gaspipe/config.hpp"

namespace gaspipe {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

/// Invariant suite on the configured scenario (scaled units):
/// PP orthogonality, boundary exactness of the corrections in both regimes,
/// frozen-schedule degeneracy, calibration round trip, reference line-pack
/// balance and the stationary fixed point.
std::vector<CheckResult> validate_scenario(const ScenarioConfig& config);

}  // namespace gaspipe
