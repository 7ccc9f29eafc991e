#pragma once

#include <cstddef>

#include "dam/asymptotics.hpp"
#include "dam/costs.hpp"
#include "dam/model.hpp"
#include "dam/stationary.hpp"

namespace dam {

struct ObjectiveValue {
    double value = 0;
    double damage_lower = 0; // j1 * L * p1
    double damage_upper = 0; // j2 * L * p2
    double water_cost = 0;   // sum c_i q_i
};

ObjectiveValue exact_objective(const DamModel& model);
ObjectiveValue exact_objective(const DamModel& model, const StationaryDistribution& dist);

// Limiting water cost with the top levels weighted by (1 - x/L)^j (psi) or (1 + x/L)^j (eta).
double psi(const CostProfile& costs, double x);
double eta(const CostProfile& costs, double x);
// The finite-L weighted sums behind psi and eta.
double psi_sum(const CostProfile& costs, double x, std::size_t L);
double eta_sum(const CostProfile& costs, double x, std::size_t L);

inline constexpr std::size_t kCostResolution = 100000;

double j_critical(const HeavyTrafficParams& params, const CostProfile& costs, double j1, double j2);
double j_upper(const HeavyTrafficParams& params, const CostProfile& costs, double j1, double j2);
double j_lower(const HeavyTrafficParams& params, const CostProfile& costs, double j1, double j2);

} // namespace dam
