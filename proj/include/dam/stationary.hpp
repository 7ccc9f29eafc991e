#pragma once

#include <cstddef>
#include <vector>

#include "dam/model.hpp"
#include "dam/takacs.hpp"

namespace dam {

struct StationaryDistribution {
    double p1 = 0; // empty system
    double p2 = 0; // a B2 service in progress
    // q[i-1] = Pr{level = i}, i = 1..L (time average)
    std::vector<double> q;
    // q_service[i]: a B1 service in progress that started at queue length i, i = 0..L.
    // Index 0 is the service opening a busy period. p1 + p2 + sum(q_service) = 1.
    std::vector<double> q_service;
    // Pr{level > L} = 1 - p1 - sum(q)
    double overflow = 0;

    double q_at(std::size_t i) const { return q.at(i - 1); }
};

StationaryDistribution stationary_distribution(const DamModel& model);
StationaryDistribution stationary_distribution(const DamModel& model, const BusyTable& table);

} // namespace dam
