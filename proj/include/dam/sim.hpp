#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dam/model.hpp"

namespace dam {

struct Estimate {
    double value = 0;
    double se = 0;
};

struct SimulationResult {
    Estimate p1;         // empty system
    Estimate p2_service; // a B2 service in progress
    Estimate p2_level;   // level above L
    Estimate b1_busy;    // a B1 service in progress
    std::vector<Estimate> q;         // q[i-1]: level == i, i = 1..L
    std::vector<Estimate> q_service; // B1 service in progress started at queue length i, i = 0..L
    Estimate busy_customers;         // customers served per busy period

    double observed_time = 0;
    double idle_time = 0, b1_time = 0, b2_time = 0;
    std::uint64_t events = 0;
    std::uint64_t busy_cycles = 0;
    std::uint64_t seed = 0;
    std::size_t replications = 1;
    std::string rng;
};

inline constexpr const char* kRngName = "mt19937_64/splitmix64";

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

SimulationResult simulate(const DamModel& model, std::uint64_t min_events, double warmup_fraction, std::uint64_t seed);

// Independent runs with derived seeds; pooled means and between-replication standard errors.
SimulationResult replicate(const DamModel& model, std::size_t n_reps, std::uint64_t base_seed,
                           std::uint64_t min_events, double warmup_fraction = 0.2);

} // namespace dam
