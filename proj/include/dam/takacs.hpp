#pragma once

#include <cstddef>
#include <vector>

#include "dam/dist.hpp"
#include "dam/model.hpp"

namespace dam {

struct BusyTable {
    std::vector<double> nu_tilde; // j = 0..L, nu_tilde[0] = 1
    std::vector<double> nu;       // expected B1 services per busy period under threshold j
    std::size_t L = 0;
};

struct LinearReps {
    double nu1 = 0, nu2 = 0;
    double T1 = 0, T2 = 0, T = 0;
    double nu = 0;
};

// Q_0..Q_n of Q_n = sum_{i=0..n} Q_{n-i+1} f_i, solved forward for the highest index.
std::vector<double> solve_takacs(const CoeffSeq& f, double q0, std::size_t n);

BusyTable busy_table(const DamModel& model);

// Pr{min(batch, m) = i}
double truncated_batch_prob(const BatchDistribution& batch, std::size_t m, std::size_t i);
// E min(batch, m)
double truncated_batch_mean(const BatchDistribution& batch, std::size_t m);

// E E{nu^(1) | min(batch, L)} by direct summation over the truncated batch law.
double conditional_nu1(const BusyTable& table, const BatchDistribution& batch);
// E E{nu^(2) | min(batch, L)} from the linear representation in the truncated mean.
double conditional_nu2(const BusyTable& table, const DamModel& model);
// Same quantity summed term by term over the 1-busy-period representation.
double conditional_nu2_direct(const BusyTable& table, const DamModel& model);

LinearReps linear_reps(const BusyTable& table, const DamModel& model);

} // namespace dam
