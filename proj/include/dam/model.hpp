#pragma once

#include <cstddef>

#include "dam/costs.hpp"
#include "dam/dist.hpp"

namespace dam {

struct DamModel {
    double lambda = 1.0;
    BatchDistribution batch;
    ServiceDistribution service1;
    ServiceDistribution service2;
    std::size_t L = 10;
    double j1 = 1.0;
    double j2 = 1.0;
    CostProfile costs;

    double rho1() const { return lambda * batch.m1() * service1.mean(); }
    double rho2() const { return lambda * batch.m1() * service2.mean(); }
    // lambda^l times the l-th raw moment of the normal-regime service
    double rho1_moment(int l) const;

    // Throws DomainError on the first violated invariant. Does not require rho2 < 1.
    void validate() const;

    // Copy with the normal-regime service rescaled in time so that rho1 == target.
    DamModel with_rho1(double target) const;
};

} // namespace dam
