#pragma once

#include <cstddef>

#include "dam/model.hpp"

namespace dam {

enum class Regime { Critical, Upper, Lower };
const char* regime_name(Regime r);

// Heavy-traffic description: rho1 = 1 (Critical) or 1 +- delta with delta*L -> C.
struct HeavyTrafficParams {
    double Es = 1;    // E batch
    double Es2 = 1;   // E batch^2
    double rho12 = 1; // limit of lambda^2 E B1^2
    double rho2 = 0.5;
    double C = 0;
    Regime regime = Regime::Critical;

    double D() const { return rho12 * Es * Es * Es + Es2 - Es; }
    double x() const { return 2 * C * Es / D(); }
    void validate() const;

    // Moments of the model rescaled to rho1 = 1.
    static HeavyTrafficParams from_model(const DamModel& m, Regime regime = Regime::Critical, double C = 0);
};

enum class RootSide { BelowOne, AboveOne };

struct RootSolution {
    double value = 1;
    double residual = 0;
    RootSide side = RootSide::BelowOne;
};

// Nontrivial root of z = B1^(lambda - lambda R^(z)).
RootSolution find_root(const DamModel& model, RootSide side);
double root_expansion(const HeavyTrafficParams& params, double delta, RootSide side);

// Critical: limits of L*p1, L*p2. Upper/Lower: limits of p1/delta, p2/delta.
struct PLimit {
    double p1 = 0;
    double p2 = 0;
};
PLimit limit_p(const HeavyTrafficParams& params);

// Critical: L*q_{L-j} -> prefactor. Upper/Lower: q_{L-j}/delta -> prefactor * ratio^j,
// with delta = C / L_ref inside the ratio.
struct QLimit {
    double prefactor = 1;
    double ratio = 1;
    double value(std::size_t j) const;
};
QLimit limit_q_form(const HeavyTrafficParams& params, double L_ref);
double limit_q(const HeavyTrafficParams& params, std::size_t j, double L_ref);

} // namespace dam
